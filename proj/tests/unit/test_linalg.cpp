#include <doctest.h>

#include <algorithm>
#include <random>

#include <Eigen/Eigenvalues>

#include "ptlab/linalg.hpp"

using namespace ptlab::linalg;

namespace {

std::vector<cd> dense_eigs(const Eigen::MatrixXcd& m) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, false);
  const auto& v = es.eigenvalues();
  return {v.data(), v.data() + v.size()};
}

double max_match_error(const std::vector<cd>& a, const std::vector<cd>& b) {
  const auto m = match_nearest(a, b);
  double e = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, std::abs(a[i] - m[i]));
  return e;
}

}  // namespace

TEST_CASE("complex symmetric tridiagonal QL agrees with a dense eigensolver") {
  std::mt19937 rng(11);
  std::normal_distribution<double> d;
  for (int n : {1, 2, 3, 10, 50}) {
    CAPTURE(n);
    std::vector<cd> diag(n), off(n > 0 ? n - 1 : 0);
    for (auto& z : diag) z = cd(d(rng), d(rng));
    for (auto& z : off) z = cd(d(rng), d(rng));
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = diag[i];
    for (int i = 0; i + 1 < n; ++i) m(i, i + 1) = m(i + 1, i) = off[i];
    const auto ql = symmetric_tridiagonal_eigenvalues(diag, off);
    CHECK(max_match_error(ql, dense_eigs(m)) < 1e-10);
  }
}

TEST_CASE("non-symmetric tridiagonal is symmetrized by diagonal similarity") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(0.5, 2.0);
  const int n = 40;
  Tridiagonal t;
  t.diag.resize(n);
  t.lower.resize(n - 1);
  t.upper.resize(n - 1);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = t.diag[i] = cd(u(rng), u(rng) - 1.25);
  for (int i = 0; i + 1 < n; ++i) {
    m(i + 1, i) = t.lower[i] = cd(-u(rng), 0.1 * u(rng));
    m(i, i + 1) = t.upper[i] = cd(-u(rng), -0.2 * u(rng));
  }
  CHECK(max_match_error(t.eigenvalues(), dense_eigs(m)) < 1e-10);
}

TEST_CASE("real symmetric input gives real eigenvalues") {
  const int n = 100;
  std::vector<cd> diag(n, 2.0), off(n - 1, -1.0);
  auto ev = symmetric_tridiagonal_eigenvalues(diag, off);
  std::sort(ev.begin(), ev.end(), [](cd a, cd b) { return a.real() < b.real(); });
  for (int k = 0; k < n; ++k) {
    const double exact = 2.0 - 2.0 * std::cos((k + 1) * M_PI / (n + 1));
    CHECK(std::abs(ev[k] - exact) < 1e-12);
  }
}

TEST_CASE("banded matrix apply and LU solve") {
  std::mt19937 rng(9);
  std::normal_distribution<double> d;
  const int n = 30;
  BandedMatrix b(n, 2, 2);
  for (int i = 0; i < n; ++i) {
    for (int j = std::max(0, i - 2); j <= std::min(n - 1, i + 2); ++j) b(i, j) = cd(d(rng), d(rng));
    b(i, i) += 8.0;
  }
  std::vector<cd> x(n);
  for (auto& z : x) z = cd(d(rng), d(rng));
  const auto y = b.apply(x);
  const Eigen::VectorXcd ye = b.to_dense() * Eigen::Map<const Eigen::VectorXcd>(x.data(), n);
  for (int i = 0; i < n; ++i) CHECK(std::abs(y[i] - ye(i)) < 1e-12);

  const BandedLU lu(b);
  const auto xs = lu.solve(y);
  for (int i = 0; i < n; ++i) CHECK(std::abs(xs[i] - x[i]) < 1e-11);
}

TEST_CASE("inverse iteration converges to the eigenpair nearest the shift") {
  const int n = 200;
  const double h = 1.0 / (n + 1);
  BandedMatrix b(n, 1, 1);
  for (int i = 0; i < n; ++i) {
    b(i, i) = 2.0 / (h * h);
    if (i > 0) b(i, i - 1) = -1.0 / (h * h);
    if (i + 1 < n) b(i, i + 1) = -1.0 / (h * h);
  }
  const double exact = (2.0 - 2.0 * std::cos(3 * M_PI * h)) / (h * h);
  const auto ep = inverse_iteration(b, exact * 1.001);
  CHECK(std::abs(ep.value - exact) < 1e-8 * exact);
  CHECK(ep.residual < 1e-8 * exact);
}

TEST_CASE("richardson removes the leading error term") {
  // f(h) = 1 + h^2 + h^4
  auto f = [](double h) { return cd(1.0 + h * h + h * h * h * h); };
  const cd r = richardson(f(0.2), f(0.1), 2);
  CHECK(std::abs(r - 1.0) < 1e-3);
  CHECK(std::abs(r - 1.0) < std::abs(f(0.1) - 1.0) / 10);
}
