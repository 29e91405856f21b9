#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "ptlab/error.hpp"
#include "ptlab/fock.hpp"
#include "ptlab/metric.hpp"

using namespace ptlab;
using cd = std::complex<double>;

namespace {

std::vector<cd> sorted(std::vector<cd> v) {
  std::sort(v.begin(), v.end(), [](cd a, cd b) { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); });
  return v;
}

}  // namespace

TEST_CASE("ansatz basis is Hermitian and named") {
  const auto b = metric::ansatz_basis(12, metric::kMaxAnsatz);
  REQUIRE(b.size() == metric::kMaxAnsatz);
  for (const auto& m : b) CHECK((m - m.adjoint()).norm() < 1e-14);
  CHECK(metric::ansatz_names(3).size() == 3);
  CHECK_THROWS_AS(metric::ansatz_basis(12, 0), ConfigError);
  CHECK_THROWS_AS(metric::ansatz_basis(12, metric::kMaxAnsatz + 1), ConfigError);
}

TEST_CASE("hermitian_exp against the eigen-decomposition") {
  const auto b = metric::ansatz_basis(8, 3);
  const Eigen::MatrixXcd a = 0.2 * b[0] - 0.1 * b[1] + 0.05 * b[2];
  const Eigen::MatrixXcd e = metric::hermitian_exp(a);
  // exp(A) exp(-A) = 1 and exp(A/2)^2 = exp(A)
  CHECK((e * metric::hermitian_exp(-a) - Eigen::MatrixXcd::Identity(8, 8)).norm() < 1e-12);
  const Eigen::MatrixXcd half = metric::hermitian_exp(0.5 * a);
  CHECK((half * half - e).norm() < 1e-12);
}

TEST_CASE("analytic gradient matches central differences") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n01(0.0, 0.05);
  const auto h = fock::reggeon_single_site(1.0, 0.3, 10).matrix;
  const auto s = fock::swanson_model(2.0, 0.5, 0.3, 10).matrix;
  for (const Eigen::MatrixXcd* m : {&h, &s}) {
    const auto basis = metric::ansatz_basis(10, metric::kMaxAnsatz);
    for (int trial = 0; trial < 4; ++trial) {
      std::vector<double> theta(basis.size());
      for (double& t : theta) t = n01(rng);
      std::vector<double> grad;
      metric::objective(*m, basis, theta, &grad);
      for (std::size_t k = 0; k < theta.size(); ++k) {
        const double e = 1e-6;
        auto p = theta, q = theta;
        p[k] += e;
        q[k] -= e;
        const double fd = (metric::objective(*m, basis, p, nullptr) - metric::objective(*m, basis, q, nullptr)) / (2 * e);
        CAPTURE(k);
        CHECK(std::abs(grad[k] - fd) <= 1e-6 * std::max(1.0, std::abs(fd)));
      }
    }
  }
}

TEST_CASE("Hermitian input: zero ansatz is optimal") {
  const auto h = fock::swanson_model(2.0, 0.4, 0.4, 16).matrix;
  REQUIRE((h - h.adjoint()).norm() < 1e-14);
  const auto r = metric::metric_search(h, 3);
  CHECK(r.residual < 1e-12);
  CHECK(r.converged);
  CHECK(r.positive);
  for (double t : r.theta) CHECK(std::abs(t) < 1e-10);
}

TEST_CASE("swanson metric from the quadratic ansatz") {
  for (int dim : {12, 40}) {
    CAPTURE(dim);
    const auto h = fock::swanson_model(2.0, 0.5, 0.3, dim).matrix;
    const auto r = metric::metric_search(h, 3);
    CHECK(r.residual < 1e-8);
    CHECK(r.converged);
    CHECK(r.positive);
    CHECK(r.ansatz.size() == 3);
    // lands on the diagonal metric exp(theta N), theta = ln(gt/g)/4 (the metric
    // is not unique, so only the residual is held to 1e-8)
    CHECK(std::abs(r.theta[0] - 0.25 * std::log(0.3 / 0.5)) < 1e-4);

    // similarity keeps the spectrum
    const Eigen::MatrixXcd k = r.eta * h * r.eta.inverse();
    const auto e1 = sorted(fock::eigenvalues(h));
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(0.5 * (k + k.adjoint()), false);
    const auto e2 = sorted({es.eigenvalues().data(), es.eigenvalues().data() + dim});
    for (int n = 0; n < 10; ++n) CHECK(std::abs(e1[n] - e2[n]) < 1e-8);
  }
}

TEST_CASE("restarts are deterministic and recorded") {
  const auto h = fock::swanson_model(2.0, 0.5, 0.3, 12).matrix;
  metric::Options o;
  o.restarts = 3;
  o.seed = 42;
  const auto a = metric::metric_search(h, 3, o);
  const auto b = metric::metric_search(h, 3, o);
  REQUIRE(a.start_residuals.size() == 4);
  CHECK(a.start_residuals == b.start_residuals);
  CHECK(a.theta == b.theta);
  CHECK_THROWS_AS(metric::metric_search(h, 13), ConfigError);
}

TEST_CASE("swanson beyond the threshold: truncated matrix still admits a metric") {
  // With g gt > 0 the truncation is diagonally similar to a Hermitian matrix at
  // every dim, so the residual is driven to zero; measured, not a failure.
  const auto h = fock::swanson_model(1.0, 0.8, 0.5, 20).matrix;
  metric::Options o;
  o.restarts = 20;
  const auto r = metric::metric_search(h, 3, o);
  CHECK(r.start_residuals.size() == 21);
  CHECK(r.residual < 1e-8);
  CHECK(std::abs(r.theta[0] - 0.25 * std::log(0.5 / 0.8)) < 1e-4);
}
