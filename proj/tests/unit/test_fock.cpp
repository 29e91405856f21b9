#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "ptlab/error.hpp"
#include "ptlab/fock.hpp"

using namespace ptlab;
using cd = std::complex<double>;

namespace {

// Ladder operators on a larger space, products formed there and cropped, so
// no truncation artefact enters the oracle.
Eigen::MatrixXcd cropped_product_oracle(int dim, double delta, double g) {
  const int big = dim + 3;
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(big, big);
  for (int n = 0; n + 1 < big; ++n) a(n, n + 1) = std::sqrt(n + 1.0);
  const Eigen::MatrixXcd ad = a.adjoint();
  const Eigen::MatrixXcd h = delta * ad * a + cd(0.0, g) * (ad * a * a + ad * ad * a);
  return h.topLeftCorner(dim, dim);
}

constexpr double kSwansonE0 = -0.078045554270711269;
constexpr double kSwansonSpacing = 1.8439088914585775;

}  // namespace

TEST_CASE("ladder operators") {
  const auto a = fock::annihilation(6);
  const auto ad = fock::creation(6);
  const Eigen::MatrixXcd n = ad * a;
  CHECK((n - fock::number(6)).norm() < 1e-14);
  CHECK(std::abs(a(2, 3) - std::sqrt(3.0)) < 1e-15);
}

TEST_CASE("reggeon matrix against ladder products") {
  for (int dim : {4, 7, 30}) {
    const auto h = fock::reggeon_single_site(1.3, 0.7, dim);
    CHECK(h.dim == dim);
    CHECK((h.matrix - cropped_product_oracle(dim, 1.3, 0.7)).norm() < 1e-12);
  }
  // <n|H|n+1> = <n+1|H|n> = i g n sqrt(n+1)
  const auto h = fock::reggeon_single_site(1.0, 0.5, 10);
  for (int n = 0; n + 1 < 10; ++n) {
    const cd want(0.0, 0.5 * n * std::sqrt(n + 1.0));
    CHECK(std::abs(h.matrix(n, n + 1) - want) < 1e-14);
    CHECK(std::abs(h.matrix(n + 1, n) - want) < 1e-14);
  }
  CHECK_THROWS_AS(fock::reggeon_single_site(1.0, 0.3, 3), ConfigError);
}

TEST_CASE("zero coupling gives the number spectrum") {
  const auto r = fock::reggeon_single_site(1.5, 0.0, 8);
  const auto s = fock::swanson_model(1.5, 0.0, 0.0, 8);
  for (int n = 0; n < 8; ++n) {
    CHECK(std::abs(r.matrix(n, n) - 1.5 * n) < 1e-15);
    CHECK(std::abs(s.matrix(n, n) - 1.5 * n) < 1e-15);
  }
  CHECK((r.matrix - r.matrix.diagonal().asDiagonal().toDenseMatrix()).norm() == 0.0);
  CHECK((s.matrix - s.matrix.diagonal().asDiagonal().toDenseMatrix()).norm() == 0.0);
}

TEST_CASE("swanson is pentadiagonal") {
  const auto s = fock::swanson_model(2.0, 0.5, 0.3, 12);
  for (int i = 0; i < 12; ++i) {
    for (int j = 0; j < 12; ++j) {
      if (std::abs(i - j) == 1 || std::abs(i - j) > 2) CHECK(s.matrix(i, j) == cd(0.0));
    }
  }
  CHECK(std::abs(s.matrix(2, 0) - 0.5 * std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(s.matrix(0, 2) - 0.3 * std::sqrt(2.0)) < 1e-15);
}

TEST_CASE("PT symmetry in the Fock basis") {
  CHECK(fock::is_pt_symmetric(fock::reggeon_single_site(1.0, 0.3, 20).matrix));
  CHECK(fock::is_pt_symmetric(fock::swanson_model(2.0, 0.5, 0.3, 20).matrix));
  Eigen::MatrixXcd broken = fock::reggeon_single_site(1.0, 0.3, 20).matrix;
  broken(0, 1) += 0.1;
  CHECK(!fock::is_pt_symmetric(broken, 1e-6));
}

TEST_CASE("eigenvalues: gauged real path agrees with the complex solver") {
  const auto h = fock::reggeon_single_site(1.0, 0.3, 40).matrix;
  auto fast = fock::eigenvalues(h);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(h, false);
  std::vector<cd> ref(es.eigenvalues().data(), es.eigenvalues().data() + 40);
  auto key = [](cd a, cd b) { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); };
  std::sort(fast.begin(), fast.end(), key);
  std::sort(ref.begin(), ref.end(), key);
  // the gauged problem returns exact conjugate pairs; compare the low levels
  for (int k = 0; k < 5; ++k) CHECK(std::abs(fast[k] - ref[k]) < 1e-8);

  // a matrix without PT symmetry goes through the complex solver
  std::mt19937 rng(3);
  std::normal_distribution<double> n01;
  Eigen::MatrixXcd r(6, 6);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) r(i, j) = cd(n01(rng), n01(rng));
  const auto ev = fock::eigenvalues(r);
  cd trace = 0.0;
  for (const cd& e : ev) trace += e;
  CHECK(std::abs(trace - r.trace()) < 1e-10);
}

TEST_CASE("swanson matches the Bogoliubov oracle") {
  const auto rep = fock::fock_spectrum(
      "swanson", {}, [](int d) { return fock::swanson_model(2.0, 0.5, 0.3, d); }, 120, 10, 40);
  REQUIRE(rep.eigenvalues.size() == 10);
  for (int n = 0; n < 10; ++n) {
    CAPTURE(n);
    CHECK(std::abs(rep.eigenvalues[n] - cd(kSwansonE0 + n * kSwansonSpacing, 0.0)) < 1e-6);
    CHECK(rep.truncation_change[n] < 1e-8);
  }
  CHECK(rep.all_converged());
  CHECK(rep.classification.classification == spectra::Classification::AllReal);
}

TEST_CASE("reggeon low levels are real and truncation-stable") {
  const auto build = [](int d) { return fock::reggeon_single_site(1.0, 0.3, d); };
  const auto rep = fock::fock_spectrum("reggeon", {}, build, 60, 10, 20);
  for (int n = 0; n < 5; ++n) {
    CAPTURE(n);
    CHECK(rep.eigenvalues[n].imag() == 0.0);
    CHECK(rep.truncation_change[n] < 1e-8);
    CHECK(!rep.flagged[n]);
  }
  // the upper levels at dim 60 are not converged and must be flagged
  CHECK(rep.flagged[9]);
  CHECK(!rep.all_converged());

  const auto deep = fock::fock_spectrum("reggeon", {}, build, 160, 8, 20);
  CHECK(deep.all_converged());
  CHECK(deep.classification.classification == spectra::Classification::AllReal);
  for (int n = 0; n < 5; ++n) CHECK(std::abs(deep.eigenvalues[n] - rep.eigenvalues[n]) < 1e-8);
}

TEST_CASE("swanson spacing shrinks toward the threshold") {
  // spacing of the Bogoliubov ladder is sqrt(Delta^2 - 4 g gt)
  double previous = 1.0;
  for (double g : {0.2, 0.35, 0.45}) {
    const auto rep = fock::fock_spectrum(
        "swanson", {}, [g](int d) { return fock::swanson_model(1.0, g, g, d); }, 200, 2, 40);
    const double spacing = (rep.eigenvalues[1] - rep.eigenvalues[0]).real();
    CAPTURE(g);
    CHECK(std::abs(spacing - std::sqrt(1.0 - 4.0 * g * g)) < 1e-6);
    CHECK(spacing < previous);
    previous = spacing;
  }
}

TEST_CASE("swanson beyond the threshold: real but truncation-unstable") {
  // Delta^2 < 4 g gt with g gt > 0: the truncated matrix is diagonally similar
  // to a real symmetric one, so its spectrum is real at every dim, and the low
  // levels run away as dim grows.
  const auto build = [](int d) { return fock::swanson_model(1.0, 0.8, 0.5, d); };
  const auto rep = fock::fock_spectrum("swanson", {}, build, 60, 5, 20);
  CHECK(rep.classification.classification == spectra::Classification::AllReal);
  CHECK(rep.flagged[0]);
  CHECK(rep.eigenvalues[0].real() < -5.0);
}

TEST_CASE("fock_spectrum preconditions") {
  const auto build = [](int d) { return fock::swanson_model(2.0, 0.5, 0.3, d); };
  CHECK_THROWS_AS(fock::fock_spectrum("swanson", {}, build, 10, 11), ConfigError);
  CHECK_THROWS_AS(fock::fock_spectrum("swanson", {}, build, 10, 0), ConfigError);
  CHECK_THROWS_AS(fock::fock_spectrum("swanson", {}, build, 10, 2, 0), ConfigError);
}
