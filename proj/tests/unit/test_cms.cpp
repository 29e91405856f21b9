#include <doctest.h>

#include <random>

#include "ptlab/cms.hpp"
#include "ptlab/error.hpp"

using namespace ptlab::cms;
using ptlab::rootsys::build_cartan_weyl;
using ptlab::rootsys::build_root_system;
using ptlab::rootsys::Family;
using ptlab::rootsys::RootSystem;

namespace {

const cd I(0.0, 1.0);

std::shared_ptr<const RootSystem> roots(Family f, int l) {
  return std::make_shared<const RootSystem>(build_root_system(f, l));
}

// Random real state with every a.q at least `margin` from a pole.
CMSSystem random_state(std::mt19937& rng, std::shared_ptr<const RootSystem> rs, PotentialKind k,
                       OrbitCouplings c, double margin = 0.3) {
  std::uniform_real_distribution<double> uq(-2.0, 2.0), up(-1.0, 1.0);
  for (;;) {
    CVec q(rs->dim), p(rs->dim);
    for (int i = 0; i < rs->dim; ++i) {
      q(i) = uq(rng);
      p(i) = up(rng);
    }
    const Potential pot{k};
    double d = 1e9;
    for (const auto& r : rs->roots) d = std::min(d, pot.pole_distance(r.cast<cd>().dot(q)));
    if (d > margin) return CMSSystem(rs, k, c, q, p);
  }
}

cd brute_f(PotentialKind k, cd x) {
  switch (k) {
    case PotentialKind::Rational: return 1.0 / x;
    case PotentialKind::Trigonometric: return 1.0 / std::sin(x);
    case PotentialKind::Hyperbolic: return 1.0 / std::sinh(x);
  }
  return {};
}

const PotentialKind kAll[] = {PotentialKind::Rational, PotentialKind::Trigonometric,
                              PotentialKind::Hyperbolic};

}  // namespace

TEST_CASE("potentials are odd with V = f^2") {
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> u(0.2, 1.4);
  for (PotentialKind k : kAll) {
    const Potential pot{k};
    for (int s = 0; s < 20; ++s) {
      const cd x(u(rng), 0.3 * u(rng));
      CHECK(std::abs(pot.f(-x) + pot.f(x)) < 1e-14 * std::abs(pot.f(x)));
      CHECK(pot.V(x) == pot.f(x) * pot.f(x));
      const double h = 1e-6;
      const cd fd = (pot.f(x + h) - pot.f(x - h)) / (2 * h);
      CHECK(std::abs(fd - pot.fp(x)) < 1e-7 * std::abs(pot.fp(x)));
    }
  }
}

TEST_CASE("mu vector") {
  auto a1 = roots(Family::A, 1);
  OrbitCouplings c;
  c.gtilde_short = 1.0;
  CVec q(2), p(2);
  q << 1.0, 0.0;
  p << 0.0, 0.0;
  const CVec mu = mu_vector(CMSSystem(a1, PotentialKind::Rational, c, q, p));
  CHECK(std::abs(mu(0) - 1.0) < 1e-15);
  CHECK(std::abs(mu(1) + 1.0) < 1e-15);

  c.gtilde_short = 0.0;
  CHECK(mu_vector(CMSSystem(a1, PotentialKind::Rational, c, q, p)).norm() == 0.0);

  // Coordinate form for A_l: mu_j = gt sum_{k != j} f(q_j - q_k)
  std::mt19937 rng(2);
  auto a2 = roots(Family::A, 2);
  c.gtilde_short = 0.7;
  for (PotentialKind k : kAll) {
    for (int s = 0; s < 20; ++s) {
      const CMSSystem sys = random_state(rng, a2, k, c);
      const CVec m = mu_vector(sys);
      for (int j = 0; j < 3; ++j) {
        cd e = 0.0;
        for (int l = 0; l < 3; ++l) {
          if (l != j) e += 0.7 * brute_f(k, sys.q()(j) - sys.q()(l));
        }
        CHECK(std::abs(m(j) - e) < 1e-13);
      }
    }
  }
}

TEST_CASE("mu identity holds for the rational potential only") {
  std::mt19937 rng(3);
  const std::pair<Family, int> systems[] = {{Family::A, 1}, {Family::A, 2}, {Family::A, 3}, {Family::B, 2},
                                            {Family::C, 3}, {Family::D, 4}};
  for (const auto& [f, l] : systems) {
    auto rs = roots(f, l);
    OrbitCouplings c{0.4, 0.9, 1.3, -0.6};
    double worst = 0.0;
    for (int s = 0; s < 100; ++s) worst = std::max(worst, verify_mu_identity(random_state(rng, rs, PotentialKind::Rational, c)));
    CAPTURE(l);
    CHECK(worst < 1e-10);
  }
  auto a2 = roots(Family::A, 2);
  OrbitCouplings c{0.0, 0.0, 1.0, 0.0};
  int large = 0;
  for (int s = 0; s < 100; ++s) {
    if (verify_mu_identity(random_state(rng, a2, PotentialKind::Hyperbolic, c)) > 1e-3) ++large;
  }
  CHECK(large >= 95);
  OrbitCouplings zero;
  CHECK(verify_mu_identity(random_state(rng, a2, PotentialKind::Hyperbolic, zero)) == 0.0);
}

TEST_CASE("effective couplings") {
  auto a2 = roots(Family::A, 2);
  auto b2 = roots(Family::B, 2);
  EffectiveCouplings e = effective_couplings({0.8, 0.0, 0.0, 0.0}, *a2);
  CHECK(e.ghat2_short == doctest::Approx(0.64));
  e = effective_couplings({0.0, 0.0, 1.0, 0.0}, *a2);
  CHECK(e.ghat2_short == doctest::Approx(1.0));  // 0 + 2 * 1 / 2
  e = effective_couplings({1.0, 0.0, 2.0, 0.0}, *b2);
  CHECK(e.ghat2_short == doctest::Approx(3.0));  // 1 + 1 * 4 / 2
  e = effective_couplings({0.0, 1.5, 0.0, 1.0}, *b2);
  CHECK(e.ghat2_long == doctest::Approx(2.25 + 1.0));
}

TEST_CASE("hamiltonian forms") {
  std::mt19937 rng(4);
  auto a2 = roots(Family::A, 2);
  OrbitCouplings c{0.6, 0.0, 0.8, 0.0};
  for (int s = 0; s < 100; ++s) {
    const CMSSystem sys = random_state(rng, a2, PotentialKind::Rational, c);
    CHECK(std::abs(hamiltonian(sys) - hamiltonian_hhh(sys)) < 1e-10);
  }
  for (int s = 0; s < 50; ++s) {
    const CMSSystem sys = random_state(rng, a2, PotentialKind::Hyperbolic, c);
    const CVec mu = mu_vector(sys);
    CHECK(std::abs(hamiltonian(sys).imag() - (mu.transpose() * sys.p())(0).real()) < 1e-12);
  }
  // deformation off: real Calogero energy
  OrbitCouplings herm{0.6, 0.0, 0.0, 0.0};
  const CMSSystem h = random_state(rng, a2, PotentialKind::Rational, herm);
  double e = 0.5 * h.p().squaredNorm();
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      if (a != b) e += 0.5 * 0.36 / std::norm(h.q()(a) - h.q()(b));
    }
  }
  CHECK(hamiltonian(h).imag() == 0.0);
  CHECK(hamiltonian(h).real() == doctest::Approx(e).epsilon(1e-13));
}

TEST_CASE("shifted equivalence for all potentials") {
  std::mt19937 rng(5);
  auto a2 = roots(Family::A, 2);
  for (PotentialKind k : kAll) {
    for (OrbitCouplings c : {OrbitCouplings{0.6, 0, 0.8, 0}, OrbitCouplings{0.6, 0, 0, 0}}) {
      for (int s = 0; s < 100; ++s) CHECK(shifted_equivalence(random_state(rng, a2, k, c)) < 1e-10);
    }
  }
  auto b3 = roots(Family::B, 3);
  for (int s = 0; s < 20; ++s) {
    CHECK(shifted_equivalence(random_state(rng, b3, PotentialKind::Trigonometric, {0.5, 0.7, 0.3, -0.2})) < 1e-10);
  }
}

TEST_CASE("equations of motion match finite differences of H") {
  std::mt19937 rng(6);
  const double h = 1e-5;
  for (auto [f, l] : {std::pair{Family::A, 2}, std::pair{Family::B, 2}}) {
    auto rs = roots(f, l);
    for (PotentialKind k : kAll) {
      for (int s = 0; s < 10; ++s) {
        const CMSSystem sys = random_state(rng, rs, k, {0.5, 0.8, 0.7, 0.4});
        const Flow fl = equations_of_motion(sys);
        for (int j = 0; j < rs->dim; ++j) {
          CVec dq = CVec::Zero(rs->dim);
          dq(j) = h;
          const cd dHdq = (hamiltonian(sys.at(sys.q() + dq, sys.p())) - hamiltonian(sys.at(sys.q() - dq, sys.p()))) / (2 * h);
          const cd dHdp = (hamiltonian(sys.at(sys.q(), sys.p() + dq)) - hamiltonian(sys.at(sys.q(), sys.p() - dq))) / (2 * h);
          CHECK(std::abs(fl.pdot(j) + dHdq) < 1e-6);
          CHECK(std::abs(fl.qdot(j) - dHdp) < 1e-6);
          // fourth-order stencil at a larger step for a tighter bound
          auto Hq = [&](double t) {
            CVec qq = sys.q();
            qq(j) += t;
            return hamiltonian(sys.at(qq, sys.p()));
          };
          const double s4 = 1e-3;
          const cd d4 = (-Hq(2 * s4) + 8.0 * Hq(s4) - 8.0 * Hq(-s4) + Hq(-2 * s4)) / (12 * s4);
          CHECK(std::abs(fl.pdot(j) + d4) < 1e-8 * (1.0 + std::abs(d4)));
        }
      }
    }
  }
  auto a2 = roots(Family::A, 2);
  const CMSSystem free_sys = random_state(rng, a2, PotentialKind::Rational, {});
  const Flow fl = equations_of_motion(free_sys);
  CHECK((fl.qdot - free_sys.p()).norm() == 0.0);
  CHECK(fl.pdot.norm() == 0.0);
}

TEST_CASE("trajectory integration") {
  std::mt19937 rng(7);
  auto a2 = roots(Family::A, 2);
  const CMSSystem free_sys = random_state(rng, a2, PotentialKind::Rational, {});
  const Trajectory ft = integrate_trajectory(free_sys, 0.01, 100, 10);
  REQUIRE(!ft.aborted);
  CHECK((ft.q.back() - (free_sys.q() + 1.0 * free_sys.p())).norm() < 1e-13);
  CHECK(ft.t.size() == 11);

  CVec q(3), p(3);
  q << -2.0, 0.1, 2.2;
  p << 0.3, -0.1, -0.2;
  for (OrbitCouplings c : {OrbitCouplings{0.5, 0, 0, 0}, OrbitCouplings{0.5, 0, 0.4, 0}}) {
    const CMSSystem sys(a2, PotentialKind::Rational, c, q, p);
    const Trajectory tr = integrate_trajectory(sys, 1e-3, 10000, 1000);
    REQUIRE(!tr.aborted);
    double drift = 0.0;
    for (const cd& e : tr.H) drift = std::max(drift, std::abs(e - tr.H.front()) / std::abs(tr.H.front()));
    CHECK(drift < 1e-8);
  }
  // head-on collision: two particles pushed together without repulsion
  OrbitCouplings none;
  q << -0.5, 0.5, 3.0;
  p << 1.0, -1.0, 0.0;
  const Trajectory hit = integrate_trajectory(CMSSystem(a2, PotentialKind::Rational, none, q, p), 0.01, 200);
  CHECK(hit.aborted);
  CHECK(hit.t.back() < 0.5 + 1e-9);
}

TEST_CASE("rk4 energy error scales at fourth order") {
  auto a2 = roots(Family::A, 2);
  CVec q(3), p(3);
  q << -1.0, 0.2, 1.3;
  p << 0.8, -0.5, 0.1;
  const CMSSystem sys(a2, PotentialKind::Rational, {0.7, 0, 0.5, 0}, q, p);
  auto endpoint = [&](double dt) { return integrate_trajectory(sys, dt, static_cast<int>(std::lround(1.0 / dt)), 1000000).q.back(); };
  const CVec ref = endpoint(1e-3);
  const double e1 = (endpoint(0.04) - ref).norm();
  const double e2 = (endpoint(0.02) - ref).norm();
  CHECK(std::log2(e1 / e2) > 3.5);
}

TEST_CASE("lax pair structure") {
  std::mt19937 rng(8);
  auto a2 = roots(Family::A, 2);
  const auto cw = build_cartan_weyl(*a2);
  // free case
  const CMSSystem free_sys = random_state(rng, a2, PotentialKind::Rational, {});
  const LaxPair fl = lax_pair(free_sys, cw);
  CHECK((fl.L - cw.dot_cartan(free_sys.p())).norm() < 1e-15);
  CHECK((fl.M - fl.M.diagonal().asDiagonal().toDenseMatrix()).norm() == 0.0);
  CHECK(lax_residual(free_sys, cw) == 0.0);

  // Hermitian rational: textbook Calogero Lax matrix
  const double g = 0.9;
  const CMSSystem sys = random_state(rng, a2, PotentialKind::Rational, {g, 0, 0, 0});
  const LaxPair lp = lax_pair(sys, cw);
  const CVec& x = sys.q();
  for (int j = 0; j < 3; ++j) {
    CHECK(std::abs(lp.L(j, j) - sys.p()(j)) < 1e-14);
    for (int k = 0; k < 3; ++k) {
      if (j == k) continue;
      CHECK(std::abs(lp.L(j, k) - I * g / (x(j) - x(k))) < 1e-13);
      CHECK(std::abs(lp.M(j, k) + I * g / ((x(j) - x(k)) * (x(j) - x(k)))) < 1e-13);
    }
  }
  // diagonal of M equals i g sum 1/(q_j - q_l)^2 up to a multiple of the identity
  CVec textbook(3);
  for (int j = 0; j < 3; ++j) {
    textbook(j) = 0.0;
    for (int l = 0; l < 3; ++l) {
      if (l != j) textbook(j) += I * g / ((x(j) - x(l)) * (x(j) - x(l)));
    }
  }
  const CVec diff = lp.M.diagonal() - textbook;
  CHECK((diff.array() - diff(0)).matrix().norm() < 1e-12);
}

TEST_CASE("PT maps L to L and M to -M") {
  std::mt19937 rng(9);
  auto a2 = roots(Family::A, 2);
  const auto cw = build_cartan_weyl(*a2);
  for (PotentialKind k : kAll) {
    for (int s = 0; s < 10; ++s) {
      const CMSSystem sys = random_state(rng, a2, k, {0.6, 0, 0.5, 0});
      const CMSSystem pt = sys.at(-sys.q(), sys.p());
      const LaxPair a = lax_pair(sys, cw), b = lax_pair(pt, cw);
      CHECK((b.L.conjugate() - a.L).norm() < 1e-12 * a.L.norm());
      // M's Cartan part is fixed modulo the kernel of the fit; compare the step part and [L, M]
      CHECK((b.M.conjugate() + a.M).norm() < 1e-9 * (1.0 + a.M.norm()));
      CHECK(std::abs(std::conj(hamiltonian(pt)) - hamiltonian(sys)) < 1e-12 * std::abs(hamiltonian(sys)));
    }
  }
}

TEST_CASE("lax equation holds on random A_l states") {
  std::mt19937 rng(10);
  for (int l : {1, 2, 3}) {
    auto rs = roots(Family::A, l);
    const auto cw = build_cartan_weyl(*rs);
    for (PotentialKind k : kAll) {
      double worst = 0.0;
      for (int s = 0; s < 100; ++s) worst = std::max(worst, lax_residual(random_state(rng, rs, k, {0.6, 0, 0.5, 0}), cw));
      CAPTURE(l);
      CAPTURE(potential_name(k));
      CHECK(worst < 1e-8);
    }
  }
}

TEST_CASE("conserved charges") {
  auto a2 = roots(Family::A, 2);
  const auto cw = build_cartan_weyl(*a2);
  std::mt19937 rng(11);
  const CMSSystem free_sys = random_state(rng, a2, PotentialKind::Rational, {});
  const auto fc = conserved_charges(free_sys, cw, 3);
  CHECK(std::abs(fc[1] - 0.5 * free_sys.p().squaredNorm()) < 1e-14);

  CVec q(3), p(3);
  q << -2.0, 0.1, 2.2;
  p << 0.3, -0.1, -0.2;
  const CMSSystem sys(a2, PotentialKind::Rational, {0.5, 0, 0.4, 0}, q, p);
  const Trajectory tr = integrate_trajectory(sys, 1e-3, 10000, 500);
  REQUIRE(!tr.aborted);
  const auto c0 = conserved_charges(sys, cw, 3);
  for (std::size_t n = 0; n < tr.t.size(); ++n) {
    const CMSSystem s = sys.at(tr.q[n], tr.p[n]);
    const auto c = conserved_charges(s, cw, 3);
    CHECK(std::abs(c[1] - c0[1]) < 1e-6 * std::abs(c0[1]));
    CHECK(std::abs(c[2] - c0[2]) < 1e-6 * std::abs(c0[2]));
    CHECK(std::abs((c[1] - hamiltonian(s)) - (c0[1] - hamiltonian(sys))) < 1e-8);
  }
}

TEST_CASE("Basu-Mallick-Kundu coordinates agree with the root-system build") {
  std::mt19937 rng(12);
  for (int l : {2, 3}) {
    auto rs = roots(Family::A, l);
    for (int s = 0; s < 100; ++s) {
      const CMSSystem sys = random_state(rng, rs, PotentialKind::Rational, {0.7, 0, -0.4, 0});
      const cd bk = basu_mallick_kundu_form(l, 0.0, 0.7, -0.4, sys.q(), sys.p());
      CHECK(std::abs(bk - hamiltonian_hhh(sys)) < 1e-10);
      double im = 0.0;
      for (int a = 0; a <= l; ++a) {
        for (int b = 0; b <= l; ++b) {
          if (a != b) im += -0.4 * sys.p()(a).real() / (sys.q()(a) - sys.q()(b)).real();
        }
      }
      CHECK(bk.imag() == doctest::Approx(im).epsilon(1e-12));
    }
  }
  CVec q(3), p(3);
  q << 1.0, 1.0, 2.0;
  p.setZero();
  CHECK_THROWS_AS(basu_mallick_kundu_form(2, 0.0, 1.0, 1.0, q, p), ptlab::SingularityError);
}

TEST_CASE("singular configurations are rejected") {
  auto a2 = roots(Family::A, 2);
  CVec q(3), p = CVec::Zero(3);
  q << 0.0, 1e-8, 1.0;
  CHECK_THROWS_AS(CMSSystem(a2, PotentialKind::Rational, {}, q, p), ptlab::SingularityError);
  q << 0.0, M_PI, 1.0;
  CHECK_THROWS_AS(CMSSystem(a2, PotentialKind::Trigonometric, {}, q, p), ptlab::SingularityError);
  CHECK_NOTHROW(CMSSystem(a2, PotentialKind::Hyperbolic, {}, q, p));
}

TEST_CASE("lax closure on non-simply-laced and D systems (measured)") {
  // The step-operator ansatz in the defining representation closes only for
  // A_l; outside A the residual stays O(1) even for the undeformed model.
  // Pinned here so a change in that behaviour is noticed.
  std::mt19937 rng(13);
  const std::pair<Family, int> systems[] = {{Family::B, 2}, {Family::C, 2}, {Family::D, 4}};
  for (const auto& [f, l] : systems) {
    auto rs = roots(f, l);
    const auto cw = build_cartan_weyl(*rs);
    for (PotentialKind k : kAll) {
      double worst = 0.0;
      for (int s = 0; s < 20; ++s) worst = std::max(worst, lax_residual(random_state(rng, rs, k, {0.6, 0.9, 0.5, 0.3}), cw));
      double herm = 0.0;
      for (int s = 0; s < 20; ++s) herm = std::max(herm, lax_residual(random_state(rng, rs, k, {0.6, 0.6, 0.0, 0.0}), cw));
      MESSAGE(ptlab::rootsys::family_name(f) << l << " " << potential_name(k) << " max residual "
                                             << worst << " (undeformed, equal couplings: " << herm << ")");
      CHECK(herm > 1e-3);
    }
  }
}
