#include "ptlab/cms.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>

#include "ptlab/error.hpp"

namespace ptlab::cms {

using rootsys::Orbit;
using rootsys::RootSystem;

std::string potential_name(PotentialKind k) {
  switch (k) {
    case PotentialKind::Rational: return "rational";
    case PotentialKind::Trigonometric: return "trigonometric";
    case PotentialKind::Hyperbolic: return "hyperbolic";
  }
  return "?";
}

PotentialKind parse_potential(std::string_view s) {
  std::string u(s);
  for (char& c : u) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (u == "rational") return PotentialKind::Rational;
  if (u == "trigonometric" || u == "trig") return PotentialKind::Trigonometric;
  if (u == "hyperbolic" || u == "hyp") return PotentialKind::Hyperbolic;
  throw ConfigError("unknown potential '" + std::string(s) + "'");
}

cd Potential::f(cd x) const {
  switch (kind) {
    case PotentialKind::Rational: return 1.0 / x;
    case PotentialKind::Trigonometric: return 1.0 / std::sin(x);
    case PotentialKind::Hyperbolic: return 1.0 / std::sinh(x);
  }
  return {};
}

cd Potential::fp(cd x) const {
  switch (kind) {
    case PotentialKind::Rational: return -1.0 / (x * x);
    case PotentialKind::Trigonometric: {
      const cd s = std::sin(x);
      return -std::cos(x) / (s * s);
    }
    case PotentialKind::Hyperbolic: {
      const cd s = std::sinh(x);
      return -std::cosh(x) / (s * s);
    }
  }
  return {};
}

double Potential::pole_distance(cd x) const {
  constexpr double pi = std::numbers::pi;
  switch (kind) {
    case PotentialKind::Rational: return std::abs(x);
    case PotentialKind::Trigonometric: return std::abs(x - pi * std::round(x.real() / pi));
    case PotentialKind::Hyperbolic:
      return std::abs(x - cd(0.0, pi * std::round(x.imag() / pi)));
  }
  return 0.0;
}

EffectiveCouplings effective_couplings(const OrbitCouplings& c, const RootSystem& rs) {
  const double ls = rs.short_length2();
  const double ll = rs.long_length2();
  return {c.g_short * c.g_short + 0.5 * ls * c.gtilde_short * c.gtilde_short,
          c.g_long * c.g_long + 0.5 * ll * c.gtilde_long * c.gtilde_long};
}

CMSSystem::CMSSystem(std::shared_ptr<const RootSystem> rs, PotentialKind kind, OrbitCouplings c,
                     CVec q, CVec p)
    : rs_(std::move(rs)), pot_{kind}, c_(c), eff_(effective_couplings(c, *rs_)),
      q_(std::move(q)), p_(std::move(p)) {
  if (q_.size() != rs_->dim || p_.size() != rs_->dim) {
    throw ConfigError("phase-space dimension " + std::to_string(q_.size()) +
                      " does not match root-system dimension " + std::to_string(rs_->dim));
  }
  const double d = min_pole_distance();
  if (d < kSingularityGuard) {
    throw SingularityError("configuration within " + std::to_string(d) +
                           " of a singular hyperplane");
  }
}

CMSSystem CMSSystem::at(CVec q, CVec p) const {
  return CMSSystem(rs_, pot_.kind, c_, std::move(q), std::move(p));
}

double CMSSystem::g(int root) const {
  return rootsys::orbit_of(*rs_, root) == Orbit::Long ? c_.g_long : c_.g_short;
}
double CMSSystem::gtilde(int root) const {
  return rootsys::orbit_of(*rs_, root) == Orbit::Long ? c_.gtilde_long : c_.gtilde_short;
}
double CMSSystem::ghat2(int root) const {
  return rootsys::orbit_of(*rs_, root) == Orbit::Long ? eff_.ghat2_long : eff_.ghat2_short;
}

double CMSSystem::min_pole_distance() const {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& r : rs_->roots) d = std::min(d, pot_.pole_distance(r.cast<cd>().dot(q_)));
  return d;
}

namespace {

// a.q without conjugation (Eigen's dot conjugates the first argument).
cd adot(const Eigen::VectorXd& a, const CVec& v) { return (a.cast<cd>().array() * v.array()).sum(); }
cd cdot(const CVec& a, const CVec& b) { return (a.array() * b.array()).sum(); }

}  // namespace

CVec mu_vector(const CMSSystem& sys) {
  const auto& rs = sys.roots();
  CVec mu = CVec::Zero(rs.dim);
  for (std::size_t k = 0; k < rs.size(); ++k) {
    const int i = static_cast<int>(k);
    mu += (0.5 * sys.gtilde(i) * sys.potential().f(adot(rs.roots[k], sys.q()))) *
          rs.roots[k].cast<cd>();
  }
  return mu;
}

double verify_mu_identity(const CMSSystem& sys) {
  const auto& rs = sys.roots();
  const CVec mu = mu_vector(sys);
  cd rhs = 0.0;
  for (int i : rs.positive_roots) {
    const double gt = sys.gtilde(i);
    rhs += rs.length2(i) * gt * gt * sys.potential().V(adot(rs.roots[i], sys.q()));
  }
  return std::abs(cdot(mu, mu) - rhs);
}

cd calogero_hamiltonian(const CMSSystem& sys, const CVec& P) {
  const auto& rs = sys.roots();
  cd pot = 0.0;
  for (std::size_t k = 0; k < rs.size(); ++k) {
    pot += sys.ghat2(static_cast<int>(k)) * sys.potential().V(adot(rs.roots[k], sys.q()));
  }
  return 0.5 * cdot(P, P) + 0.5 * pot;
}

cd hamiltonian(const CMSSystem& sys) {
  const CVec mu = mu_vector(sys);
  const cd i(0.0, 1.0);
  const auto& rs = sys.roots();
  cd pot = 0.0;
  for (std::size_t k = 0; k < rs.size(); ++k) {
    pot += sys.ghat2(static_cast<int>(k)) * sys.potential().V(adot(rs.roots[k], sys.q()));
  }
  return 0.5 * cdot(sys.p(), sys.p()) + 0.5 * pot + i * cdot(mu, sys.p()) - 0.5 * cdot(mu, mu);
}

cd hamiltonian_hhh(const CMSSystem& sys) {
  const CVec mu = mu_vector(sys);
  const auto& rs = sys.roots();
  cd pot = 0.0;
  for (std::size_t k = 0; k < rs.size(); ++k) {
    const double g = sys.g(static_cast<int>(k));
    pot += g * g * sys.potential().V(adot(rs.roots[k], sys.q()));
  }
  return 0.5 * cdot(sys.p(), sys.p()) + 0.5 * pot + cd(0.0, 1.0) * cdot(mu, sys.p());
}

double shifted_equivalence(const CMSSystem& sys) {
  const CVec P = sys.p() + cd(0.0, 1.0) * mu_vector(sys);
  return std::abs(hamiltonian(sys) - calogero_hamiltonian(sys, P));
}

Flow equations_of_motion(const CMSSystem& sys) {
  // With P = p + i mu, H = 1/2 P^2 + 1/2 sum ghat^2 V, so
  // dH/dq = i/2 sum gt f'(a.q)(a.P) a + 1/2 sum ghat^2 V'(a.q) a.
  const auto& rs = sys.roots();
  const cd i(0.0, 1.0);
  const CVec P = sys.p() + i * mu_vector(sys);
  CVec grad = CVec::Zero(rs.dim);
  for (std::size_t k = 0; k < rs.size(); ++k) {
    const int r = static_cast<int>(k);
    const CVec a = rs.roots[k].cast<cd>();
    const cd x = adot(rs.roots[k], sys.q());
    grad += (0.5 * i * sys.gtilde(r) * sys.potential().fp(x) * cdot(a, P) +
             0.5 * sys.ghat2(r) * sys.potential().Vp(x)) *
            a;
  }
  return {P, -grad};
}

Trajectory integrate_trajectory(const CMSSystem& sys, double dt, int n_steps, int stride) {
  if (!(dt > 0.0) || n_steps < 0 || stride < 1) throw ConfigError("integrate_trajectory: bad dt/steps/stride");
  Trajectory tr;
  auto record = [&](double t, const CMSSystem& s) {
    tr.t.push_back(t);
    tr.q.push_back(s.q());
    tr.p.push_back(s.p());
    tr.H.push_back(hamiltonian(s));
  };
  CMSSystem cur = sys;
  record(0.0, cur);
  for (int n = 1; n <= n_steps; ++n) {
    try {
      const Flow k1 = equations_of_motion(cur);
      const Flow k2 = equations_of_motion(cur.at(cur.q() + 0.5 * dt * k1.qdot, cur.p() + 0.5 * dt * k1.pdot));
      const Flow k3 = equations_of_motion(cur.at(cur.q() + 0.5 * dt * k2.qdot, cur.p() + 0.5 * dt * k2.pdot));
      const Flow k4 = equations_of_motion(cur.at(cur.q() + dt * k3.qdot, cur.p() + dt * k3.pdot));
      CVec q = cur.q() + (dt / 6.0) * (k1.qdot + 2.0 * k2.qdot + 2.0 * k3.qdot + k4.qdot);
      CVec p = cur.p() + (dt / 6.0) * (k1.pdot + 2.0 * k2.pdot + 2.0 * k3.pdot + k4.pdot);
      if (!q.allFinite() || !p.allFinite()) throw SingularityError("non-finite state");
      cur = cur.at(std::move(q), std::move(p));
    } catch (const SingularityError& e) {
      tr.aborted = true;
      tr.error = std::string("SingularityError at step ") + std::to_string(n) + ": " + e.what();
      if (tr.t.back() != (n - 1) * dt) record((n - 1) * dt, cur);
      return tr;
    }
    if (n % stride == 0 || n == n_steps) record(n * dt, cur);
  }
  return tr;
}

namespace {

struct LaxParts {
  Eigen::MatrixXcd L, M_step;
  CVec P;
  std::vector<cd> coupling;  // i ghat f(a.q) per root
};

LaxParts lax_parts(const CMSSystem& sys, const rootsys::CartanWeylBasis& cw) {
  const auto& rs = sys.roots();
  const cd i(0.0, 1.0);
  LaxParts out;
  out.P = sys.p() + i * mu_vector(sys);
  out.L = cw.dot_cartan(out.P);
  out.M_step = Eigen::MatrixXcd::Zero(cw.matrix_size, cw.matrix_size);
  for (std::size_t k = 0; k < rs.size(); ++k) {
    const cd ghat = std::sqrt(cd(sys.ghat2(static_cast<int>(k))));
    const cd x = adot(rs.roots[k], sys.q());
    const cd c = i * ghat * sys.potential().f(x);
    out.coupling.push_back(c);
    out.L += c * cw.step[k];
    out.M_step += i * ghat * sys.potential().fp(x) * cw.step[k];
  }
  return out;
}

Eigen::MatrixXcd comm(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) { return a * b - b * a; }

// dL/dt along the flow
Eigen::MatrixXcd lax_derivative(const CMSSystem& sys, const rootsys::CartanWeylBasis& cw) {
  const auto& rs = sys.roots();
  const cd i(0.0, 1.0);
  const Flow fl = equations_of_motion(sys);
  CVec mudot = CVec::Zero(rs.dim);
  Eigen::MatrixXcd ldot = Eigen::MatrixXcd::Zero(cw.matrix_size, cw.matrix_size);
  for (std::size_t k = 0; k < rs.size(); ++k) {
    const int r = static_cast<int>(k);
    const cd x = adot(rs.roots[k], sys.q());
    const cd xdot = adot(rs.roots[k], fl.qdot);
    mudot += (0.5 * sys.gtilde(r) * sys.potential().fp(x) * xdot) * rs.roots[k].cast<cd>();
    const cd ghat = std::sqrt(cd(sys.ghat2(r)));
    ldot += i * ghat * sys.potential().fp(x) * xdot * cw.step[k];
  }
  ldot += cw.dot_cartan(fl.pdot + i * mudot);
  return ldot;
}

}  // namespace

LaxPair lax_pair(const CMSSystem& sys, const rootsys::CartanWeylBasis& cw) {
  const auto& rs = sys.roots();
  if (cw.step.size() != rs.size()) throw CapabilityError("Cartan-Weyl basis does not match the root system");
  const LaxParts parts = lax_parts(sys, cw);
  const Eigen::MatrixXcd ldot = lax_derivative(sys, cw);
  // [L, m.H] = -sum_a c_a (a.m) E_a, so the E_a component of Ldot - [L, M]
  // is r_a + c_a (a.m). Fit m to annihilate it in the least-squares sense.
  const Eigen::MatrixXcd rest = ldot - comm(parts.L, parts.M_step);
  const Eigen::Index nr = static_cast<Eigen::Index>(rs.size());
  Eigen::MatrixXcd A(nr, rs.dim);
  CVec b(nr);
  for (Eigen::Index k = 0; k < nr; ++k) {
    const cd r = cw.form(rest, cw.step[rs.negative[k]]);
    A.row(k) = parts.coupling[k] * rs.roots[k].transpose().cast<cd>();
    b(k) = -r;
  }
  CVec m = A.completeOrthogonalDecomposition().solve(b);
  LaxPair lp;
  lp.L = parts.L;
  lp.m = m;
  lp.M = parts.M_step + cw.dot_cartan(m);
  return lp;
}

double lax_residual(const CMSSystem& sys, const rootsys::CartanWeylBasis& cw) {
  const LaxPair lp = lax_pair(sys, cw);
  return (lax_derivative(sys, cw) - comm(lp.L, lp.M)).norm();
}

std::vector<cd> conserved_charges(const CMSSystem& sys, const rootsys::CartanWeylBasis& cw, int k_max) {
  if (k_max < 1) throw ConfigError("conserved_charges: k_max must be positive");
  const auto& rs = sys.roots();
  if (cw.step.size() != rs.size()) throw CapabilityError("Cartan-Weyl basis does not match the root system");
  const Eigen::MatrixXcd L = lax_parts(sys, cw).L;
  std::vector<cd> out;
  Eigen::MatrixXcd pow = Eigen::MatrixXcd::Identity(cw.matrix_size, cw.matrix_size);
  for (int k = 1; k <= k_max; ++k) {
    pow = pow * L;
    out.push_back(0.5 * pow.trace());
  }
  return out;
}

cd basu_mallick_kundu_form(int ell, double omega, double g, double gtilde, const CVec& q, const CVec& p) {
  const int n = ell + 1;
  if (ell < 1 || q.size() != n || p.size() != n) throw ConfigError("basu_mallick_kundu_form: need l+1 coordinates");
  const cd i(0.0, 1.0);
  cd h = 0.5 * cdot(p, p) + 0.5 * omega * omega * cdot(q, q);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (a == b) continue;
      const cd d = q(a) - q(b);
      if (std::abs(d) < kSingularityGuard) throw SingularityError("coincident coordinates");
      h += 0.5 * g * g / (d * d) + i * gtilde * p(a) / d;
    }
  }
  return h;
}

CMSSystem random_configuration(std::shared_ptr<const rootsys::RootSystem> rs, PotentialKind kind,
                               OrbitCouplings c, std::mt19937_64& rng, double margin) {
  std::uniform_real_distribution<double> uq(-2.0, 2.0), up(-1.0, 1.0);
  const Potential pot{kind};
  for (int attempt = 0; attempt < 100000; ++attempt) {
    CVec q(rs->dim), p(rs->dim);
    for (int i = 0; i < rs->dim; ++i) {
      q(i) = uq(rng);
      p(i) = up(rng);
    }
    double d = std::numeric_limits<double>::infinity();
    for (const auto& r : rs->roots) d = std::min(d, pot.pole_distance(r.cast<cd>().dot(q)));
    if (d > margin) return CMSSystem(rs, kind, c, q, p);
  }
  throw ConfigError("no configuration found with all roots " + std::to_string(margin) + " from a pole");
}

}  // namespace ptlab::cms
