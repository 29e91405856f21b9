#pragma once
// PT-deformed Calogero-Moser-Sutherland models on a root system.
//
// H_mu = 1/2 p^2 + 1/2 sum_a g_a^2 V(a.q) + i mu.p, mu = 1/2 sum_a gt_a f(a.q) a,
// sums over all roots. The state is complexified: trajectories of the complex
// Hamiltonian leave the real phase space.

#include <complex>
#include <memory>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "ptlab/rootsys.hpp"

namespace ptlab::cms {

using cd = std::complex<double>;
using CVec = Eigen::VectorXcd;

enum class PotentialKind { Rational, Trigonometric, Hyperbolic };

std::string potential_name(PotentialKind k);
PotentialKind parse_potential(std::string_view s);

/// f = 1/x, 1/sin x, 1/sinh x; V = f^2.
struct Potential {
  PotentialKind kind;

  cd f(cd x) const;
  cd fp(cd x) const;  // f'
  cd V(cd x) const { const cd v = f(x); return v * v; }
  cd Vp(cd x) const { return 2.0 * f(x) * fp(x); }
  /// Distance from x to the nearest pole of f.
  double pole_distance(cd x) const;
};

struct OrbitCouplings {
  double g_short = 0.0;
  double g_long = 0.0;
  double gtilde_short = 0.0;
  double gtilde_long = 0.0;
};

/// Squared couplings of the Hermitian model equivalent to H_mu, per orbit.
struct EffectiveCouplings {
  double ghat2_short = 0.0;
  double ghat2_long = 0.0;
};

/// ghat^2 = g^2 + alpha^2 gt^2 / 2 per orbit (alpha^2 the orbit's squared length).
EffectiveCouplings effective_couplings(const OrbitCouplings& c, const rootsys::RootSystem& rs);

/// Closest approach to a singular hyperplane before operations refuse a state.
inline constexpr double kSingularityGuard = 1e-6;

class CMSSystem {
 public:
  /// Throws SingularityError if q is within kSingularityGuard of a pole.
  CMSSystem(std::shared_ptr<const rootsys::RootSystem> rs, PotentialKind kind, OrbitCouplings c,
            CVec q, CVec p);

  const rootsys::RootSystem& roots() const { return *rs_; }
  std::shared_ptr<const rootsys::RootSystem> roots_ptr() const { return rs_; }
  const Potential& potential() const { return pot_; }
  const OrbitCouplings& couplings() const { return c_; }
  const CVec& q() const { return q_; }
  const CVec& p() const { return p_; }
  /// Same model at another phase-space point.
  CMSSystem at(CVec q, CVec p) const;

  double g(int root) const;
  double gtilde(int root) const;
  double ghat2(int root) const;
  /// min over roots of the distance of a.q to a pole
  double min_pole_distance() const;

 private:
  std::shared_ptr<const rootsys::RootSystem> rs_;
  Potential pot_;
  OrbitCouplings c_;
  EffectiveCouplings eff_;
  CVec q_, p_;
};

/// Real state with q_i uniform in [-2, 2], p_i uniform in [-1, 1], redrawn
/// until every a.q is at least `margin` from a pole.
CMSSystem random_configuration(std::shared_ptr<const rootsys::RootSystem> rs, PotentialKind kind,
                               OrbitCouplings c, std::mt19937_64& rng, double margin = 0.3);

CVec mu_vector(const CMSSystem& sys);

/// |mu^2 - sum_orbits alpha^2 gt^2 sum_{a in orbit, a > 0} V(a.q)|. Vanishes for
/// the rational potential only.
double verify_mu_identity(const CMSSystem& sys);

/// 1/2 p^2 + 1/2 sum ghat^2 V + i mu.p - 1/2 mu^2
cd hamiltonian(const CMSSystem& sys);
/// 1/2 p^2 + 1/2 sum g^2 V + i mu.p
cd hamiltonian_hhh(const CMSSystem& sys);
/// Hermitian Calogero Hamiltonian 1/2 P^2 + 1/2 sum ghat^2 V at complex momentum P.
cd calogero_hamiltonian(const CMSSystem& sys, const CVec& P);
/// |hamiltonian(sys) - calogero_hamiltonian(sys, p + i mu)|
double shifted_equivalence(const CMSSystem& sys);

struct Flow {
  CVec qdot, pdot;
};
Flow equations_of_motion(const CMSSystem& sys);

struct Trajectory {
  std::vector<double> t;
  std::vector<CVec> q, p;
  std::vector<cd> H;
  bool aborted = false;
  std::string error;
};

/// Fixed-step RK4. States are recorded every `stride` steps plus the last one.
/// A singular configuration ends the run with `aborted` set.
Trajectory integrate_trajectory(const CMSSystem& sys, double dt, int n_steps, int stride = 1);

struct LaxPair {
  Eigen::MatrixXcd L, M;
  CVec m;  // Cartan part of M
};

LaxPair lax_pair(const CMSSystem& sys, const rootsys::CartanWeylBasis& basis);
/// ||Ldot - [L, M]||_F with Ldot from the equations of motion by the chain rule.
double lax_residual(const CMSSystem& sys, const rootsys::CartanWeylBasis& basis);
/// I_k = tr(L^k)/2 for k = 1..k_max
std::vector<cd> conserved_charges(const CMSSystem& sys, const rootsys::CartanWeylBasis& basis,
                                  int k_max);

/// p^2/2 + w^2/2 sum q_i^2 + g^2/2 sum_{i!=k} 1/(q_i-q_k)^2 + i gt sum_{i!=k} p_i/(q_i-q_k)
/// in l+1 particle coordinates.
cd basu_mallick_kundu_form(int ell, double omega, double g, double gtilde, const CVec& q,
                           const CVec& p);

}  // namespace ptlab::cms
