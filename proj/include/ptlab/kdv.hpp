#pragma once
// Pseudo-spectral evolution of the two PT-deformed KdV equations on a periodic
// grid:
//
//   Bender: u_t = i u (i u_x)^e - u_xxx
//   Fring:  u_t = -u u_x - i e(e-1) (i u_x)^(e-2) u_xx^2 - e (i u_x)^(e-1) u_xxx
//
// Both reduce to u_t = -u u_x - u_xxx at e = 1. Non-integer powers use the
// principal branch; integer powers are plain products.

#include <complex>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace ptlab::kdv {

using cd = std::complex<double>;

enum class Model { Bender, Fring };
std::string model_name(Model m);
Model parse_model(const std::string& s);

struct KdVField {
  double L = 2.0 * 3.14159265358979323846;  // period
  std::vector<cd> u;                          // samples at x_j = -L/2 + j L/n
  double epsilon = 1.0;
  double t = 0.0;
  bool branch_valid = true;

  int n() const { return static_cast<int>(u.size()); }
  double dx() const { return L / static_cast<double>(u.size()); }
  double x(int j) const { return -0.5 * L + j * dx(); }
  /// Throws ConfigError unless L > 0 and n >= 64 (even).
  void validate() const;
};

/// Samples f on the periodic grid.
KdVField make_field(double L, int n, double epsilon, const std::function<cd(double)>& f);

/// FFTW-backed spectral differentiation for one grid size. Not thread-safe per
/// instance; one per evolution.
class Spectral {
 public:
  Spectral(int n, double L);
  ~Spectral();
  Spectral(const Spectral&) = delete;
  Spectral& operator=(const Spectral&) = delete;

  int size() const { return n_; }
  double wavenumber(int j) const;
  void forward(const std::vector<cd>& u, std::vector<cd>& uh);
  void backward(const std::vector<cd>& uh, std::vector<cd>& u);
  /// d^order u / dx^order. The Nyquist mode is dropped for odd orders.
  std::vector<cd> derivative(const std::vector<cd>& u, int order);
  /// First `count` derivatives of u from one forward transform.
  std::vector<std::vector<cd>> derivatives(const std::vector<cd>& u, int count);
  /// Translate by s (periodic), exact for band-limited data.
  std::vector<cd> shift(const std::vector<cd>& u, double s);

 private:
  struct Plans;
  int n_;
  double L_;
  std::unique_ptr<Plans> plans_;
};

/// w^p on the principal branch; integer p as products. `x` locates errors.
/// Throws BranchError on the cut (Re w < 0, |Im w| <= 1e-12 |w|) for non-integer p,
/// SingularExponentError for p < 0 at |w| <= zero_tol.
cd deformed_power(cd w, double p, double x, double zero_tol = 1e-14);

std::vector<cd> rhs_bender(const KdVField& f, Spectral& sp);
std::vector<cd> rhs_fring(const KdVField& f, Spectral& sp);
std::vector<cd> rhs(const KdVField& f, Model m, Spectral& sp);
/// -u u_x - u_xxx
std::vector<cd> rhs_classical(const KdVField& f, Spectral& sp);

/// Hamiltonian density -u^3/6 - (i u_x)^(e+1)/(e+1); at e = 1 this is the
/// standard -u^3/6 + u_x^2/2 and u_t = d_x (dH/du) gives the Fring flow.
std::vector<cd> hamiltonian_density(const KdVField& f, Spectral& sp);
/// d_x (dH/du) = d_x(-u^2/2 + i d_x (i u_x)^e), evaluated spectrally.
std::vector<cd> variational_rhs(const KdVField& f, Spectral& sp);

struct Charges {
  double t = 0.0;
  cd M, P, E;  // int u, int u^2, int H
};
Charges charges(const KdVField& f, Spectral& sp);

struct ChargeMonitor {
  std::vector<Charges> series;
  /// max over the series of |X(t) - X(0)| / |X(0)| (absolute when X(0) = 0)
  double max_relative_drift() const;
  double drift_M() const;
  double drift_P() const;
  double drift_E() const;
};

/// Linearized stability bound, k_max = pi/dx:
///   advection  dt <= 2.8 / (k_max a),   a = max|du_t/du_x| from the nonlinear part
///              (0.1 instead of 2.8 on the integrating-factor path)
///   dispersion dt <= 2.5 / (k_max^3 d), d = max|e (i u_x)^(e-1)| (explicit Fring only)
///   diffusion  dt <= 2.7 / (k_max^2 b), b = max|2 e (e-1) (i u_x)^(e-2) u_xx| (explicit Fring only)
double stable_dt(const KdVField& f, Model m, Spectral& sp);

struct EvolveOptions {
  int stride = 100;              // charge record every `stride` steps
  bool check_stability = true;   // reject dt above stable_dt
  bool keep_snapshots = false;   // store the field at every record
};

struct Trajectory {
  KdVField final;
  ChargeMonitor monitor;
  std::vector<KdVField> snapshots;  // at the record strides
  bool integrating_factor = false;
};

/// RK4 from f.t to t_end with step dt (negative for backward evolution); dt is
/// shrunk so that an integer number of steps lands on t_end. The
/// u_xxx term is integrated exactly (Lawson integrating factor) whenever it is
/// linear: Bender at any e, Fring at e = 1; otherwise explicit RK4.
/// Throws BlowUpError (non-finite or |u| > 1e8), BranchError, SingularExponentError.
Trajectory evolve(const KdVField& f, Model m, double dt, double t_end, const EvolveOptions& opt = {});

/// Evolve u and the boosted field u + v, unboost (x -> x + v t, u -> u - v)
/// and return max|difference| / max|u(t)|.
double galilean_test(const KdVField& f, Model m, double v, double dt, double t_end);

/// PT maps a solution u(x, t) to conj(u(-x, -t)). Evolves forward to t and
/// backward to -t and returns max|u(x, t) - conj(u(-x, -t))| / max|u|.
/// For PT-symmetric initial data this is the symmetry of the flow.
double pt_flow_residual(const KdVField& f, Model m, double dt, double t);

/// max|u(x) - conj(u(-x))| / max|u|
double pt_asymmetry(const KdVField& f);

struct EnergyCheck {
  cd E;
  bool is_real = false;
};
EnergyCheck energy_reality_check(const KdVField& f);

}  // namespace ptlab::kdv
