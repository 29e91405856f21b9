#include "ptlab/kdv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>

#include <fftw3.h>

#include "ptlab/error.hpp"
#include "ptlab/simd/kernels.hpp"

namespace ptlab::kdv {

namespace {

const cd I(0.0, 1.0);

// FFTW's planner is not thread-safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

bool is_integer(double p) { return std::abs(p - std::round(p)) < 1e-12; }

double max_abs(const std::vector<cd>& v) {
  double m = 0.0;
  for (const cd& z : v) m = std::max(m, std::abs(z));
  return m;
}

}  // namespace

std::string model_name(Model m) { return m == Model::Bender ? "bender" : "fring"; }

Model parse_model(const std::string& s) {
  if (s == "bender") return Model::Bender;
  if (s == "fring") return Model::Fring;
  throw ConfigError("unknown KdV model '" + s + "' (expected bender or fring)");
}

void KdVField::validate() const {
  if (!(L > 0.0)) throw ConfigError("KdV period must be positive");
  if (u.size() < 64 || u.size() % 2 != 0) throw ConfigError("KdV grid needs an even n >= 64");
  if (!std::isfinite(epsilon)) throw ConfigError("KdV epsilon must be finite");
}

KdVField make_field(double L, int n, double epsilon, const std::function<cd(double)>& f) {
  KdVField field;
  field.L = L;
  field.epsilon = epsilon;
  field.u.resize(static_cast<std::size_t>(std::max(n, 0)));
  field.validate();
  for (int j = 0; j < n; ++j) field.u[j] = f(field.x(j));
  return field;
}

struct Spectral::Plans {
  fftw_complex* in = nullptr;
  fftw_complex* out = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
  std::vector<cd> ik;  // i k_j, with the Nyquist k taken positive
};

Spectral::Spectral(int n, double L) : n_(n), L_(L), plans_(std::make_unique<Plans>()) {
  if (n < 8 || !(L > 0.0)) throw ConfigError("spectral grid needs n >= 8 and L > 0");
  std::lock_guard<std::mutex> lock(planner_mutex());
  plans_->in = fftw_alloc_complex(n);
  plans_->out = fftw_alloc_complex(n);
  plans_->fwd = fftw_plan_dft_1d(n, plans_->in, plans_->out, FFTW_FORWARD, FFTW_ESTIMATE);
  plans_->bwd = fftw_plan_dft_1d(n, plans_->in, plans_->out, FFTW_BACKWARD, FFTW_ESTIMATE);
  plans_->ik.resize(n);
  for (int j = 0; j < n; ++j) plans_->ik[j] = I * wavenumber(j);
}

Spectral::~Spectral() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(plans_->fwd);
  fftw_destroy_plan(plans_->bwd);
  fftw_free(plans_->in);
  fftw_free(plans_->out);
}

double Spectral::wavenumber(int j) const {
  const int m = j <= n_ / 2 ? j : j - n_;
  return 2.0 * std::numbers::pi * m / L_;
}

void Spectral::forward(const std::vector<cd>& u, std::vector<cd>& uh) {
  std::copy(u.begin(), u.end(), reinterpret_cast<cd*>(plans_->in));
  fftw_execute(plans_->fwd);
  uh.assign(reinterpret_cast<cd*>(plans_->out), reinterpret_cast<cd*>(plans_->out) + n_);
}

void Spectral::backward(const std::vector<cd>& uh, std::vector<cd>& u) {
  std::copy(uh.begin(), uh.end(), reinterpret_cast<cd*>(plans_->in));
  fftw_execute(plans_->bwd);
  u.resize(n_);
  const double s = 1.0 / n_;
  const cd* o = reinterpret_cast<const cd*>(plans_->out);
  for (int j = 0; j < n_; ++j) u[j] = o[j] * s;
}

std::vector<std::vector<cd>> Spectral::derivatives(const std::vector<cd>& u, int count) {
  std::vector<cd> uh, tmp(n_);
  forward(u, uh);
  std::vector<std::vector<cd>> out;
  for (int order = 1; order <= count; ++order) {
    // uh <- (ik) uh, Nyquist kept only for even orders
    for (int j = 0; j < n_; ++j) uh[j] *= plans_->ik[j];
    tmp = uh;
    if (order % 2 == 1) tmp[n_ / 2] = 0.0;
    std::vector<cd> d;
    backward(tmp, d);
    out.push_back(std::move(d));
  }
  return out;
}

std::vector<cd> Spectral::derivative(const std::vector<cd>& u, int order) {
  if (order == 0) return u;
  return derivatives(u, order).back();
}

std::vector<cd> Spectral::shift(const std::vector<cd>& u, double s) {
  if (s == 0.0) return u;
  std::vector<cd> uh, out;
  forward(u, uh);
  for (int j = 0; j < n_; ++j) {
    const double k = wavenumber(j);
    uh[j] *= j == n_ / 2 ? cd(std::cos(k * s)) : std::exp(-I * k * s);
  }
  backward(uh, out);
  return out;
}

cd deformed_power(cd w, double p, double x, double zero_tol) {
  if (is_integer(p)) {
    const long k = std::lround(p);
    if (k == 0) return 1.0;
    if (k < 0 && std::abs(w) <= zero_tol) {
      throw SingularExponentError("negative power " + std::to_string(k) + " of i u_x = 0", x);
    }
    cd r = 1.0;
    for (long i = 0; i < std::labs(k); ++i) r *= w;
    return k > 0 ? r : 1.0 / r;
  }
  if (std::abs(w) <= zero_tol) {
    if (p > 0.0) return 0.0;
    throw SingularExponentError("negative power of i u_x = 0", x);
  }
  if (w.real() < 0.0 && std::abs(w.imag()) <= 1e-12 * std::abs(w)) {
    throw BranchError("i u_x on the branch cut of the principal power", x);
  }
  return std::pow(w, p);
}

namespace {

// Zero threshold for negative powers, relative to the largest |u_x| on the grid.
double zero_tolerance(const std::vector<cd>& ux) { return 1e-10 * std::max(1.0, max_abs(ux)); }

}  // namespace

std::vector<cd> rhs_classical(const KdVField& f, Spectral& sp) {
  const auto d = sp.derivatives(f.u, 3);
  std::vector<cd> out(f.u.size());
  simd::cmul(f.u, d[0], out);
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = -out[j] - d[2][j];
  return out;
}

std::vector<cd> rhs_bender(const KdVField& f, Spectral& sp) {
  const double e = f.epsilon;
  const auto d = sp.derivatives(f.u, 3);
  const double tol = zero_tolerance(d[0]);
  std::vector<cd> p(f.u.size()), out(f.u.size());
  for (std::size_t j = 0; j < p.size(); ++j) p[j] = I * deformed_power(I * d[0][j], e, f.x(static_cast<int>(j)), tol);
  simd::cmul(f.u, p, out);
  for (std::size_t j = 0; j < out.size(); ++j) out[j] -= d[2][j];
  return out;
}

std::vector<cd> rhs_fring(const KdVField& f, Spectral& sp) {
  const double e = f.epsilon;
  const auto d = sp.derivatives(f.u, 3);
  const auto& ux = d[0];
  const auto& uxx = d[1];
  const auto& uxxx = d[2];
  std::vector<cd> out(f.u.size());
  simd::cmul(f.u, ux, out);
  if (e == 1.0) {
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = -out[j] - uxxx[j];
    return out;
  }
  const double tol = zero_tolerance(ux);
  const double c2 = e * (e - 1.0);
  for (std::size_t j = 0; j < out.size(); ++j) {
    const double x = f.x(static_cast<int>(j));
    const cd w = I * ux[j];
    cd r = -out[j] - e * deformed_power(w, e - 1.0, x, tol) * uxxx[j];
    if (c2 != 0.0) r -= I * c2 * deformed_power(w, e - 2.0, x, tol) * uxx[j] * uxx[j];
    out[j] = r;
  }
  return out;
}

std::vector<cd> rhs(const KdVField& f, Model m, Spectral& sp) {
  return m == Model::Bender ? rhs_bender(f, sp) : rhs_fring(f, sp);
}

std::vector<cd> hamiltonian_density(const KdVField& f, Spectral& sp) {
  const double e = f.epsilon;
  const auto ux = sp.derivative(f.u, 1);
  std::vector<cd> h(f.u.size());
  for (std::size_t j = 0; j < h.size(); ++j) {
    const cd u = f.u[j];
    h[j] = -u * u * u / 6.0 - deformed_power(I * ux[j], e + 1.0, f.x(static_cast<int>(j))) / (e + 1.0);
  }
  return h;
}

std::vector<cd> variational_rhs(const KdVField& f, Spectral& sp) {
  const double e = f.epsilon;
  const auto ux = sp.derivative(f.u, 1);
  const double tol = zero_tolerance(ux);
  std::vector<cd> w(f.u.size());
  for (std::size_t j = 0; j < w.size(); ++j) w[j] = deformed_power(I * ux[j], e, f.x(static_cast<int>(j)), tol);
  const auto wx = sp.derivative(w, 1);
  std::vector<cd> q(f.u.size());
  for (std::size_t j = 0; j < q.size(); ++j) q[j] = -0.5 * f.u[j] * f.u[j] + I * wx[j];
  return sp.derivative(q, 1);
}

Charges charges(const KdVField& f, Spectral& sp) {
  const double dx = f.dx();
  Charges c;
  c.t = f.t;
  const auto h = hamiltonian_density(f, sp);
  for (std::size_t j = 0; j < f.u.size(); ++j) {
    c.M += f.u[j] * dx;
    c.P += f.u[j] * f.u[j] * dx;
    c.E += h[j] * dx;
  }
  return c;
}

namespace {

double drift(const std::vector<Charges>& s, cd Charges::*member) {
  if (s.empty()) return 0.0;
  const cd x0 = s.front().*member;
  const double den = std::abs(x0) > 0.0 ? std::abs(x0) : 1.0;
  double m = 0.0;
  for (const auto& c : s) m = std::max(m, std::abs(c.*member - x0) / den);
  return m;
}

}  // namespace

double ChargeMonitor::drift_M() const { return drift(series, &Charges::M); }
double ChargeMonitor::drift_P() const { return drift(series, &Charges::P); }
double ChargeMonitor::drift_E() const { return drift(series, &Charges::E); }
double ChargeMonitor::max_relative_drift() const { return std::max({drift_M(), drift_P(), drift_E()}); }

namespace {

bool linear_dispersion(Model m, double e) { return m == Model::Bender || e == 1.0; }

// Nonlinear part when u_xxx is linear: Bender i u (i u_x)^e, Fring(e = 1) -u u_x.
std::vector<cd> nonlinear_part(const KdVField& f, Model m, Spectral& sp) {
  const auto ux = sp.derivative(f.u, 1);
  std::vector<cd> out(f.u.size());
  if (m == Model::Fring) {
    simd::cmul(f.u, ux, out);
    for (cd& z : out) z = -z;
    return out;
  }
  const double tol = zero_tolerance(ux);
  std::vector<cd> p(f.u.size());
  for (std::size_t j = 0; j < p.size(); ++j) p[j] = I * deformed_power(I * ux[j], f.epsilon, f.x(static_cast<int>(j)), tol);
  simd::cmul(f.u, p, out);
  return out;
}

void check_finite(const std::vector<cd>& u, double t_last) {
  for (const cd& z : u) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) || std::abs(z) > 1e8) {
      throw BlowUpError("KdV field became non-finite or exceeded 1e8", t_last);
    }
  }
}

}  // namespace

double stable_dt(const KdVField& f, Model m, Spectral& sp) {
  const double e = f.epsilon;
  const double kmax = std::numbers::pi / f.dx();
  const auto d = sp.derivatives(f.u, 2);
  const double tol = zero_tolerance(d[0]);
  double adv = 0.0, disp = 0.0, diff = 0.0;
  for (std::size_t j = 0; j < f.u.size(); ++j) {
    const double x = f.x(static_cast<int>(j));
    const cd w = I * d[0][j];
    if (m == Model::Bender) {
      // d/du_x [i u (i u_x)^e] = -e u (i u_x)^(e-1)
      adv = std::max(adv, std::abs(e * f.u[j] * deformed_power(w, e - 1.0, x, tol)));
    } else {
      adv = std::max(adv, std::abs(f.u[j]));
      if (e != 1.0) {
        disp = std::max(disp, std::abs(e * deformed_power(w, e - 1.0, x, tol)));
        if (e * (e - 1.0) != 0.0) {
          diff = std::max(diff, std::abs(2.0 * e * (e - 1.0) * deformed_power(w, e - 2.0, x, tol) * d[1][j]));
        }
      }
    }
  }
  double dt = std::numeric_limits<double>::infinity();
  // Lawson steps lose most of the RK4 imaginary-axis interval once the
  // dispersive phases rotate the stages; a cnoidal wave carried over one
  // period stays at round-off only below about 0.1
  const bool lawson = m == Model::Bender || e == 1.0;
  if (adv > 0.0) dt = std::min(dt, (lawson ? 0.1 : 2.8) / (kmax * adv));
  if (disp > 0.0) dt = std::min(dt, 2.5 / (kmax * kmax * kmax * disp));
  if (diff > 0.0) dt = std::min(dt, 2.7 / (kmax * kmax * diff));
  return dt;
}

Trajectory evolve(const KdVField& f0, Model m, double dt, double t_end, const EvolveOptions& opt) {
  f0.validate();
  if (dt == 0.0 || !std::isfinite(dt)) throw ConfigError("KdV time step must be finite and nonzero");
  if (opt.stride < 1) throw ConfigError("charge stride must be >= 1");
  const double span = t_end - f0.t;
  if (span != 0.0 && (span > 0.0) != (dt > 0.0)) throw ConfigError("time step points away from t_end");
  const long steps = span == 0.0 ? 0 : static_cast<long>(std::ceil(std::abs(span / dt) - 1e-9));
  const double h = steps > 0 ? span / steps : dt;

  const int n = f0.n();
  Spectral sp(n, f0.L);
  if (opt.check_stability) {
    const double bound = stable_dt(f0, m, sp);
    if (std::abs(h) > bound) {
      throw ConfigError("time step " + std::to_string(std::abs(h)) + " exceeds the stability bound " +
                        std::to_string(bound));
    }
  }

  Trajectory traj;
  traj.integrating_factor = linear_dispersion(m, f0.epsilon);
  KdVField f = f0;
  auto record = [&] {
    traj.monitor.series.push_back(charges(f, sp));
    if (opt.keep_snapshots) traj.snapshots.push_back(f);
  };
  record();

  // Integrating factors exp(i k^3 s) for u_t = -u_xxx, i.e. symbol i k^3.
  std::vector<cd> e_half(n), e_full(n);
  if (traj.integrating_factor) {
    for (int j = 0; j < n; ++j) {
      const double k = j == n / 2 ? 0.0 : sp.wavenumber(j);
      e_half[j] = std::exp(I * k * k * k * (0.5 * h));
      e_full[j] = e_half[j] * e_half[j];
    }
  }

  const bool track_branch = !is_integer(f0.epsilon);
  std::vector<cd> w_prev;
  if (track_branch) {
    w_prev = sp.derivative(f.u, 1);
    for (cd& z : w_prev) z *= I;
  }

  KdVField stage = f;
  std::vector<cd> uh, k1, k2, k3, k4, a, b, c, tmp(n), acc(n);
  auto N_hat = [&](const std::vector<cd>& u_phys) {
    stage.u = u_phys;
    std::vector<cd> nl = nonlinear_part(stage, m, sp), out;
    sp.forward(nl, out);
    return out;
  };
  auto R = [&](const std::vector<cd>& u_phys) {
    stage.u = u_phys;
    return rhs(stage, m, sp);
  };

  for (long s = 0; s < steps; ++s) {
    const double t_last = f.t;
    if (traj.integrating_factor) {
      // Lawson RK4 in Fourier space
      sp.forward(f.u, uh);
      k1 = N_hat(f.u);
      for (int j = 0; j < n; ++j) tmp[j] = e_half[j] * (uh[j] + 0.5 * h * k1[j]);
      sp.backward(tmp, a);
      k2 = N_hat(a);
      for (int j = 0; j < n; ++j) tmp[j] = e_half[j] * uh[j] + 0.5 * h * k2[j];
      sp.backward(tmp, b);
      k3 = N_hat(b);
      for (int j = 0; j < n; ++j) tmp[j] = e_full[j] * uh[j] + h * e_half[j] * k3[j];
      sp.backward(tmp, c);
      k4 = N_hat(c);
      for (int j = 0; j < n; ++j) {
        acc[j] = e_full[j] * (uh[j] + h / 6.0 * k1[j]) + h / 3.0 * e_half[j] * (k2[j] + k3[j]) + h / 6.0 * k4[j];
      }
      sp.backward(acc, f.u);
    } else {
      k1 = R(f.u);
      a.resize(n);
      for (int j = 0; j < n; ++j) a[j] = f.u[j] + 0.5 * h * k1[j];
      k2 = R(a);
      for (int j = 0; j < n; ++j) a[j] = f.u[j] + 0.5 * h * k2[j];
      k3 = R(a);
      for (int j = 0; j < n; ++j) a[j] = f.u[j] + h * k3[j];
      k4 = R(a);
      for (int j = 0; j < n; ++j) f.u[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    }
    f.t = f0.t + (s + 1) * h;
    check_finite(f.u, t_last);
    if (track_branch) {
      // i u_x may not pass through the cut between steps
      auto w = sp.derivative(f.u, 1);
      for (int j = 0; j < n; ++j) {
        w[j] *= I;
        if (w[j].real() < 0.0 && w_prev[j].real() < 0.0 && (w[j].imag() > 0.0) != (w_prev[j].imag() > 0.0) &&
            w[j].imag() != w_prev[j].imag()) {
          f.branch_valid = false;
          throw BranchError("i u_x crossed the branch cut at t = " + std::to_string(f.t), f.x(j));
        }
      }
      w_prev = std::move(w);
    }
    if ((s + 1) % opt.stride == 0 || s + 1 == steps) record();
  }
  traj.final = std::move(f);
  return traj;
}

double galilean_test(const KdVField& f, Model m, double v, double dt, double t_end) {
  const Trajectory plain = evolve(f, m, dt, t_end);
  if (v == 0.0) {
    const Trajectory again = evolve(f, m, dt, t_end);
    double diff = 0.0;
    for (int j = 0; j < f.n(); ++j) diff = std::max(diff, std::abs(again.final.u[j] - plain.final.u[j]));
    return diff / std::max(max_abs(plain.final.u), 1e-300);
  }
  KdVField boosted = f;
  for (cd& z : boosted.u) z += v;
  const Trajectory moved = evolve(boosted, m, dt, t_end);
  Spectral sp(f.n(), f.L);
  // u(x, t) = w(x + v t, t) - v
  std::vector<cd> back = sp.shift(moved.final.u, -v * (t_end - f.t));
  double diff = 0.0;
  for (int j = 0; j < f.n(); ++j) diff = std::max(diff, std::abs(back[j] - v - plain.final.u[j]));
  return diff / std::max(max_abs(plain.final.u), 1e-300);
}

double pt_asymmetry(const KdVField& f) {
  const int n = f.n();
  double d = 0.0;
  for (int j = 0; j < n; ++j) d = std::max(d, std::abs(f.u[j] - std::conj(f.u[(n - j) % n])));
  return d / std::max(max_abs(f.u), 1e-300);
}

double pt_flow_residual(const KdVField& f, Model m, double dt, double t) {
  const double h = std::abs(dt);
  const Trajectory fwd = evolve(f, m, h, f.t + t);
  const Trajectory bwd = evolve(f, m, -h, f.t - t);
  const int n = f.n();
  double d = 0.0;
  for (int j = 0; j < n; ++j) d = std::max(d, std::abs(fwd.final.u[j] - std::conj(bwd.final.u[(n - j) % n])));
  return d / std::max(max_abs(fwd.final.u), 1e-300);
}

EnergyCheck energy_reality_check(const KdVField& f) {
  f.validate();
  Spectral sp(f.n(), f.L);
  const auto h = hamiltonian_density(f, sp);
  EnergyCheck c;
  for (const cd& z : h) c.E += z * f.dx();
  c.is_real = std::abs(c.E.imag()) < 1e-8 * (1.0 + std::abs(c.E.real()));
  return c;
}

}  // namespace ptlab::kdv
