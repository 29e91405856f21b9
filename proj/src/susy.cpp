#include "ptlab/susy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ptlab/error.hpp"
#include "ptlab/simd/kernels.hpp"

namespace ptlab::susy {

namespace {

void check_nodes(const GridWavefunction& psi) {
  const std::size_t n = psi.size();
  std::vector<double> a(n);
  double amax = 0.0, imax = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    a[j] = std::abs(psi.values[j]);
    amax = std::max(amax, a[j]);
    imax = std::max(imax, std::abs(psi.values[j].imag()));
  }
  if (!(amax > 0.0)) throw NodeError("wavefunction vanishes identically", psi.x(0));
  for (std::size_t j = 0; j < n; ++j) {
    if (a[j] == 0.0) throw NodeError("wavefunction has an exact zero", psi.x(j));
  }
  // Outermost local maxima of |psi| that stand above round-off.
  std::size_t lo = n, hi = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const bool left = j == 0 || a[j] >= a[j - 1];
    const bool right = j + 1 == n || a[j] >= a[j + 1];
    if (left && right && a[j] > 1e-8 * amax) {
      lo = std::min(lo, j);
      hi = std::max(hi, j);
    }
  }
  for (std::size_t j = lo; j <= hi && j < n; ++j) {
    if (a[j] < 1e-12 * amax) throw NodeError("|psi| below 1e-12 max inside the window", psi.x(j));
  }
  const bool real_valued = imax <= 1e-14 * amax;
  if (real_valued) {
    for (std::size_t j = 0; j + 1 < n; ++j) {
      const double p = psi.values[j].real(), q = psi.values[j + 1].real();
      if (p * q < 0.0 && std::min(a[j], a[j + 1]) > 1e-12 * amax) {
        throw NodeError("real wavefunction changes sign", 0.5 * (psi.x(j) + psi.x(j + 1)));
      }
    }
  }
}

// log psi with continuous imaginary part
std::vector<cd> unwrapped_log(const GridWavefunction& psi) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  std::vector<cd> out(psi.size());
  double offset = 0.0, prev = 0.0;
  for (std::size_t j = 0; j < psi.size(); ++j) {
    const double ph = std::arg(psi.values[j]);
    if (j > 0) {
      const double jump = ph + offset - prev;
      offset -= two_pi * std::round(jump / two_pi);
    }
    prev = ph + offset;
    out[j] = cd(std::log(std::abs(psi.values[j])), prev);
  }
  return out;
}

std::vector<cd> interior(std::span<const cd> f) {
  if (f.size() <= 2 * kInteriorMargin) return {};
  return {f.begin() + kInteriorMargin, f.end() - kInteriorMargin};
}

double interior_norm(std::span<const cd> f) { return std::sqrt(simd::norm2(interior(f))); }

std::vector<cd> sub(std::span<const cd> a, std::span<const cd> b) {
  std::vector<cd> out(a.size());
  simd::caxpy(-1.0, b, a, out);
  return out;
}

std::vector<cd> shift(std::span<const cd> f, std::span<const cd> hf, cd e) {
  std::vector<cd> out(f.size());
  simd::caxpy(-e, f, hf, out);
  return out;
}

std::vector<cd> subsample(const std::vector<cd>& v) {
  std::vector<cd> out;
  out.reserve(v.size() / 2);
  for (std::size_t j = 1; j < v.size(); j += 2) out.push_back(v[j]);
  return out;
}

std::vector<cd> sorted_by_real(std::vector<cd> v) {
  std::sort(v.begin(), v.end(), [](cd a, cd b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return v;
}

}  // namespace

SuperPartnerPair pair_from_superpotential(double x0, double dx, std::vector<cd> W, cd E_m) {
  if (!(dx > 0.0) || W.size() < 16) throw ConfigError("superpotential grid needs dx > 0 and n >= 16");
  SuperPartnerPair p;
  p.x0 = x0;
  p.dx = dx;
  p.W = std::move(W);
  const std::vector<cd> wp = grid::derivative(p.W, dx);
  const std::size_t n = p.W.size();
  p.V_minus.resize(n);
  p.V_plus.resize(n);
  p.w.resize(n);
  p.w_hat.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const cd w2 = p.W[j] * p.W[j];
    p.V_minus[j] = w2 - wp[j];
    p.V_plus[j] = w2 + wp[j];
    p.w[j] = p.W[j].real();
    p.w_hat[j] = p.W[j].imag();
  }
  p.E_m = E_m;
  p.eps_m = E_m.real();
  p.eps_hat_m = E_m.imag();
  return p;
}

SuperPartnerPair superpotential_from_groundstate(const GridWavefunction& psi, cd E_m) {
  psi.validate();
  check_nodes(psi);
  std::vector<cd> W = grid::derivative(unwrapped_log(psi), psi.dx);
  for (cd& z : W) z = -z;
  return pair_from_superpotential(psi.x0, psi.dx, std::move(W), E_m);
}

DiscretizedHamiltonian::DiscretizedHamiltonian(double x0, double dx, std::vector<cd> potential)
    : x0_(x0), dx_(dx), v_(std::move(potential)) {
  if (!(dx_ > 0.0) || v_.size() < 16) throw ConfigError("Hamiltonian grid needs dx > 0 and n >= 16");
}

std::vector<cd> DiscretizedHamiltonian::apply(std::span<const cd> f, Stencil s) const {
  std::vector<cd> lap = grid::minus_laplacian(f, dx_, s);
  simd::cfma(v_, f, lap, lap);
  return lap;
}

std::vector<DiscretizedHamiltonian::Level> DiscretizedHamiltonian::eigenvalues(std::size_t k) const {
  const std::vector<cd> v1 = subsample(v_);
  const std::vector<cd> v2 = subsample(v1);
  if (v2.size() < k + 8) throw ConfigError("grid too coarse for the requested number of levels");
  const linalg::Tridiagonal t2 = grid::schrodinger_tridiagonal(v2, 4 * dx_);
  auto seed = sorted_by_real(t2.eigenvalues());
  seed.resize(std::min(k, seed.size()));
  const auto e2 = t2.refine(seed);
  const auto e1 = grid::schrodinger_tridiagonal(v1, 2 * dx_).refine(e2);
  const auto e0 = grid::schrodinger_tridiagonal(v_, dx_).refine(e1);
  std::vector<Level> out;
  for (std::size_t i = 0; i < e0.size(); ++i) {
    const cd ra = linalg::richardson(e1[i], e0[i], 2);
    const cd rb = linalg::richardson(e2[i], e1[i], 2);
    const cd r = linalg::richardson(rb, ra, 4);
    out.push_back({r, std::abs(r - ra)});
  }
  return out;
}

linalg::EigenPair DiscretizedHamiltonian::eigenvector(cd s) const {
  return linalg::inverse_iteration(banded(Stencil::FivePoint), s);
}

PartnerHamiltonians build_partner_hamiltonians(const SuperPartnerPair& pair, cd E_m) {
  std::vector<cd> vm(pair.V_minus), vp(pair.V_plus);
  for (cd& z : vm) z += E_m;
  for (cd& z : vp) z += E_m;
  return {DiscretizedHamiltonian(pair.x0, pair.dx, std::move(vm)),
          DiscretizedHamiltonian(pair.x0, pair.dx, std::move(vp))};
}

std::vector<cd> apply_Q(const SuperPartnerPair& pair, std::span<const cd> f) {
  std::vector<cd> d = grid::derivative_dirichlet(f, pair.dx);
  simd::cfma(pair.W, f, d, d);
  return d;
}

std::vector<cd> apply_Qtilde(const SuperPartnerPair& pair, std::span<const cd> f) {
  std::vector<cd> d = grid::derivative_dirichlet(f, pair.dx);
  for (cd& z : d) z = -z;
  simd::cfma(pair.W, f, d, d);
  return d;
}

std::vector<std::vector<cd>> probe_functions(double x0, double dx, std::size_t n) {
  const double width = dx * static_cast<double>(n - 1);
  const double sigma = width / 16.0;
  std::vector<std::vector<cd>> out;
  for (double frac : {0.25, 0.5, 0.75}) {
    const double c = x0 + frac * width;
    std::vector<cd> f(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double t = (x0 + static_cast<double>(j) * dx - c) / sigma;
      f[j] = std::exp(-0.5 * t * t);
    }
    out.push_back(std::move(f));
  }
  return out;
}

double verify_intertwining(const SuperPartnerPair& pair, const PartnerHamiltonians& h, bool tilde) {
  double worst = 0.0;
  const auto& first = tilde ? h.plus : h.minus;
  const auto& second = tilde ? h.minus : h.plus;
  auto Q = [&](std::span<const cd> f) { return tilde ? apply_Qtilde(pair, f) : apply_Q(pair, f); };
  for (const auto& f : probe_functions(pair.x0, pair.dx, pair.size())) {
    const auto hf = first.apply(f, Stencil::FivePoint);
    const auto lhs = Q(hf);
    const auto rhs = second.apply(Q(f), Stencil::FivePoint);
    worst = std::max(worst, interior_norm(sub(lhs, rhs)) / interior_norm(hf));
  }
  return worst;
}

double verify_factorization(const SuperPartnerPair& pair, const PartnerHamiltonians& h) {
  double worst = 0.0;
  for (const auto& f : probe_functions(pair.x0, pair.dx, pair.size())) {
    const auto hp = shift(f, h.plus.apply(f, Stencil::FivePoint), pair.E_m);
    const auto hm = shift(f, h.minus.apply(f, Stencil::FivePoint), pair.E_m);
    const auto qqt = apply_Q(pair, apply_Qtilde(pair, f));
    const auto qtq = apply_Qtilde(pair, apply_Q(pair, f));
    worst = std::max(worst, interior_norm(sub(hp, qqt)) / interior_norm(hp));
    worst = std::max(worst, interior_norm(sub(hm, qtq)) / interior_norm(hm));
  }
  return worst;
}

MappedWavefunction map_wavefunction(const SuperPartnerPair& pair, const GridWavefunction& phi) {
  if (phi.size() != pair.size() || std::abs(phi.dx - pair.dx) > 1e-14 * pair.dx) {
    throw ConfigError("map_wavefunction: grids are not conformal");
  }
  MappedWavefunction out;
  out.phi.x0 = phi.x0;
  out.phi.dx = phi.dx;
  out.phi.values = apply_Q(pair, phi.values);
  out.annihilated = grid::l2_norm(out.phi.values, phi.dx) < 1e-6 * grid::l2_norm(phi.values, phi.dx);
  return out;
}

double eigen_residual(const DiscretizedHamiltonian& h, std::span<const cd> f, cd E) {
  const auto r = shift(f, h.apply(f, Stencil::FivePoint), E);
  return interior_norm(r) / std::sqrt(simd::norm2(f));
}

std::string case_name(SusyCase c) {
  switch (c) {
    case SusyCase::IsospectralQuartet: return "IsospectralQuartet";
    case SusyCase::TripletPlus: return "TripletPlus";
    case SusyCase::TripletMinus: return "TripletMinus";
    case SusyCase::Doublet: return "Doublet";
  }
  return "?";
}

Classification classify_case(const SuperPartnerPair& pair) {
  Classification c{SusyCase::IsospectralQuartet};
  const std::size_t n = pair.size();
  for (double v : pair.w_hat) c.w_hat_sup = std::max(c.w_hat_sup, std::abs(v));
  if (c.w_hat_sup < 1e-10) {
    c.result = SusyCase::Doublet;
    return c;
  }
  std::vector<cd> wh(pair.w_hat.begin(), pair.w_hat.end());
  const std::vector<cd> dwh = grid::derivative(wh, pair.dx);
  for (std::size_t j = 0; j < n; ++j) {
    const bool zero = std::abs(pair.w_hat[j]) < 1e-12 * c.w_hat_sup ||
                      (j + 1 < n && pair.w_hat[j] * pair.w_hat[j + 1] < 0.0);
    if (zero) {
      c.warning = "w_hat vanishes near x = " + std::to_string(pair.x(j)) +
                  "; triplet relation undefined there";
      c.plus_residual = c.minus_residual = std::numeric_limits<double>::infinity();
      return c;
    }
  }
  for (std::size_t j = 2; j + 2 < n; ++j) {
    const double d = dwh[j].real();
    const double two_wh = 2.0 * pair.w_hat[j];
    c.plus_residual = std::max(c.plus_residual, std::abs(pair.w[j] - (-d - pair.eps_hat_m) / two_wh));
    c.minus_residual = std::max(c.minus_residual, std::abs(pair.w[j] - (d - pair.eps_hat_m) / two_wh));
  }
  if (c.plus_residual < 1e-8) {
    c.result = SusyCase::TripletPlus;
  } else if (c.minus_residual < 1e-8) {
    c.result = SusyCase::TripletMinus;
  }
  return c;
}

}  // namespace ptlab::susy
