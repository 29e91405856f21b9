#include "ptlab/spectra.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "ptlab/error.hpp"
#include "ptlab/linalg.hpp"

namespace ptlab::spectra {

std::string classification_name(Classification c) {
  switch (c) {
    case Classification::AllReal: return "AllReal";
    case Classification::ConjugatePairs: return "ConjugatePairs";
    case Classification::Mixed: return "Mixed";
  }
  return "?";
}

ClassifyResult classify_spectrum(std::span<const cd> eigs, double tol) {
  if (!(tol > 0.0)) throw ConfigError("classify_spectrum: tol must be positive");
  const int n = static_cast<int>(eigs.size());
  ClassifyResult r{Classification::AllReal, std::vector<int>(n)};
  for (int i = 0; i < n; ++i) r.pairing[i] = i;
  std::vector<bool> done(n, false);
  bool any_complex = false, unpaired = false;
  for (int i = 0; i < n; ++i) {
    if (std::abs(eigs[i].imag()) < tol) done[i] = true;
  }
  for (int i = 0; i < n; ++i) {
    if (done[i]) continue;
    any_complex = true;
    done[i] = true;
    const cd target = std::conj(eigs[i]);
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
      if (done[j]) continue;
      const double d = std::abs(eigs[j] - target);
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    if (best >= 0 && best_d < tol * (1.0 + std::abs(eigs[i]))) {
      done[best] = true;
      r.pairing[i] = best;
      r.pairing[best] = i;
    } else {
      unpaired = true;
    }
  }
  if (unpaired) {
    r.classification = Classification::Mixed;
  } else if (any_complex) {
    r.classification = Classification::ConjugatePairs;
  }
  return r;
}

bool SpectrumReport::all_converged() const {
  return std::none_of(flagged.begin(), flagged.end(), [](bool b) { return b; });
}

nlohmann::json to_json(const SpectrumReport& r) {
  nlohmann::json eig = nlohmann::json::array();
  for (const cd& e : r.eigenvalues) eig.push_back({{"re", e.real()}, {"im", e.imag()}});
  nlohmann::json diag = nlohmann::json::array();
  for (std::size_t i = 0; i < r.eigenvalues.size(); ++i) {
    diag.push_back({{"change", r.truncation_change.at(i)}, {"flagged", static_cast<bool>(r.flagged.at(i))}});
  }
  return {{"model", r.model},
          {"params", r.params},
          {"dim", r.dim},
          {"eigenvalues", eig},
          {"classification", classification_name(r.classification.classification)},
          {"pairing", r.classification.pairing},
          {"diagnostics", {{"tolerance", r.tolerance}, {"levels", diag}}}};
}

namespace {

double default_half_width(int N) {
  switch (N) {
    case 2: return 10.0;
    case 3: return 9.0;
    default: return 7.0;
  }
}

// Leading WKB estimate of E_n for -d^2 + g(iz)^N.
double wkb_level(const MonomialModel& m, int n) {
  const double N = m.N;
  const double c = std::sqrt(std::numbers::pi) * std::tgamma(1.5 + 1.0 / N) /
                   (std::sin(std::numbers::pi / N) * std::tgamma(1.0 + 1.0 / N));
  return std::pow(m.g, 2.0 / (N + 2.0)) * std::pow((n + 0.5) * c, 2.0 * N / (N + 2.0));
}

// Tridiagonal discretization of -d^2/dz^2 - g(iz)^N on [-L, L] with Dirichlet
// ends, along a contour adapted to the energy E. Between the turning points
// z = R e^{i(pi/N - pi/2)}, R = (E/g)^(1/N), the contour runs horizontally at
// their height, so the eigenfunction oscillates with bounded amplitude; beyond
// them it bends into the Stokes wedges along the wedge-center slope.
linalg::Tridiagonal contour_tridiagonal(const MonomialModel& m, double L, int intervals, double E) {
  const double a = std::tan((m.N - 2) * std::numbers::pi / (2.0 * m.N + 4.0));
  const double R = std::pow(std::max(E, 1e-3) / m.g, 1.0 / m.N);
  const double b0 = R * std::cos(std::numbers::pi / m.N);
  const double c = R * std::sin(std::numbers::pi / m.N);
  const double s0 = std::hypot(c, 1.0);
  const double h = 2.0 * L / intervals;
  const int n = intervals - 1;
  linalg::Tridiagonal t;
  t.diag.resize(n);
  std::vector<cd> up(n), lo(n);
  const cd i(0.0, 1.0);
  for (int j = 0; j < n; ++j) {
    const double x = -L + (j + 1) * h;
    const double r1 = std::hypot(x - c, 1.0), r2 = std::hypot(x + c, 1.0);
    const double sx = 0.5 * (r1 + r2) - s0;
    const double sp = 0.5 * ((x - c) / r1 + (x + c) / r2);
    const double spp = 0.5 * (1.0 / (r1 * r1 * r1) + 1.0 / (r2 * r2 * r2));
    const cd z(x, -(b0 + a * sx));
    const cd zp(1.0, -a * sp);
    const cd zpp(0.0, -a * spp);
    const cd inv2 = 1.0 / (zp * zp);
    const cd drift = zpp / zp / (2.0 * h);
    up[j] = -inv2 * (1.0 / (h * h) - drift);
    lo[j] = -inv2 * (1.0 / (h * h) + drift);
    t.diag[j] = 2.0 * inv2 / (h * h) - m.g * std::pow(i * z, m.N);
  }
  t.upper.assign(up.begin(), up.end() - 1);
  t.lower.assign(lo.begin() + 1, lo.end());
  return t;
}

struct Extrapolated {
  std::vector<cd> values;
  std::vector<double> change;
};

// Level n on its own contour, refined on three grids from the WKB seed.
Extrapolated extrapolate(const MonomialModel& m, double L, int intervals, int k) {
  Extrapolated out;
  for (int n = 0; n < k; ++n) {
    const double E = wkb_level(m, n);
    const std::array<cd, 1> seed{cd(E, 0.0)};
    const cd e2 = contour_tridiagonal(m, L, intervals / 4, E).refine(seed)[0];
    const cd e1 = contour_tridiagonal(m, L, intervals / 2, E).refine(std::array<cd, 1>{e2})[0];
    const cd e0 = contour_tridiagonal(m, L, intervals, E).refine(std::array<cd, 1>{e1})[0];
    const cd ra = linalg::richardson(e1, e0, 2);
    const cd rb = linalg::richardson(e2, e1, 2);
    const cd r = linalg::richardson(rb, ra, 4);
    out.values.push_back(r);
    out.change.push_back(std::abs(r - ra));
  }
  return out;
}

}  // namespace

SpectrumReport monomial_spectrum(const MonomialModel& m, int k) {
  if (m.N < 2 || m.N > 4) throw ConfigError("monomial model supports N in {2,3,4}, got " + std::to_string(m.N));
  if (!(m.g > 0.0)) throw ConfigError("monomial model needs g > 0");
  if (k < 1 || k > 20) throw ConfigError("monomial_spectrum: k must be in 1..20");
  if (m.intervals < 256) throw ConfigError("monomial_spectrum: need at least 256 intervals");
  double L = m.half_width;
  int M = m.intervals / 4 * 4;
  if (!(L > 0.0)) {
    // cover the turning point of level k-1 with room for the tail
    const double base = default_half_width(m.N);
    L = std::max(base, 1.5 * std::pow(wkb_level(m, k - 1) / m.g, 1.0 / m.N) + 3.0);
    M = static_cast<int>(std::ceil(m.intervals * L / base / 4.0)) * 4;
  }
  const Extrapolated base = extrapolate(m, L, M, k);
  // wider box, same spacing
  const int M_wide = static_cast<int>(std::lround(1.25 * M / 4.0)) * 4;
  const Extrapolated wide = extrapolate(m, L * M_wide / M, M_wide, k);

  SpectrumReport r;
  r.model = "monomial";
  r.params = {{"N", m.N}, {"g", m.g}, {"half_width", L}, {"intervals", M}};
  r.dim = M - 1;
  r.tolerance = 1e-4;
  r.eigenvalues = base.values;
  for (int i = 0; i < k; ++i) {
    const double c = std::max(base.change[i], std::abs(wide.values[i] - base.values[i]));
    // two seeds landing on the same eigenvalue means a level was missed
    bool duplicate = false;
    for (int j = 0; j < i; ++j)
      duplicate = duplicate || std::abs(base.values[j] - base.values[i]) < 1e-6 * (1.0 + std::abs(base.values[i]));
    r.truncation_change.push_back(c);
    r.flagged.push_back(duplicate || !(c <= r.tolerance));
  }
  r.classification = classify_spectrum(r.eigenvalues, 1e-6);
  return r;
}

}  // namespace ptlab::spectra
