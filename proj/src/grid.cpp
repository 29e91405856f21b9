#include "ptlab/grid.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "ptlab/error.hpp"
#include "ptlab/simd/kernels.hpp"

namespace ptlab::grid {

namespace {

constexpr std::array<double, 5> kD1 = {1.0 / 12, -8.0 / 12, 0.0, 8.0 / 12, -1.0 / 12};
constexpr std::array<double, 3> kD2_3 = {-1.0, 2.0, -1.0};
constexpr std::array<double, 5> kD2_5 = {1.0 / 12, -16.0 / 12, 30.0 / 12, -16.0 / 12, 1.0 / 12};

// Applies a centred stencil with zero padding: interior rows go through the
// vectorized kernel, the r rows at each end are done directly.
std::vector<cd> apply_padded(std::span<const cd> f, std::span<const double> w, double scale) {
  const std::size_t n = f.size();
  const std::size_t r = w.size() / 2;
  std::vector<cd> out(n);
  if (n >= 2 * r + 1) simd::stencil(f, w, scale, out);
  auto direct = [&](std::size_t i) {
    cd acc{};
    for (std::size_t k = 0; k < w.size(); ++k) {
      const std::ptrdiff_t j = static_cast<std::ptrdiff_t>(i + k) - static_cast<std::ptrdiff_t>(r);
      if (j >= 0 && j < static_cast<std::ptrdiff_t>(n)) acc += w[k] * f[static_cast<std::size_t>(j)];
    }
    out[i] = scale * acc;
  };
  for (std::size_t i = 0; i < std::min(r, n); ++i) direct(i);
  for (std::size_t i = (n > r ? n - r : 0); i < n; ++i) direct(i);
  return out;
}

}  // namespace

void GridWavefunction::validate() const {
  if (!(dx > 0.0)) throw ConfigError("grid spacing must be positive");
  if (values.size() < 16) throw ConfigError("grid needs at least 16 points, got " + std::to_string(values.size()));
}

bool GridWavefunction::conformal(const GridWavefunction& o) const {
  return o.values.size() == values.size() && std::abs(o.dx - dx) <= 1e-14 * dx &&
         std::abs(o.x0 - x0) <= 1e-12 * std::max(1.0, std::abs(x0));
}

GridWavefunction sample(double a, double b, std::size_t n, const std::function<cd(double)>& f) {
  if (n < 2 || !(b > a)) throw ConfigError("sample: need b > a and n >= 2");
  GridWavefunction g;
  g.x0 = a;
  g.dx = (b - a) / static_cast<double>(n - 1);
  g.values.resize(n);
  for (std::size_t j = 0; j < n; ++j) g.values[j] = f(g.x(j));
  return g;
}

std::vector<cd> derivative(std::span<const cd> f, double dx) {
  const std::size_t n = f.size();
  if (n < 5) throw ConfigError("derivative needs at least 5 points");
  std::vector<cd> d(n);
  simd::stencil(f, kD1, 1.0 / dx, d);
  // one-sided 4th-order formulas
  d[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / (12.0 * dx);
  d[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / (12.0 * dx);
  d[n - 1] = (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4] + 3.0 * f[n - 5]) / (12.0 * dx);
  d[n - 2] = (3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4] - f[n - 5]) / (12.0 * dx);
  return d;
}

std::vector<cd> derivative_dirichlet(std::span<const cd> f, double dx) {
  return apply_padded(f, kD1, 1.0 / dx);
}

std::vector<cd> minus_laplacian(std::span<const cd> f, double dx, Stencil s) {
  const double sc = 1.0 / (dx * dx);
  return s == Stencil::ThreePoint ? apply_padded(f, kD2_3, sc) : apply_padded(f, kD2_5, sc);
}

linalg::BandedMatrix schrodinger_matrix(std::span<const cd> v, double dx, Stencil s) {
  const std::size_t n = v.size();
  const std::span<const double> w =
      s == Stencil::ThreePoint ? std::span<const double>(kD2_3) : std::span<const double>(kD2_5);
  const std::size_t r = w.size() / 2;
  linalg::BandedMatrix m(n, r, r);
  const double sc = 1.0 / (dx * dx);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < w.size(); ++k) {
      const std::ptrdiff_t j = static_cast<std::ptrdiff_t>(i + k) - static_cast<std::ptrdiff_t>(r);
      if (j >= 0 && j < static_cast<std::ptrdiff_t>(n)) m(i, static_cast<std::size_t>(j)) = sc * w[k];
    }
    m(i, i) += v[i];
  }
  return m;
}

linalg::Tridiagonal schrodinger_tridiagonal(std::span<const cd> v, double dx) {
  const std::size_t n = v.size();
  const double sc = 1.0 / (dx * dx);
  linalg::Tridiagonal t;
  t.diag.resize(n);
  for (std::size_t i = 0; i < n; ++i) t.diag[i] = 2.0 * sc + v[i];
  t.lower.assign(n > 0 ? n - 1 : 0, cd(-sc));
  t.upper = t.lower;
  return t;
}

bool is_pt_symmetric(std::span<const cd> v, double tol) {
  double scale = 0.0;
  for (const cd& z : v) scale = std::max(scale, std::abs(z));
  const std::size_t n = v.size();
  for (std::size_t j = 0; j < n; ++j) {
    if (std::abs(std::conj(v[n - 1 - j]) - v[j]) > tol * std::max(scale, 1e-300)) return false;
  }
  return true;
}

double l2_norm(std::span<const cd> f, double dx) { return std::sqrt(simd::norm2(f) * dx); }

}  // namespace ptlab::grid
