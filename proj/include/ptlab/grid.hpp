#pragma once
// Uniform 1D grids, complex samples on them and finite-difference operators
// with Dirichlet (zero-padded) boundaries.

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "ptlab/linalg.hpp"

namespace ptlab::grid {

using cd = std::complex<double>;

struct GridWavefunction {
  double x0 = 0.0;
  double dx = 1.0;
  std::vector<cd> values;

  std::size_t size() const { return values.size(); }
  double x(std::size_t j) const { return x0 + static_cast<double>(j) * dx; }
  /// Throws ConfigError unless dx > 0 and n >= 16.
  void validate() const;
  /// True when both grids have the same origin, spacing and size.
  bool conformal(const GridWavefunction& other) const;
};

/// n samples of f on [a, b] including both ends.
GridWavefunction sample(double a, double b, std::size_t n, const std::function<cd(double)>& f);

enum class Stencil { ThreePoint, FivePoint };

/// First derivative, 4th-order central in the interior and 4th-order one-sided
/// in the two outermost rows on each side. Needs n >= 5.
std::vector<cd> derivative(std::span<const cd> f, double dx);

/// First derivative treating values outside the grid as zero (central 4th order everywhere).
std::vector<cd> derivative_dirichlet(std::span<const cd> f, double dx);

/// -f'' with zero padding outside the grid.
std::vector<cd> minus_laplacian(std::span<const cd> f, double dx, Stencil s);

/// -d^2/dx^2 + V as a band matrix (Dirichlet).
linalg::BandedMatrix schrodinger_matrix(std::span<const cd> potential, double dx, Stencil s);

/// -d^2/dx^2 + V as a tridiagonal (3-point).
linalg::Tridiagonal schrodinger_tridiagonal(std::span<const cd> potential, double dx);

/// V(-x)* = V(x) on a grid symmetric about 0, to `tol` relative to max|V|.
bool is_pt_symmetric(std::span<const cd> v, double tol);

double l2_norm(std::span<const cd> f, double dx);

}  // namespace ptlab::grid
