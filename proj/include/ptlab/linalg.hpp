#pragma once
// Banded complex matrices, a complex-symmetric tridiagonal eigensolver and
// inverse iteration. Grid Hamiltonians in susy and spectra are banded, so
// these keep eigenproblems at O(n^2) instead of dense O(n^3).

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace ptlab::linalg {

using cd = std::complex<double>;

/// Eigenvalues of the complex symmetric (A = A^T, not Hermitian) tridiagonal
/// matrix with diagonal `diag` and off-diagonal `off` (size n-1). Implicit QL
/// with complex orthogonal rotations. Throws NumericalError on breakdown.
std::vector<cd> symmetric_tridiagonal_eigenvalues(std::vector<cd> diag, std::vector<cd> off);

/// General tridiagonal matrix; lower[i] = A(i+1,i), upper[i] = A(i,i+1).
struct Tridiagonal {
  std::vector<cd> lower, diag, upper;

  std::size_t size() const { return diag.size(); }
  /// Diagonal similarity to a complex symmetric tridiagonal; off[i]^2 = lower[i]*upper[i].
  std::vector<cd> symmetric_off_diagonal() const;
  std::vector<cd> eigenvalues() const;
  /// Eigenvalue nearest each guess, by shift-invert / Rayleigh-quotient
  /// iteration on the symmetrized matrix (tridiagonal LU, O(n) per step).
  std::vector<cd> refine(std::span<const cd> guesses) const;
};

/// Eigenvalue of the complex symmetric tridiagonal (diag, off) nearest `guess`.
cd refine_symmetric_tridiagonal(std::span<const cd> diag, std::span<const cd> off, cd guess,
                                int max_iter = 200);

/// Square band matrix with kl sub- and ku super-diagonals.
class BandedMatrix {
 public:
  BandedMatrix(std::size_t n, std::size_t kl, std::size_t ku);

  std::size_t size() const { return n_; }
  std::size_t lower_bandwidth() const { return kl_; }
  std::size_t upper_bandwidth() const { return ku_; }

  bool in_band(std::size_t i, std::size_t j) const {
    return j + kl_ >= i && i + ku_ >= j;
  }
  cd& operator()(std::size_t i, std::size_t j) { return data_[(i * width()) + (j + kl_ - i)]; }
  cd operator()(std::size_t i, std::size_t j) const {
    return in_band(i, j) ? data_[(i * width()) + (j + kl_ - i)] : cd{};
  }

  void apply(std::span<const cd> x, std::span<cd> y) const;
  std::vector<cd> apply(std::span<const cd> x) const;
  Eigen::MatrixXcd to_dense() const;
  void add_to_diagonal(cd shift);

 private:
  std::size_t width() const { return kl_ + ku_ + 1; }
  std::size_t n_, kl_, ku_;
  std::vector<cd> data_;
};

/// LU factorization with partial pivoting of a band matrix (LAPACK zgbtrf).
class BandedLU {
 public:
  explicit BandedLU(const BandedMatrix& a);
  std::vector<cd> solve(std::span<const cd> rhs) const;

 private:
  int n_, kl_, ku_, ldab_;
  std::vector<cd> ab_;
  std::vector<int> ipiv_;
};

struct EigenPair {
  cd value;
  std::vector<cd> vector;  // unit 2-norm
  double residual;         // ||A v - value v||
};

/// Shift-invert iteration toward the eigenvalue closest to `shift`, with
/// Rayleigh-quotient refinement of the value.
EigenPair inverse_iteration(const BandedMatrix& a, cd shift, int max_iter = 30,
                            double tol = 1e-13);

/// One Richardson step for an error expansion c h^order + ...: combines the
/// value at spacing h (`fine`) with the value at 2h (`coarse`).
inline cd richardson(cd coarse, cd fine, int order) {
  const double f = static_cast<double>(1 << order);
  return (f * fine - coarse) / (f - 1.0);
}

/// Pair each entry of `target` with the nearest unused entry of `pool`.
std::vector<cd> match_nearest(std::span<const cd> target, std::span<const cd> pool);

}  // namespace ptlab::linalg
