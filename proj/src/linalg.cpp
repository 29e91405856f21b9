#include "ptlab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <lapacke.h>

#include "ptlab/error.hpp"

namespace ptlab::linalg {

namespace {

double norm(std::span<const cd> v) {
  double s = 0.0;
  for (const cd& z : v) s += std::norm(z);
  return std::sqrt(s);
}

}  // namespace

std::vector<cd> symmetric_tridiagonal_eigenvalues(std::vector<cd> d, std::vector<cd> off) {
  const std::size_t n = d.size();
  if (n == 0) return d;
  if (off.size() + 1 != n) throw NumericalError("tridiagonal: off-diagonal size mismatch");
  // e[i] couples i and i+1; e[n-1] is scratch.
  std::vector<cd> e(n, cd{});
  std::copy(off.begin(), off.end(), e.begin());
  constexpr double eps = std::numeric_limits<double>::epsilon();
  constexpr int max_iter = 60;

  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    std::size_t m;
    do {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m == l) break;
      if (iter++ == max_iter) {
        throw NumericalError("tridiagonal QL: no convergence at index " + std::to_string(l));
      }
      // Wilkinson-type shift from the leading 2x2 block.
      cd g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      cd r = std::sqrt(g * g + 1.0);
      const cd denom = std::abs(g + r) >= std::abs(g - r) ? g + r : g - r;
      g = d[m] - d[l] + e[l] / denom;
      cd s = 1.0, c = 1.0, p = 0.0;
      bool deflated = false;
      for (std::size_t ii = m; ii-- > l;) {
        const cd f = s * e[ii];
        const cd b = c * e[ii];
        r = std::sqrt(f * f + g * g);
        e[ii + 1] = r;
        if (std::abs(r) < 1e-300) {
          // isotropic rotation (f^2 + g^2 = 0): split and restart
          d[ii + 1] -= p;
          e[m] = 0.0;
          deflated = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[ii + 1] - p;
        r = (d[ii] - g) * s + 2.0 * c * b;
        p = s * r;
        d[ii + 1] = g + p;
        g = c * r - b;
      }
      if (deflated) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    } while (m != l);
  }
  for (const cd& v : d) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw NumericalError("tridiagonal QL: non-finite eigenvalue");
    }
  }
  return d;
}

std::vector<cd> Tridiagonal::symmetric_off_diagonal() const {
  std::vector<cd> off(lower.size());
  for (std::size_t i = 0; i < off.size(); ++i) off[i] = std::sqrt(lower[i] * upper[i]);
  return off;
}

std::vector<cd> Tridiagonal::eigenvalues() const {
  return symmetric_tridiagonal_eigenvalues(diag, symmetric_off_diagonal());
}

cd refine_symmetric_tridiagonal(std::span<const cd> diag, std::span<const cd> off, cd guess,
                                int max_iter) {
  const int n = static_cast<int>(diag.size());
  if (n == 0) throw NumericalError("refine: empty matrix");
  if (n == 1) return diag[0];
  double scale = 0.0;
  for (const cd& z : diag) scale = std::max(scale, std::abs(z));
  for (const cd& z : off) scale = std::max(scale, 2.0 * std::abs(z));
  auto apply = [&](const std::vector<cd>& v, std::vector<cd>& out) {
    for (int i = 0; i < n; ++i) {
      cd acc = diag[i] * v[i];
      if (i > 0) acc += off[i - 1] * v[i - 1];
      if (i + 1 < n) acc += off[i] * v[i + 1];
      out[i] = acc;
    }
  };
  std::vector<cd> v(n), av(n), dl(n - 1), dd(n), du(n - 1), du2(n - 2 > 0 ? n - 2 : 1);
  std::vector<int> ipiv(n);
  for (int i = 0; i < n; ++i) v[i] = cd(1.0 + 0.3 * std::sin(0.37 * i), 0.2 * std::cos(0.91 * i));
  cd sigma = guess;
  cd lambda = guess;
  cd previous = guess;
  bool locked = false;
  for (int it = 0; it < max_iter; ++it) {
    std::copy(off.begin(), off.end(), dl.begin());
    std::copy(off.begin(), off.end(), du.begin());
    for (int i = 0; i < n; ++i) dd[i] = diag[i] - sigma;
    auto z = [](std::vector<cd>& x) { return reinterpret_cast<lapack_complex_double*>(x.data()); };
    int info = LAPACKE_zgttrf(n, z(dl), z(dd), z(du), z(du2), ipiv.data());
    if (info > 0) {
      // sigma is an eigenvalue to working precision
      return sigma;
    }
    if (info < 0) throw NumericalError("tridiagonal LU failed");
    info = LAPACKE_zgttrs(LAPACK_COL_MAJOR, 'N', n, 1, z(dl), z(dd), z(du), z(du2), ipiv.data(), z(v), n);
    if (info != 0) throw NumericalError("tridiagonal solve failed");
    double nv = norm(v);
    if (!(nv > 0.0) || !std::isfinite(nv)) throw NumericalError("shift-invert iteration diverged");
    for (cd& x : v) x /= nv;
    apply(v, av);
    // complex symmetric: left eigenvector is the transpose of the right one
    cd num = 0.0, den = 0.0;
    for (int i = 0; i < n; ++i) {
      num += v[i] * av[i];
      den += v[i] * v[i];
    }
    if (std::abs(den) > 1e-6) {
      lambda = num / den;
    } else {
      // quasi-null iterate under the bilinear form: use the Hermitian quotient for this step
      num = 0.0;
      for (int i = 0; i < n; ++i) num += std::conj(v[i]) * av[i];
      lambda = num;
    }
    double res = 0.0;
    for (int i = 0; i < n; ++i) res += std::norm(av[i] - lambda * v[i]);
    res = std::sqrt(res);
    if (res <= 1e-14 * scale) return lambda;
    // fixed shift (plain inverse iteration, converges to the eigenvalue nearest
    // the guess) until the quotient settles, then Rayleigh-quotient shifts
    if (!locked && it > 0 && std::abs(lambda - previous) < 1e-7 * (1.0 + std::abs(lambda))) locked = true;
    previous = lambda;
    if (locked) sigma = lambda;
  }
  return lambda;
}

std::vector<cd> Tridiagonal::refine(std::span<const cd> guesses) const {
  const std::vector<cd> off = symmetric_off_diagonal();
  std::vector<cd> out;
  out.reserve(guesses.size());
  for (const cd& g : guesses) out.push_back(refine_symmetric_tridiagonal(diag, off, g));
  return out;
}

BandedMatrix::BandedMatrix(std::size_t n, std::size_t kl, std::size_t ku)
    : n_(n), kl_(kl), ku_(ku), data_(n * (kl + ku + 1), cd{}) {}

void BandedMatrix::apply(std::span<const cd> x, std::span<cd> y) const {
  for (std::size_t i = 0; i < n_; ++i) {
    const std::size_t j0 = i >= kl_ ? i - kl_ : 0;
    const std::size_t j1 = std::min(n_ - 1, i + ku_);
    cd acc{};
    for (std::size_t j = j0; j <= j1; ++j) acc += data_[i * width() + (j + kl_ - i)] * x[j];
    y[i] = acc;
  }
}

std::vector<cd> BandedMatrix::apply(std::span<const cd> x) const {
  std::vector<cd> y(n_);
  apply(x, y);
  return y;
}

Eigen::MatrixXcd BandedMatrix::to_dense() const {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n_, n_);
  for (std::size_t i = 0; i < n_; ++i) {
    const std::size_t j0 = i >= kl_ ? i - kl_ : 0;
    const std::size_t j1 = std::min(n_ - 1, i + ku_);
    for (std::size_t j = j0; j <= j1; ++j) m(i, j) = (*this)(i, j);
  }
  return m;
}

void BandedMatrix::add_to_diagonal(cd shift) {
  for (std::size_t i = 0; i < n_; ++i) (*this)(i, i) += shift;
}

BandedLU::BandedLU(const BandedMatrix& a)
    : n_(static_cast<int>(a.size())),
      kl_(static_cast<int>(a.lower_bandwidth())),
      ku_(static_cast<int>(a.upper_bandwidth())),
      ldab_(2 * kl_ + ku_ + 1),
      ab_(static_cast<std::size_t>(ldab_) * n_, cd{}),
      ipiv_(n_) {
  // LAPACK column-major band storage with kl extra rows for fill-in.
  for (int j = 0; j < n_; ++j) {
    const int i0 = std::max(0, j - ku_);
    const int i1 = std::min(n_ - 1, j + kl_);
    for (int i = i0; i <= i1; ++i) {
      ab_[static_cast<std::size_t>(j) * ldab_ + (kl_ + ku_ + i - j)] = a(i, j);
    }
  }
  const int info = LAPACKE_zgbtrf(LAPACK_COL_MAJOR, n_, n_, kl_, ku_,
                                  reinterpret_cast<lapack_complex_double*>(ab_.data()), ldab_,
                                  ipiv_.data());
  if (info != 0) throw NumericalError("banded LU failed, info=" + std::to_string(info));
}

std::vector<cd> BandedLU::solve(std::span<const cd> rhs) const {
  std::vector<cd> x(rhs.begin(), rhs.end());
  const int info = LAPACKE_zgbtrs(
      LAPACK_COL_MAJOR, 'N', n_, kl_, ku_, 1,
      reinterpret_cast<const lapack_complex_double*>(ab_.data()), ldab_, ipiv_.data(),
      reinterpret_cast<lapack_complex_double*>(x.data()), n_);
  if (info != 0) throw NumericalError("banded solve failed, info=" + std::to_string(info));
  return x;
}

EigenPair inverse_iteration(const BandedMatrix& a, cd shift, int max_iter, double tol) {
  const std::size_t n = a.size();
  // Nudge the shift off the eigenvalue so the factorization stays regular.
  const cd sigma = shift + cd(1e-10, 1e-10) * std::max(1.0, std::abs(shift));
  BandedMatrix shifted = a;
  shifted.add_to_diagonal(-sigma);
  const BandedLU lu(shifted);

  std::vector<cd> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = cd(1.0 + 0.1 * std::sin(0.7 * i), 0.05 * std::cos(1.3 * i));
  double nv = norm(v);
  for (cd& z : v) z /= nv;

  EigenPair out{shift, v, std::numeric_limits<double>::infinity()};
  std::vector<cd> av(n);
  for (int it = 0; it < max_iter; ++it) {
    v = lu.solve(v);
    nv = norm(v);
    if (!(nv > 0.0) || !std::isfinite(nv)) throw NumericalError("inverse iteration diverged");
    for (cd& z : v) z /= nv;
    a.apply(v, av);
    cd rq{};
    for (std::size_t i = 0; i < n; ++i) rq += std::conj(v[i]) * av[i];
    double res = 0.0;
    for (std::size_t i = 0; i < n; ++i) res += std::norm(av[i] - rq * v[i]);
    res = std::sqrt(res);
    out = EigenPair{rq, v, res};
    if (res <= tol * std::max(1.0, std::abs(rq))) break;
  }
  return out;
}

std::vector<cd> match_nearest(std::span<const cd> target, std::span<const cd> pool) {
  std::vector<bool> used(pool.size(), false);
  std::vector<cd> out;
  out.reserve(target.size());
  for (const cd& t : target) {
    std::size_t best = pool.size();
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < pool.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(pool[j] - t);
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    if (best == pool.size()) throw NumericalError("match_nearest: pool exhausted");
    used[best] = true;
    out.push_back(pool[best]);
  }
  return out;
}

}  // namespace ptlab::linalg
