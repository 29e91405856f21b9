#include "ptlab/simd/kernels.hpp"

namespace ptlab::simd {
namespace {

void cmul_scalar(const cd* a, const cd* b, cd* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    out[i] = cd(ar * br - ai * bi, ai * br + ar * bi);
  }
}

void cfma_scalar(const cd* a, const cd* b, const cd* c, cd* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    out[i] = cd(ar * br - ai * bi + c[i].real(), ai * br + ar * bi + c[i].imag());
  }
}

void caxpy_scalar(cd s, const cd* a, const cd* b, cd* out, std::size_t n) {
  const double sr = s.real(), si = s.imag();
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    out[i] = cd(sr * ar - si * ai + b[i].real(), si * ar + sr * ai + b[i].imag());
  }
}

void stencil_scalar(const cd* in, std::size_t n, const double* w, std::size_t r, double scale,
                    cd* out) {
  if (n < 2 * r + 1) return;
  for (std::size_t i = r; i + r < n; ++i) {
    double re = 0.0, im = 0.0;
    for (std::size_t k = 0; k <= 2 * r; ++k) {
      re += w[k] * in[i + k - r].real();
      im += w[k] * in[i + k - r].imag();
    }
    out[i] = cd(scale * re, scale * im);
  }
}

double norm2_scalar(const cd* a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i].real() * a[i].real() + a[i].imag() * a[i].imag();
  return s;
}

}  // namespace

const KernelTable& scalar_kernels() noexcept {
  static const KernelTable table{Isa::Scalar, cmul_scalar, cfma_scalar, caxpy_scalar,
                                 stencil_scalar, norm2_scalar};
  return table;
}

}  // namespace ptlab::simd
