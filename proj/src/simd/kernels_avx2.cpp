// AVX2 + FMA variants, two complex doubles per 256-bit lane.
// Compiled with -mavx2 -mfma; only reached after a CPUID check.

#include "ptlab/simd/kernels.hpp"

#include <immintrin.h>

namespace ptlab::simd {
namespace {

// [ar0 ai0 ar1 ai1] * [br0 bi0 br1 bi1]
inline __m256d mul2(__m256d a, __m256d b) {
  const __m256d b_re = _mm256_movedup_pd(b);
  const __m256d b_im = _mm256_permute_pd(b, 0xF);
  const __m256d a_sw = _mm256_permute_pd(a, 0x5);
  return _mm256_fmaddsub_pd(a, b_re, _mm256_mul_pd(a_sw, b_im));
}

void cmul_avx2(const cd* a, const cd* b, cd* out, std::size_t n) {
  const double* pa = reinterpret_cast<const double*>(a);
  const double* pb = reinterpret_cast<const double*>(b);
  double* po = reinterpret_cast<double*>(out);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    _mm256_storeu_pd(po + 2 * i, mul2(_mm256_loadu_pd(pa + 2 * i), _mm256_loadu_pd(pb + 2 * i)));
  }
  for (; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    out[i] = cd(ar * br - ai * bi, ai * br + ar * bi);
  }
}

void cfma_avx2(const cd* a, const cd* b, const cd* c, cd* out, std::size_t n) {
  const double* pa = reinterpret_cast<const double*>(a);
  const double* pb = reinterpret_cast<const double*>(b);
  const double* pc = reinterpret_cast<const double*>(c);
  double* po = reinterpret_cast<double*>(out);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d p = mul2(_mm256_loadu_pd(pa + 2 * i), _mm256_loadu_pd(pb + 2 * i));
    _mm256_storeu_pd(po + 2 * i, _mm256_add_pd(p, _mm256_loadu_pd(pc + 2 * i)));
  }
  for (; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    out[i] = cd(ar * br - ai * bi + c[i].real(), ai * br + ar * bi + c[i].imag());
  }
}

void caxpy_avx2(cd s, const cd* a, const cd* b, cd* out, std::size_t n) {
  const double* pa = reinterpret_cast<const double*>(a);
  const double* pb = reinterpret_cast<const double*>(b);
  double* po = reinterpret_cast<double*>(out);
  const __m256d sv = _mm256_setr_pd(s.real(), s.imag(), s.real(), s.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d p = mul2(_mm256_loadu_pd(pa + 2 * i), sv);
    _mm256_storeu_pd(po + 2 * i, _mm256_add_pd(p, _mm256_loadu_pd(pb + 2 * i)));
  }
  const double sr = s.real(), si = s.imag();
  for (; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    out[i] = cd(sr * ar - si * ai + b[i].real(), si * ar + sr * ai + b[i].imag());
  }
}

// Real weights act on re and im alike, so the interleaved array is a plain
// double stencil with stride 2.
void stencil_avx2(const cd* in, std::size_t n, const double* w, std::size_t r, double scale,
                  cd* out) {
  if (n < 2 * r + 1) return;
  const double* pin = reinterpret_cast<const double*>(in);
  double* po = reinterpret_cast<double*>(out);
  const __m256d sc = _mm256_set1_pd(scale);
  std::size_t i = r;
  for (; i + 2 + r <= n; i += 2) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t k = 0; k <= 2 * r; ++k) {
      acc = _mm256_fmadd_pd(_mm256_set1_pd(w[k]), _mm256_loadu_pd(pin + 2 * (i + k - r)), acc);
    }
    _mm256_storeu_pd(po + 2 * i, _mm256_mul_pd(acc, sc));
  }
  for (; i + r < n; ++i) {
    double re = 0.0, im = 0.0;
    for (std::size_t k = 0; k <= 2 * r; ++k) {
      re += w[k] * in[i + k - r].real();
      im += w[k] * in[i + k - r].imag();
    }
    out[i] = cd(scale * re, scale * im);
  }
}

double norm2_avx2(const cd* a, std::size_t n) {
  const double* pa = reinterpret_cast<const double*>(a);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d v = _mm256_loadu_pd(pa + 2 * i);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double s = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) s += a[i].real() * a[i].real() + a[i].imag() * a[i].imag();
  return s;
}

}  // namespace

namespace detail {
const KernelTable* avx2_table_if_compiled() noexcept {
  static const KernelTable table{Isa::Avx2, cmul_avx2, cfma_avx2, caxpy_avx2, stencil_avx2,
                                 norm2_avx2};
  return &table;
}
}  // namespace detail

}  // namespace ptlab::simd
