#pragma once
// Data-parallel inner loops on complex grids.
//
// Every kernel has a scalar reference implementation and (on x86-64) an AVX2
// variant. The active table is chosen once at first use from CPUID; setting
// PTLAB_SIMD=scalar in the environment forces the reference path.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace ptlab::simd {

using cd = std::complex<double>;

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa) noexcept;

struct KernelTable {
  Isa isa;
  // out[i] = a[i] * b[i]
  void (*cmul)(const cd* a, const cd* b, cd* out, std::size_t n);
  // out[i] = a[i] * b[i] + c[i]
  void (*cfma)(const cd* a, const cd* b, const cd* c, cd* out, std::size_t n);
  // out[i] = s * a[i] + b[i], s complex
  void (*caxpy)(cd s, const cd* a, const cd* b, cd* out, std::size_t n);
  // out[i] = scale * sum_k w[k] * in[i + k - r] for r <= i < n - r, with
  // 2r+1 real weights. Rows closer than r to either end are not written.
  void (*stencil)(const cd* in, std::size_t n, const double* w, std::size_t r, double scale,
                  cd* out);
  // sum_i |a[i]|^2
  double (*norm2)(const cd* a, std::size_t n);
};

const KernelTable& scalar_kernels() noexcept;
/// nullptr when the binary was built without AVX2 or the CPU lacks AVX2/FMA.
const KernelTable* avx2_kernels() noexcept;
/// Table selected for this process.
const KernelTable& active() noexcept;

// Convenience wrappers over the active table.
void cmul(std::span<const cd> a, std::span<const cd> b, std::span<cd> out);
void cfma(std::span<const cd> a, std::span<const cd> b, std::span<const cd> c, std::span<cd> out);
void caxpy(cd s, std::span<const cd> a, std::span<const cd> b, std::span<cd> out);
void stencil(std::span<const cd> in, std::span<const double> weights, double scale,
             std::span<cd> out);
double norm2(std::span<const cd> a);

namespace detail {
const KernelTable* avx2_table_if_compiled() noexcept;
}

}  // namespace ptlab::simd
