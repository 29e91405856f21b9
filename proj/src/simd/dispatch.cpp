#include <cassert>
#include <cstdlib>
#include <cstring>

#include "ptlab/simd/kernels.hpp"

namespace ptlab::simd {

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
  }
  return "unknown";
}

#ifndef PTLAB_HAVE_AVX2
namespace detail {
const KernelTable* avx2_table_if_compiled() noexcept { return nullptr; }
}  // namespace detail
#endif

const KernelTable* avx2_kernels() noexcept {
#if defined(PTLAB_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? detail::avx2_table_if_compiled() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() noexcept {
  static const KernelTable* table = [] {
    const char* env = std::getenv("PTLAB_SIMD");
    if (env != nullptr && std::strcmp(env, "scalar") == 0) return &scalar_kernels();
    const KernelTable* avx = avx2_kernels();
    return avx != nullptr ? avx : &scalar_kernels();
  }();
  return *table;
}

void cmul(std::span<const cd> a, std::span<const cd> b, std::span<cd> out) {
  assert(a.size() == b.size() && out.size() == a.size());
  active().cmul(a.data(), b.data(), out.data(), a.size());
}

void cfma(std::span<const cd> a, std::span<const cd> b, std::span<const cd> c, std::span<cd> out) {
  assert(a.size() == b.size() && c.size() == a.size() && out.size() == a.size());
  active().cfma(a.data(), b.data(), c.data(), out.data(), a.size());
}

void caxpy(cd s, std::span<const cd> a, std::span<const cd> b, std::span<cd> out) {
  assert(a.size() == b.size() && out.size() == a.size());
  active().caxpy(s, a.data(), b.data(), out.data(), a.size());
}

void stencil(std::span<const cd> in, std::span<const double> weights, double scale,
             std::span<cd> out) {
  assert(weights.size() % 2 == 1 && out.size() == in.size());
  active().stencil(in.data(), in.size(), weights.data(), weights.size() / 2, scale, out.data());
}

double norm2(std::span<const cd> a) { return active().norm2(a.data(), a.size()); }

}  // namespace ptlab::simd
