#include <doctest.h>

#include <complex>
#include <random>
#include <vector>

#include "ptlab/simd/kernels.hpp"

using ptlab::simd::cd;
using ptlab::simd::KernelTable;

namespace {

std::vector<cd> random_vec(std::mt19937& rng, std::size_t n) {
  std::normal_distribution<double> d;
  std::vector<cd> v(n);
  for (auto& z : v) z = cd(d(rng), d(rng));
  return v;
}

double max_diff(const std::vector<cd>& a, const std::vector<cd>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Sizes exercising empty input, pure tails and full vector bodies.
const std::size_t kSizes[] = {0, 1, 2, 3, 4, 5, 7, 8, 9, 16, 31, 64, 257, 1000};

}  // namespace

TEST_CASE("scalar table is always available") {
  const KernelTable& s = ptlab::simd::scalar_kernels();
  CHECK(s.isa == ptlab::simd::Isa::Scalar);
  std::vector<cd> a{cd(1, 2), cd(3, -1)}, b{cd(0, 1), cd(2, 2)}, out(2);
  s.cmul(a.data(), b.data(), out.data(), 2);
  CHECK(out[0] == cd(-2, 1));
  CHECK(out[1] == cd(8, 4));
}

TEST_CASE("avx2 kernels match the scalar reference") {
  const KernelTable* avx = ptlab::simd::avx2_kernels();
  if (avx == nullptr) {
    MESSAGE("AVX2 not available on this machine; equivalence test skipped");
    return;
  }
  const KernelTable& ref = ptlab::simd::scalar_kernels();
  std::mt19937 rng(20240611);
  for (std::size_t n : kSizes) {
    CAPTURE(n);
    const auto a = random_vec(rng, n), b = random_vec(rng, n), c = random_vec(rng, n);
    std::vector<cd> r1(n), r2(n);

    ref.cmul(a.data(), b.data(), r1.data(), n);
    avx->cmul(a.data(), b.data(), r2.data(), n);
    CHECK(max_diff(r1, r2) < 1e-14);

    ref.cfma(a.data(), b.data(), c.data(), r1.data(), n);
    avx->cfma(a.data(), b.data(), c.data(), r2.data(), n);
    CHECK(max_diff(r1, r2) < 1e-14);

    const cd s(0.3, -1.7);
    ref.caxpy(s, a.data(), b.data(), r1.data(), n);
    avx->caxpy(s, a.data(), b.data(), r2.data(), n);
    CHECK(max_diff(r1, r2) < 1e-14);

    const double n1 = ref.norm2(a.data(), n), n2 = avx->norm2(a.data(), n);
    CHECK(std::abs(n1 - n2) <= 1e-13 * (1.0 + n1));
  }
}

TEST_CASE("avx2 stencil matches the scalar reference and leaves edges untouched") {
  const KernelTable* avx = ptlab::simd::avx2_kernels();
  if (avx == nullptr) return;
  const KernelTable& ref = ptlab::simd::scalar_kernels();
  std::mt19937 rng(7);
  const std::vector<double> w3{1.0, -2.0, 1.0};
  const std::vector<double> w5{-1.0 / 12, 16.0 / 12, -30.0 / 12, 16.0 / 12, -1.0 / 12};
  for (const auto* w : {&w3, &w5}) {
    const std::size_t r = w->size() / 2;
    for (std::size_t n : kSizes) {
      if (n < 2 * r + 1) continue;
      CAPTURE(n);
      const auto in = random_vec(rng, n);
      std::vector<cd> r1(n, cd(42, 42)), r2(n, cd(42, 42));
      ref.stencil(in.data(), n, w->data(), r, 2.5, r1.data());
      avx->stencil(in.data(), n, w->data(), r, 2.5, r2.data());
      CHECK(max_diff(r1, r2) < 1e-13);
      for (std::size_t i = 0; i < r; ++i) {
        CHECK(r2[i] == cd(42, 42));
        CHECK(r2[n - 1 - i] == cd(42, 42));
      }
    }
  }
}

TEST_CASE("in-place pointwise products are supported") {
  std::mt19937 rng(3);
  for (const KernelTable* t : {&ptlab::simd::scalar_kernels(), ptlab::simd::avx2_kernels()}) {
    if (t == nullptr) continue;
    const auto a = random_vec(rng, 37), b = random_vec(rng, 37);
    std::vector<cd> expect(37), inplace = a;
    ptlab::simd::scalar_kernels().cmul(a.data(), b.data(), expect.data(), 37);
    t->cmul(inplace.data(), b.data(), inplace.data(), 37);
    CHECK(max_diff(expect, inplace) < 1e-14);
  }
}
