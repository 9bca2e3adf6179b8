// AVX2 variants. This file is compiled with -mavx2 (and without -mfma, so the
// floating-point kernel keeps separate rounding of product and sum).

#include <immintrin.h>

#include "kernels_internal.hpp"

namespace graphrank::simd::detail {

namespace {

// High 32 bits of the 32x32 products of each lane of `a` with broadcast `w`.
inline __m256i mulhi_epu32(__m256i a, __m256i w) {
  const __m256i even = _mm256_mul_epu32(a, w);
  const __m256i odd = _mm256_mul_epu32(_mm256_srli_epi64(a, 32), w);
  return _mm256_blend_epi32(_mm256_srli_epi64(even, 32), odd, 0xAA);
}

// x in [0, 2p) -> x mod p, unsigned lanes.
inline __m256i reduce_once(__m256i x, __m256i p) {
  return _mm256_min_epu32(x, _mm256_sub_epi32(x, p));
}

void axpy_mod_avx2(std::uint32_t* dst, const std::uint32_t* src,
                   std::size_t len, std::uint32_t factor, std::uint32_t p) {
  if (factor == 0) return;
  // Shoup precomputation: factor * a mod p = factor*a - floor(shoup*a/2^32)*p
  // up to one correction, with all arithmetic in 32-bit lanes.
  const auto shoup = static_cast<std::uint32_t>(
      (static_cast<std::uint64_t>(factor) << 32) / p);
  const __m256i vf = _mm256_set1_epi32(static_cast<int>(factor));
  const __m256i vs = _mm256_set1_epi32(static_cast<int>(shoup));
  const __m256i vp = _mm256_set1_epi32(static_cast<int>(p));

  std::size_t k = 0;
  for (; k + 8 <= len; k += 8) {
    const __m256i a =
        _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + k));
    const __m256i d = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(dst + k));
    const __m256i q = mulhi_epu32(a, vs);
    __m256i r = _mm256_sub_epi32(_mm256_mullo_epi32(a, vf),
                                 _mm256_mullo_epi32(q, vp));
    r = reduce_once(r, vp);
    const __m256i s = reduce_once(_mm256_add_epi32(d, r), vp);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + k), s);
  }
  for (; k < len; ++k) {
    const std::uint32_t q = static_cast<std::uint32_t>(
        (static_cast<std::uint64_t>(shoup) * src[k]) >> 32);
    std::uint32_t r = factor * src[k] - q * p;
    if (r >= p) r -= p;
    std::uint32_t s = dst[k] + r;
    dst[k] = s >= p ? s - p : s;
  }
}

std::uint32_t dot_mod_avx2(const std::uint32_t* a, const std::uint32_t* b,
                           std::size_t len, std::uint32_t p) {
  const __m256i mask = _mm256_set1_epi64x(0xffffffffLL);
  __m256i acc_lo = _mm256_setzero_si256();
  __m256i acc_hi = _mm256_setzero_si256();
  std::size_t k = 0;
  for (; k + 8 <= len; k += 8) {
    const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + k));
    const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + k));
    const __m256i even = _mm256_mul_epu32(va, vb);
    const __m256i odd = _mm256_mul_epu32(_mm256_srli_epi64(va, 32),
                                         _mm256_srli_epi64(vb, 32));
    acc_lo = _mm256_add_epi64(acc_lo, _mm256_and_si256(even, mask));
    acc_lo = _mm256_add_epi64(acc_lo, _mm256_and_si256(odd, mask));
    acc_hi = _mm256_add_epi64(acc_hi, _mm256_srli_epi64(even, 32));
    acc_hi = _mm256_add_epi64(acc_hi, _mm256_srli_epi64(odd, 32));
  }
  alignas(32) std::uint64_t lo[4];
  alignas(32) std::uint64_t hi[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lo), acc_lo);
  _mm256_store_si256(reinterpret_cast<__m256i*>(hi), acc_hi);
  unsigned __int128 total = 0;
  for (int lane = 0; lane < 4; ++lane) {
    total += lo[lane];
    total += static_cast<unsigned __int128>(hi[lane]) << 32;
  }
  for (; k < len; ++k) total += static_cast<std::uint64_t>(a[k]) * b[k];
  return static_cast<std::uint32_t>(total % p);
}

void axpy_f64_avx2(double* dst, const double* src, std::size_t len,
                   double alpha) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t k = 0;
  for (; k + 4 <= len; k += 4) {
    const __m256d s = _mm256_loadu_pd(src + k);
    const __m256d d = _mm256_loadu_pd(dst + k);
    _mm256_storeu_pd(dst + k, _mm256_add_pd(d, _mm256_mul_pd(va, s)));
  }
  for (; k < len; ++k) {
    const double prod = alpha * src[k];
    dst[k] = dst[k] + prod;
  }
}

}  // namespace

const KernelTable kAvx2Table{Isa::avx2, axpy_mod_avx2, dot_mod_avx2,
                             axpy_f64_avx2};

}  // namespace graphrank::simd::detail
