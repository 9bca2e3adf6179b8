#include "kernels_internal.hpp"

namespace graphrank::simd::detail {

namespace {

void axpy_mod_scalar(std::uint32_t* dst, const std::uint32_t* src,
                     std::size_t len, std::uint32_t factor, std::uint32_t p) {
  if (factor == 0) return;
  for (std::size_t k = 0; k < len; ++k) {
    const std::uint64_t t =
        static_cast<std::uint64_t>(factor) * src[k] % p + dst[k];
    dst[k] = static_cast<std::uint32_t>(t >= p ? t - p : t);
  }
}

std::uint32_t dot_mod_scalar(const std::uint32_t* a, const std::uint32_t* b,
                             std::size_t len, std::uint32_t p) {
  std::uint64_t acc = 0;
  for (std::size_t k = 0; k < len; ++k) {
    acc += static_cast<std::uint64_t>(a[k]) * b[k] % p;
    if (acc >= p) acc -= p;
  }
  return static_cast<std::uint32_t>(acc);
}

void axpy_f64_scalar(double* dst, const double* src, std::size_t len,
                     double alpha) {
  for (std::size_t k = 0; k < len; ++k) {
    const double prod = alpha * src[k];
    dst[k] = dst[k] + prod;
  }
}

}  // namespace

const KernelTable kScalarTable{Isa::scalar, axpy_mod_scalar, dot_mod_scalar,
                               axpy_f64_scalar};

}  // namespace graphrank::simd::detail
