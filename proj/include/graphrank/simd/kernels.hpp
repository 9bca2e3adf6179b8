#pragma once

// Data-parallel inner loops used by the elimination and convolution code.
//
// Every kernel has a scalar reference implementation and, on x86-64, an AVX2
// variant compiled into its own translation unit. The variant is chosen once
// at runtime from CPUID; GRAPHRANK_SIMD=scalar|avx2|auto overrides the choice.
// Variants must agree bit-for-bit with the scalar reference.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

namespace graphrank::simd {

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa);

struct KernelTable {
  Isa isa;

  // dst[k] <- (dst[k] + factor * src[k]) mod p.
  // Requires p < 2^31 and all inputs (including factor) reduced below p.
  void (*axpy_mod)(std::uint32_t* dst, const std::uint32_t* src,
                   std::size_t len, std::uint32_t factor, std::uint32_t p);

  // sum_k a[k] * b[k] mod p, inputs reduced below p < 2^31.
  std::uint32_t (*dot_mod)(const std::uint32_t* a, const std::uint32_t* b,
                           std::size_t len, std::uint32_t p);

  // dst[k] <- dst[k] + alpha * src[k], evaluated as one rounded product
  // followed by one rounded sum (never fused).
  void (*axpy_f64)(double* dst, const double* src, std::size_t len,
                   double alpha);
};

const KernelTable& scalar_kernels();

/// Null when the AVX2 variant is not compiled in or the CPU lacks AVX2.
const KernelTable* avx2_kernels();

/// The table currently in use by the library.
const KernelTable& active_kernels();

/// Force a specific variant. Returns false (and changes nothing) if the
/// variant is unavailable on this machine.
bool select_isa(Isa isa);

/// Best variant available here, ignoring any override.
Isa best_available_isa();

std::optional<Isa> parse_isa(std::string_view name);

}  // namespace graphrank::simd
