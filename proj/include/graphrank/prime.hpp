#pragma once

#include <cstdint>
#include <vector>

namespace graphrank {

using Residue = std::uint32_t;

/// A prime p with 2^30 < p < 2^31.
///
/// The window keeps every residue in 31 bits, so a sum of two residues fits
/// in a uint32 and Shoup-style precomputed multiplication works on 32-bit
/// lanes. Construction rejects composites and out-of-window values.
class PrimeModulus {
 public:
  static constexpr std::uint64_t kLowerBound = std::uint64_t{1} << 30;
  static constexpr std::uint64_t kUpperBound = std::uint64_t{1} << 31;

  explicit PrimeModulus(std::uint64_t value);

  std::uint32_t value() const noexcept { return value_; }

  Residue reduce(std::int64_t x) const noexcept;
  Residue add(Residue a, Residue b) const noexcept {
    std::uint32_t s = a + b;
    return s >= value_ ? s - value_ : s;
  }
  Residue sub(Residue a, Residue b) const noexcept {
    return a >= b ? a - b : a + value_ - b;
  }
  Residue neg(Residue a) const noexcept { return a == 0 ? 0 : value_ - a; }
  Residue mul(Residue a, Residue b) const noexcept {
    return static_cast<Residue>(static_cast<std::uint64_t>(a) * b % value_);
  }
  Residue pow(Residue base, std::uint64_t exponent) const noexcept;
  /// Multiplicative inverse; `a` must be nonzero.
  Residue inverse(Residue a) const;

  friend bool operator==(const PrimeModulus&, const PrimeModulus&) = default;

 private:
  std::uint32_t value_;
};

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
bool is_prime(std::uint64_t n);

/// The two fixed primes used when the caller supplies none: 2^31 - 1 and the
/// next prime below it.
std::vector<PrimeModulus> default_primes();

}  // namespace graphrank
