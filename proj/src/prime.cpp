#include "graphrank/prime.hpp"

#include <string>

#include "graphrank/error.hpp"

namespace graphrank {

namespace {

using u128 = unsigned __int128;

std::uint64_t mulmod64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t powmod64(std::uint64_t base, std::uint64_t e, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (e > 0) {
    if (e & 1) result = mulmod64(result, base, m);
    base = mulmod64(base, base, m);
    e >>= 1;
  }
  return result;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t small : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % small == 0) return n == small;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // This base set is a proven witness set for n < 3.3e24.
  for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    std::uint64_t x = powmod64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod64(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

PrimeModulus::PrimeModulus(std::uint64_t value) : value_(0) {
  if (value <= kLowerBound || value >= kUpperBound) {
    throw Error(ErrorKind::config, "prime modulus " + std::to_string(value) +
                                       " outside (2^30, 2^31)");
  }
  if (!is_prime(value)) {
    throw Error(ErrorKind::config,
                "modulus " + std::to_string(value) + " is not prime");
  }
  value_ = static_cast<std::uint32_t>(value);
}

Residue PrimeModulus::reduce(std::int64_t x) const noexcept {
  std::int64_t r = x % static_cast<std::int64_t>(value_);
  if (r < 0) r += value_;
  return static_cast<Residue>(r);
}

Residue PrimeModulus::pow(Residue base, std::uint64_t exponent) const noexcept {
  return static_cast<Residue>(powmod64(base, exponent, value_));
}

Residue PrimeModulus::inverse(Residue a) const {
  if (a % value_ == 0) {
    throw Error(ErrorKind::domain, "zero has no inverse modulo a prime");
  }
  return pow(a, value_ - 2);
}

std::vector<PrimeModulus> default_primes() {
  return {PrimeModulus{2147483647u}, PrimeModulus{2147483629u}};
}

}  // namespace graphrank
