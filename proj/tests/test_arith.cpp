#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "graphrank/error.hpp"
#include "graphrank/prime.hpp"
#include "graphrank/rng.hpp"
#include "graphrank/stats.hpp"

namespace gr = graphrank;

namespace {

bool trial_division_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

}  // namespace

TEST(Prime, MillerRabinMatchesTrialDivision) {
  for (std::uint64_t n = 0; n < 20000; ++n) ASSERT_EQ(gr::is_prime(n), trial_division_prime(n)) << n;
  for (std::uint64_t n = 2147483600; n < 2147483648ULL; ++n)
    ASSERT_EQ(gr::is_prime(n), trial_division_prime(n)) << n;
}

TEST(Prime, StrongPseudoprimesRejected) {
  EXPECT_FALSE(gr::is_prime(3215031751ULL));
  EXPECT_FALSE(gr::is_prime(3825123056546413051ULL));
  EXPECT_TRUE(gr::is_prime(18446744073709551557ULL));
}

TEST(Prime, DefaultsAreTheTwoLargest31BitPrimes) {
  const auto primes = gr::default_primes();
  ASSERT_EQ(primes.size(), 2u);
  EXPECT_EQ(primes[0].value(), 2147483647u);
  EXPECT_EQ(primes[1].value(), 2147483629u);
  for (std::uint64_t v = 2147483630; v < 2147483647; ++v) EXPECT_FALSE(gr::is_prime(v));
}

TEST(Prime, ConstructionRejectsCompositesAndOutOfWindow) {
  auto kind_of = [](std::uint64_t v) {
    try {
      gr::PrimeModulus{v};
    } catch (const gr::Error& e) {
      return e.kind();
    }
    return gr::ErrorKind::io;
  };
  EXPECT_EQ(kind_of(2147483646), gr::ErrorKind::config);
  EXPECT_EQ(kind_of(1000000007), gr::ErrorKind::config);  // prime but below 2^30
  EXPECT_EQ(kind_of(4294967291ULL), gr::ErrorKind::config);
  EXPECT_NO_THROW(gr::PrimeModulus{1073741827});
}

TEST(Prime, FieldArithmetic) {
  const gr::PrimeModulus p(2147483647);
  EXPECT_EQ(p.reduce(-1), 2147483646u);
  EXPECT_EQ(p.reduce(2147483647LL * 3 + 5), 5u);
  EXPECT_EQ(p.add(2147483646, 2), 1u);
  EXPECT_EQ(p.sub(0, 1), 2147483646u);
  EXPECT_EQ(p.neg(0), 0u);
  EXPECT_EQ(p.mul(2147483646, 2147483646), 1u);
  gr::Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    const auto a = static_cast<gr::Residue>(1 + rng.below(p.value() - 1));
    EXPECT_EQ(p.mul(a, p.inverse(a)), 1u);
    EXPECT_EQ(p.pow(a, p.value() - 1), 1u);
  }
  EXPECT_THROW(p.inverse(0), gr::Error);
}

TEST(Rng, ReferenceStream) {
  // xoshiro256** seeded through SplitMix64(0): first SplitMix64 outputs are
  // the published reference values.
  std::uint64_t s = 0;
  EXPECT_EQ(gr::splitmix64(s), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(gr::splitmix64(s), 0x6e789e6aa1b965f4ULL);
  gr::Rng a(123), b(123);
  for (int i = 0; i < 100; ++i) ASSERT_EQ(a.next(), b.next());
}

TEST(Rng, DerivedSeedsDistinct) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t cell = 0; cell < 20; ++cell)
    for (std::uint64_t t = 0; t < 500; ++t) seen.insert(gr::derive_seed(42, cell, t));
  EXPECT_EQ(seen.size(), 20u * 500u);
  EXPECT_NE(gr::derive_seed(1, 0), gr::derive_seed(2, 0));
}

TEST(Rng, BelowIsUniform) {
  gr::Rng rng(9);
  constexpr int kBins = 7;
  constexpr int kDraws = 70000;
  int counts[kBins] = {};
  for (int i = 0; i < kDraws; ++i) ++counts[rng.below(kBins)];
  double chi2 = 0;
  for (int c : counts) chi2 += (c - kDraws / kBins) * (c - kDraws / kBins) / double(kDraws / kBins);
  EXPECT_LT(chi2, 22.46);  // chi-square(6) at 0.999
}

TEST(Rng, Uniform01Range) {
  gr::Rng rng(3);
  double sum = 0;
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform01();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / 100000, 0.5, 0.005);
}

TEST(Rng, PortableLogAccuracy) {
  gr::Rng rng(4);
  for (int i = 0; i < 100000; ++i) {
    const double x = std::ldexp(rng.uniform01() + 0x1.0p-60, static_cast<int>(rng.below(80)) - 40);
    const double ref = std::log(x);
    ASSERT_LE(std::abs(gr::portable_log(x) - ref), 8 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(ref)))
        << x;
  }
  EXPECT_EQ(gr::portable_log(1.0), 0.0);
}

TEST(Stats, WilsonKnownValues) {
  // 50/100 at z = 1.96: centre 0.5, half-width 1.96*sqrt(0.25/100 + 1.96^2/40000)/(1 + 1.96^2/100)
  const auto ci = gr::wilson_interval(50, 100);
  const double z = gr::kZ95;
  const double half = z * std::sqrt(0.0025 + z * z / 40000) / (1 + z * z / 100);
  EXPECT_NEAR(ci.low, 0.5 - half, 1e-15);
  EXPECT_NEAR(ci.high, 0.5 + half, 1e-15);
  EXPECT_EQ(gr::wilson_interval(0, 10).low, 0.0);
  EXPECT_EQ(gr::wilson_interval(10, 10).high, 1.0);
  EXPECT_EQ(gr::wilson_interval(0, 0).width(), 1.0);
}

TEST(Stats, WilsonShrinksLikeInverseSqrt) {
  // Synthetic Bernoulli(0.3) streams: width * sqrt(n) settles near 2 z sqrt(pq).
  gr::Rng rng(77);
  const double target = 2 * gr::kZ95 * std::sqrt(0.3 * 0.7);
  double previous = 1.0;
  for (std::size_t n : {100u, 1000u, 10000u, 100000u}) {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < n; ++i) hits += rng.bernoulli(0.3);
    const auto ci = gr::wilson_interval(hits, n);
    EXPECT_LT(ci.width(), previous);
    EXPECT_NEAR(ci.width() * std::sqrt(double(n)), target, 0.1 * target);
    previous = ci.width();
  }
}

TEST(Stats, MeanStd) {
  const double v[] = {2, 4, 4, 4, 5, 5, 7, 9};
  const auto ms = gr::mean_std(v);
  EXPECT_DOUBLE_EQ(ms.mean, 5.0);
  EXPECT_NEAR(ms.stddev, std::sqrt(32.0 / 7.0), 1e-15);
}

TEST(Error, ParseErrorCarriesLine) {
  const gr::ParseError e(7, "bad");
  EXPECT_EQ(e.line(), 7u);
  EXPECT_EQ(e.kind(), gr::ErrorKind::parse);
  EXPECT_STREQ(e.what(), "line 7: bad");
}
