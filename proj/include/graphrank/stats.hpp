#pragma once

#include <cstddef>
#include <span>

namespace graphrank {

struct Interval {
  double low;
  double high;

  double width() const noexcept { return high - low; }
  bool overlaps(const Interval& other) const noexcept {
    return low <= other.high && other.low <= high;
  }
};

inline constexpr double kZ95 = 1.959963984540054;

/// Wilson score interval for a binomial proportion; [0, 1] when trials == 0.
Interval wilson_interval(std::size_t successes, std::size_t trials,
                         double z = kZ95);

struct MeanStd {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation (n - 1 denominator)
};

MeanStd mean_std(std::span<const double> values);

}  // namespace graphrank
