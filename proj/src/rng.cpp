#include "graphrank/rng.hpp"

#include <cmath>

namespace graphrank {

double portable_log(double x) noexcept {
  constexpr double kLn2 = 0.693147180559945309417232121458176568;
  constexpr double kSqrtHalf = 0.707106781186547524400844362104849039;
  int exponent = 0;
  double m = std::frexp(x, &exponent);  // exact: m in [0.5, 1)
  if (m < kSqrtHalf) {
    m *= 2.0;
    --exponent;
  }
  // log m = 2 atanh(s), |s| <= 0.1716, so s^2 <= 0.0295 and 13 odd terms
  // bring the truncation error below 1e-19.
  const double s = (m - 1.0) / (m + 1.0);
  const double s2 = s * s;
  double series = 1.0 / 25.0;
  for (int k = 11; k >= 0; --k) {
    series = series * s2 + 1.0 / (2 * k + 1);
  }
  return static_cast<double>(exponent) * kLn2 + 2.0 * s * series;
}

}  // namespace graphrank
