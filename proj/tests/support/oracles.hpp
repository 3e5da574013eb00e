#pragma once

// Reference implementations used only by tests. They avoid every code path
// of the library they check.

#include <cmath>
#include <cstddef>

namespace testing_oracles {

/// Phi(v) from the Maclaurin series of erf in long double (|v| <= 6), or the
/// complementary library function in the far tail.
inline long double normal_cdf(long double v) {
  const long double x = v / std::sqrt(2.0L);
  if (std::fabs(x) > 4.0L) return 0.5L * std::erfc(-x);
  long double term = x, sum = x;
  for (int n = 1; n < 400; ++n) {
    term *= -x * x / n;
    const long double add = term / (2 * n + 1);
    sum += add;
    if (std::fabs(add) < 1e-30L) break;
  }
  const long double erf = 2.0L / std::sqrt(3.14159265358979323846264338327950288L) * sum;
  return 0.5L * (1.0L + erf);
}

/// Quantile by bisection on normal_cdf.
inline long double normal_quantile(long double p) {
  long double lo = -40.0L, hi = 40.0L;
  for (int i = 0; i < 200; ++i) {
    const long double mid = 0.5L * (lo + hi);
    if (normal_cdf(mid) < p) lo = mid;
    else hi = mid;
  }
  return 0.5L * (lo + hi);
}

}  // namespace testing_oracles
