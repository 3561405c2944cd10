#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

namespace test_util {

// One-sample Kolmogorov-Smirnov statistic against a CDF.
template <typename Cdf>
double ks_statistic(std::vector<double> xs, Cdf&& cdf) {
  std::sort(xs.begin(), xs.end());
  const double m = (double)xs.size();
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max(d, std::abs(f - (double)i / m));
    d = std::max(d, std::abs(f - (double)(i + 1) / m));
  }
  return d;
}

// sqrt(m) * D below this passes at significance 0.01.
inline constexpr double kKsCrit99 = 1.6276;

inline double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

inline double uniform_cdf(double x, double lo, double hi) {
  if (x <= lo) return 0.0;
  if (x >= hi) return 1.0;
  return (x - lo) / (hi - lo);
}

}  // namespace test_util
