#include "bdqmap/metrics.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "bdqmap/errors.hpp"

namespace bdqmap {

double mse(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty())
    throw ConfigError("mse: inputs must be non-empty and equal length");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return sum / (double)a.size();
}

double psnr(double mse_value, double max_val) {
  if (!(mse_value >= 0.0)) throw NumericError("psnr: mse must be >= 0");
  if (!(max_val > 0.0)) throw NumericError("psnr: max_val must be > 0");
  if (mse_value == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(max_val * max_val / mse_value);
}

double speckled_mse_analytic(double eta2) {
  if (!(eta2 >= 0.0)) throw NumericError("speckled_mse_analytic: eta2 < 0");
  return eta2 * (2.0 - 2.0 * std::sqrt(2.0 / std::numbers::pi));
}

}  // namespace bdqmap
