#include "bdqmap/quantization.hpp"

#include <cmath>
#include <string>

#include "bdqmap/errors.hpp"

namespace bdqmap {

namespace {

void check_bits(int b) {
  if (b < 1 || b > 40)
    throw ConfigError("bit depth b must be in [1, 40], got " +
                      std::to_string(b));
}

}  // namespace

void QuantizerConfig::validate() const {
  check_bits(b);
  if (!(x_m >= 0.0))
    throw ConfigError("quantizer range must satisfy x_m >= 0");
  if (!(x_m < x_M))
    throw ConfigError("quantizer range must satisfy x_m < x_M");
  if (!std::isfinite(x_M)) throw ConfigError("quantizer range must be finite");
}

double quantize_scalar(double x, int b) {
  check_bits(b);
  if (!std::isfinite(x)) throw NumericError("quantize_scalar: x not finite");
  return std::ldexp(std::floor(std::ldexp(x, b)), -b);
}

double representative(double level, int b) {
  check_bits(b);
  if (!std::isfinite(level) || quantize_scalar(level, b) != level)
    throw ConfigError("representative: value is not a b-bit level");
  return level + std::ldexp(1.0, -(b + 1));
}

std::vector<double> alphabet(const QuantizerConfig& cfg) {
  cfg.validate();
  const long long j_min = (long long)std::floor(std::ldexp(cfg.x_m, cfg.b));
  const double scaled_max = std::ldexp(cfg.x_M, cfg.b);
  long long j_max = (long long)std::floor(scaled_max);
  if (!cfg.upper_closed && std::floor(scaled_max) == scaled_max) j_max -= 1;
  if (j_max < j_min) throw ConfigError("alphabet: empty level range");
  if (j_max - j_min + 1 > (1LL << 26))
    throw ConfigError("alphabet: level range too large");
  std::vector<double> levels;
  levels.reserve((std::size_t)(j_max - j_min + 1));
  for (long long j = j_min; j <= j_max; ++j)
    levels.push_back(std::ldexp((double)j, -cfg.b));
  return levels;
}

std::size_t level_index(double level, int b, double x_m) {
  const long long j_min = (long long)std::floor(std::ldexp(x_m, b));
  const long long j = (long long)std::llround(std::ldexp(level, b));
  if (std::ldexp((double)j, -b) != level)
    throw ConfigError("level_index: value is not a b-bit level");
  if (j < j_min) throw ConfigError("level_index: level below range");
  return (std::size_t)(j - j_min);
}

double DistMap::probability(const std::vector<double>& pattern) const {
  if ((int)pattern.size() != k)
    throw ConfigError("DistMap::probability: pattern length != k");
  auto it = counts.find(pattern);
  if (it == counts.end()) return 0.0;
  return (double)it->second / (double)windows;
}

DistMap empirical_k_dist(std::span<const double> levels, int k) {
  if (k < 1) throw ConfigError("empirical_k_dist: k must be >= 1");
  if (levels.size() < (std::size_t)k)
    throw ConfigError("empirical_k_dist: fewer than k samples");
  DistMap dist;
  dist.k = k;
  dist.windows = levels.size() - (std::size_t)k + 1;
  std::vector<double> window((std::size_t)k);
  for (std::size_t i = 0; i < dist.windows; ++i) {
    for (int j = 0; j < k; ++j) window[(std::size_t)j] = levels[i + (std::size_t)j];
    ++dist.counts[window];
  }
  return dist;
}

}  // namespace bdqmap
