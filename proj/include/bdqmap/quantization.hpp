#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace bdqmap {

// Dyadic quantizer cell width 2^-b over the amplitude range [x_m, x_M].
// upper_closed controls whether the cell containing x_M itself belongs to the
// alphabet; it should only when x_M is attained with positive probability.
struct QuantizerConfig {
  int b = 2;
  double x_m = 0.0;
  double x_M = 1.0;
  bool upper_closed = false;

  void validate() const;
};

// Largest level j*2^-b not above x, i.e. 2^-b * floor(2^b * x).
double quantize_scalar(double x, int b);

// Cell midpoint used as the reconstruction amplitude for a level.
// `level` must itself be a b-bit level.
double representative(double level, int b);

// All levels whose cells intersect the amplitude range, ascending.
std::vector<double> alphabet(const QuantizerConfig& cfg);

// Index of a level within the alphabet implied by (b, x_m): 0 for the cell
// containing x_m, counting up.
std::size_t level_index(double level, int b, double x_m);

// Empirical distribution of length-k windows of quantized levels.
struct DistMap {
  int k = 0;
  std::uint64_t windows = 0;
  std::map<std::vector<double>, std::uint64_t> counts;

  double probability(const std::vector<double>& pattern) const;
};

DistMap empirical_k_dist(std::span<const double> levels, int k);

}  // namespace bdqmap
