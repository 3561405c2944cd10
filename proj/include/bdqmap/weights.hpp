#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "bdqmap/sources.hpp"

namespace bdqmap {

struct WeightProvenance {
  std::string kind;  // "empirical" or "analytic"
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  double q0 = 0.0;
};

// Pattern costs w(a^k) = -ln P(quantized k-window = a^k), natural log.
// Patterns never observed score `cap` = ln(samples * |alphabet|^k), which is
// strictly above every realizable -ln(count/windows).
struct WeightTable {
  int k = 0;
  int b = 0;
  double x_m = 0.0;
  double x_M = 1.0;
  std::vector<double> alphabet;
  std::map<std::vector<double>, double> entries;
  double cap = 0.0;
  WeightProvenance provenance;

  double weight(std::span<const double> pattern) const;
  void validate() const;
};

WeightTable train_weights(const SourceModel& model, int k, int b,
                          std::uint64_t n_samples, std::uint64_t seed);

// Exact pair law of the piecewise-constant source pushed through the
// quantizer: P(a,a') = pi(a) * ((1-q0) 1{a'=a} + q0 mu(a')), k = 2.
WeightTable analytic_weights_markov(const SourceModel& model, int b);

void save_weights(const WeightTable& table, const std::filesystem::path& path);
WeightTable load_weights(const std::filesystem::path& path);

// Additive regularizer offset for the piecewise-constant objective:
// -lambda ln q0 - ln(1 - q0 + q0 2^-b).
double eta_reg(double lambda, double q0, int b);

// Amplitude-indicator scale for the memoryless source:
// (1/b) ln((1-q0)/q0 + 2^-b).
double memoryless_gamma(double q0, int b);

}  // namespace bdqmap
