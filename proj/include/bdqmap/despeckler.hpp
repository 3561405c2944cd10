#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "bdqmap/weights.hpp"

namespace bdqmap {

// Per-sample fidelity ln u^2 + y^2 / u^2, the negative log-likelihood of y
// under amplitude u and unit-variance multiplicative noise (up to constants).
double fidelity_cost(double u, double y);

struct DespecklerConfig {
  double lambda = 1.0;
  int b = 2;
  int k = 2;
  std::shared_ptr<const WeightTable> weights;

  void validate() const;
};

struct TrellisSolution {
  std::vector<double> levels;       // quantized levels, one per sample
  double total_cost = 0.0;          // objective value of `levels`
  std::vector<std::size_t> jumps;   // level-change positions
};

// Exact minimizer over quantized sequences of
//   (1/n) [ sum_i fid(rep(u_i), y_i) + (lambda/b) sum_{i>=k} w(u_{i-k+1..i}) ]
// by dynamic programming over |alphabet|^k window states. Ties break toward
// the lexicographically smaller state so results are reproducible.
TrellisSolution bdqmap_b_viterbi(std::span<const double> y,
                                 const DespecklerConfig& cfg);

// Evaluates the same objective for an arbitrary level sequence.
double trellis_objective(std::span<const double> levels,
                         std::span<const double> y,
                         const DespecklerConfig& cfg);

// Positions where consecutive entries differ (counted as elements before the
// boundary), ascending.
std::vector<std::size_t> detect_jumps(std::span<const double> levels);

// Per-segment maximum-likelihood constant: x_hat = sqrt(mean y^2) on each
// segment delimited by `boundaries` (strictly increasing, within (0, n)).
std::vector<double> segment_ml(std::span<const double> y,
                               std::span<const std::size_t> boundaries);

// Quantized solve, then re-estimate each detected segment by its ML constant.
std::vector<double> bdqmap_refined(std::span<const double> y,
                                   const DespecklerConfig& cfg);

// Genie-aided ML: segment RMS at the true jump positions.
std::vector<double> genie_ml(std::span<const double> y,
                             std::span<const std::size_t> true_jumps);

struct Partition {
  std::vector<double> amplitudes;   // one per sample
  std::vector<std::size_t> jumps;
  double objective = 0.0;           // sum_j n_j ln(mean y^2 on seg j) + penalty * #jumps
};

// Exact minimizer over all segmentations of
//   sum_j n_j ln(mean_{i in seg j} y_i^2) + penalty * (#segments - 1),
// amplitudes set to the per-segment RMS. O(n^2).
Partition optimal_partition(std::span<const double> y, double penalty);

// Same criterion with the number of jumps fixed. O(jump_count * n^2).
Partition partition_k_jumps(std::span<const double> y, std::size_t jump_count);

// Penalty per jump equivalent to the regularized sequence objective at
// weight lambda: (n/(n-1)) * (lambda + eta_reg(lambda, q0, b)/b).
double segmentation_penalty_main(double lambda, double q0, int b,
                                 std::size_t n);

// Variant with the offset replaced by 1/b: (n/(n-1)) * (lambda + 1/b).
double segmentation_penalty_v2(double lambda, int b, std::size_t n);

// Piecewise objective for a continuous-amplitude estimate:
// (1/n) sum_i fid(u_i, y_i) + (lambda + eta_reg/b) * #jumps(u) / (n-1).
double markov_objective(std::span<const double> u, std::span<const double> y,
                        double lambda, double q0, int b);

// Closed-form threshold interval for the memoryless source: the set of
// ratios r = |y|/x_m mapped to x_m is [sqrt(s_lo), sqrt(s_hi)] where s_lo,
// s_hi solve s - ln s = 1 + lambda. lambda is the full indicator penalty.
std::pair<double, double> interval_lambda(double lambda);

// Memoryless MAP estimate: x_m when |y|/x_m falls in interval_lambda(lambda),
// else |y|.
std::vector<double> memoryless_despeckle(std::span<const double> y,
                                         double x_m, double lambda);

}  // namespace bdqmap
