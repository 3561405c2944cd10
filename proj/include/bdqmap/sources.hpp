#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace bdqmap {

enum class SourceKind { MemorylessSpikeSlab, PiecewiseMarkov };

// Amplitude source on [x_m, x_M]. For the Markov kind each sample holds the
// previous value with probability 1-q0 and otherwise redraws uniformly; for
// the memoryless kind each sample is x_m with probability 1-q0 and otherwise
// uniform. q0 = 0 and q0 = 1 are accepted as degenerate corners for sampling;
// operations that need 0 < q0 < 1 check it themselves.
struct SourceModel {
  SourceKind kind = SourceKind::PiecewiseMarkov;
  double q0 = 0.01;
  double x_m = 0.0;
  double x_M = 1.0;

  void validate() const;
};

SourceModel make_markov(double q0, double x_m, double x_M);
SourceModel make_spike_slab(double q0, double x_m, double x_M);

double second_moment(const SourceModel& model);

// Realization of the piecewise-constant source together with its segment
// structure. jump_indices[j] is the number of samples before the j-th
// boundary, so values[jump-1] != values[jump].
struct PiecewiseSignal {
  std::vector<double> values;
  std::vector<std::size_t> jump_indices;
  std::vector<std::size_t> segment_lengths;
};

PiecewiseSignal piecewise_from_values(std::vector<double> values);

PiecewiseSignal sample_piecewise_markov(const SourceModel& model,
                                        std::size_t n, std::uint64_t seed);

std::vector<double> sample_memoryless(const SourceModel& model, std::size_t n,
                                      std::uint64_t seed);

// y_i = x_i * w_i with w_i iid standard normal.
std::vector<double> apply_speckle(std::span<const double> x,
                                  std::uint64_t seed);

struct SpeckledPair {
  PiecewiseSignal clean;
  std::vector<double> noisy;
  std::uint64_t seed = 0;
};

SpeckledPair sample_speckled_markov(const SourceModel& model, std::size_t n,
                                    std::uint64_t seed);

}  // namespace bdqmap
