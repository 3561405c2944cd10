#include "bdqmap/sources.hpp"

#include <cmath>
#include <string>

#include "bdqmap/errors.hpp"
#include "bdqmap/rng.hpp"

namespace bdqmap {

void SourceModel::validate() const {
  if (!(q0 >= 0.0 && q0 <= 1.0))
    throw ConfigError("source: q0 must lie in [0, 1]");
  if (!(x_m >= 0.0)) throw ConfigError("source: x_m must be >= 0");
  if (!(x_m < x_M)) throw ConfigError("source: x_m < x_M required");
  if (!std::isfinite(x_M)) throw ConfigError("source: range must be finite");
}

SourceModel make_markov(double q0, double x_m, double x_M) {
  SourceModel model{SourceKind::PiecewiseMarkov, q0, x_m, x_M};
  model.validate();
  return model;
}

SourceModel make_spike_slab(double q0, double x_m, double x_M) {
  SourceModel model{SourceKind::MemorylessSpikeSlab, q0, x_m, x_M};
  model.validate();
  if (!(x_m > 0.0))
    throw ConfigError("spike-slab source needs x_m > 0 (the spike amplitude)");
  return model;
}

double second_moment(const SourceModel& model) {
  model.validate();
  const double uniform_m2 =
      (model.x_M * model.x_M * model.x_M - model.x_m * model.x_m * model.x_m) /
      (3.0 * (model.x_M - model.x_m));
  if (model.kind == SourceKind::PiecewiseMarkov) return uniform_m2;
  return (1.0 - model.q0) * model.x_m * model.x_m + model.q0 * uniform_m2;
}

PiecewiseSignal piecewise_from_values(std::vector<double> values) {
  PiecewiseSignal sig;
  sig.values = std::move(values);
  std::size_t seg_start = 0;
  for (std::size_t i = 1; i < sig.values.size(); ++i) {
    if (sig.values[i] != sig.values[i - 1]) {
      sig.jump_indices.push_back(i);
      sig.segment_lengths.push_back(i - seg_start);
      seg_start = i;
    }
  }
  if (!sig.values.empty())
    sig.segment_lengths.push_back(sig.values.size() - seg_start);
  return sig;
}

PiecewiseSignal sample_piecewise_markov(const SourceModel& model,
                                        std::size_t n, std::uint64_t seed) {
  model.validate();
  if (model.kind != SourceKind::PiecewiseMarkov)
    throw ConfigError("sample_piecewise_markov: model kind mismatch");
  if (n == 0) throw ConfigError("sample_piecewise_markov: n must be >= 1");
  Rng rng = make_rng(seed);
  std::vector<double> values(n);
  values[0] = uniform_in(rng, model.x_m, model.x_M);
  for (std::size_t i = 1; i < n; ++i) {
    if (uniform_unit(rng) < model.q0)
      values[i] = uniform_in(rng, model.x_m, model.x_M);
    else
      values[i] = values[i - 1];
  }
  return piecewise_from_values(std::move(values));
}

std::vector<double> sample_memoryless(const SourceModel& model, std::size_t n,
                                      std::uint64_t seed) {
  model.validate();
  if (model.kind != SourceKind::MemorylessSpikeSlab)
    throw ConfigError("sample_memoryless: model kind mismatch");
  if (n == 0) throw ConfigError("sample_memoryless: n must be >= 1");
  Rng rng = make_rng(seed);
  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (uniform_unit(rng) < model.q0)
      values[i] = uniform_in(rng, model.x_m, model.x_M);
    else
      values[i] = model.x_m;
  }
  return values;
}

std::vector<double> apply_speckle(std::span<const double> x,
                                  std::uint64_t seed) {
  Rng rng = make_rng(seed);
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] * standard_normal(rng);
  return y;
}

SpeckledPair sample_speckled_markov(const SourceModel& model, std::size_t n,
                                    std::uint64_t seed) {
  SpeckledPair pair;
  pair.seed = seed;
  pair.clean = sample_piecewise_markov(model, n, derive_seed(seed, {1}));
  pair.noisy = apply_speckle(pair.clean.values, derive_seed(seed, {2}));
  return pair;
}

}  // namespace bdqmap
