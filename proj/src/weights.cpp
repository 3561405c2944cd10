#include "bdqmap/weights.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>

#include <json.hpp>

#include "bdqmap/errors.hpp"
#include "bdqmap/quantization.hpp"
#include "bdqmap/rng.hpp"

namespace bdqmap {

namespace {

std::size_t pattern_count(std::size_t alphabet_size, int k) {
  std::size_t total = 1;
  for (int j = 0; j < k; ++j) {
    if (total > (std::size_t)1 << 26)
      throw ConfigError("weights: |alphabet|^k too large");
    total *= alphabet_size;
  }
  return total;
}

std::vector<double> pattern_from_flat(std::size_t flat, int k,
                                      const std::vector<double>& levels) {
  std::vector<double> pattern((std::size_t)k);
  for (int j = k - 1; j >= 0; --j) {
    pattern[(std::size_t)j] = levels[flat % levels.size()];
    flat /= levels.size();
  }
  return pattern;
}

}  // namespace

double WeightTable::weight(std::span<const double> pattern) const {
  if ((int)pattern.size() != k)
    throw ConfigError("weight: pattern length != k");
  auto it = entries.find(std::vector<double>(pattern.begin(), pattern.end()));
  if (it == entries.end()) return cap;
  return it->second;
}

void WeightTable::validate() const {
  if (k < 1 || k > 3) throw ConfigError("weights: k must be in [1, 3]");
  QuantizerConfig{b, x_m, x_M, false}.validate();
  if (alphabet.empty()) throw ConfigError("weights: empty alphabet");
  if (!std::is_sorted(alphabet.begin(), alphabet.end()) ||
      std::adjacent_find(alphabet.begin(), alphabet.end()) != alphabet.end())
    throw ConfigError("weights: alphabet must be strictly ascending");
  for (double level : alphabet)
    if (quantize_scalar(level, b) != level)
      throw ConfigError("weights: alphabet entry is not a b-bit level");
  if (!(cap > 0.0) || !std::isfinite(cap))
    throw ConfigError("weights: cap must be positive and finite");
  for (const auto& [pattern, w] : entries) {
    if ((int)pattern.size() != k)
      throw ConfigError("weights: entry pattern length != k");
    for (double level : pattern)
      if (!std::binary_search(alphabet.begin(), alphabet.end(), level))
        throw ConfigError("weights: entry level outside alphabet");
    if (!std::isfinite(w) || w < 0.0 || w > cap * (1.0 + 1e-12) + 1e-12)
      throw ConfigError("weights: entry weight outside [0, cap]");
  }
}

WeightTable train_weights(const SourceModel& model, int k, int b,
                          std::uint64_t n_samples, std::uint64_t seed) {
  model.validate();
  if (k < 1 || k > 3) throw ConfigError("train_weights: k must be in [1, 3]");
  if (!(model.q0 > 0.0 && model.q0 < 1.0))
    throw ConfigError("train_weights: q0 must lie in (0, 1)");

  WeightTable table;
  table.k = k;
  table.b = b;
  table.x_m = model.x_m;
  table.x_M = model.x_M;
  table.alphabet = alphabet(QuantizerConfig{b, model.x_m, model.x_M, false});
  const std::size_t a_size = table.alphabet.size();
  const std::size_t n_patterns = pattern_count(a_size, k);
  if (n_samples < 10 * (std::uint64_t)n_patterns)
    throw ConfigError("train_weights: need at least 10 * |alphabet|^k samples");

  // stream the source sample by sample; only the last k level indices matter
  Rng rng = make_rng(seed);
  std::vector<std::uint64_t> counts(n_patterns, 0);
  const std::size_t window_mod = n_patterns / a_size;  // a_size^(k-1)
  std::size_t window_flat = 0;
  double current = 0.0;
  for (std::uint64_t i = 0; i < n_samples; ++i) {
    if (model.kind == SourceKind::PiecewiseMarkov) {
      if (i == 0 || uniform_unit(rng) < model.q0)
        current = uniform_in(rng, model.x_m, model.x_M);
    } else {
      current = uniform_unit(rng) < model.q0
                    ? uniform_in(rng, model.x_m, model.x_M)
                    : model.x_m;
    }
    const std::size_t idx =
        level_index(quantize_scalar(current, b), b, model.x_m);
    window_flat = (window_flat % window_mod) * a_size + idx;
    if (i + 1 >= (std::uint64_t)k) ++counts[window_flat];
  }

  const std::uint64_t windows = n_samples - (std::uint64_t)k + 1;
  table.cap = std::log((double)n_samples) +
              (double)k * std::log((double)a_size);
  for (std::size_t flat = 0; flat < n_patterns; ++flat) {
    if (counts[flat] == 0) continue;
    const double w = -std::log((double)counts[flat] / (double)windows);
    table.entries[pattern_from_flat(flat, k, table.alphabet)] = w;
  }
  table.provenance = {"empirical", n_samples, seed, model.q0};
  table.validate();
  return table;
}

WeightTable analytic_weights_markov(const SourceModel& model, int b) {
  model.validate();
  if (model.kind != SourceKind::PiecewiseMarkov)
    throw ConfigError("analytic_weights_markov: model kind mismatch");
  if (!(model.q0 > 0.0 && model.q0 < 1.0))
    throw ConfigError("analytic_weights_markov: q0 must lie in (0, 1)");

  WeightTable table;
  table.k = 2;
  table.b = b;
  table.x_m = model.x_m;
  table.x_M = model.x_M;
  table.alphabet = alphabet(QuantizerConfig{b, model.x_m, model.x_M, false});

  const double width = std::ldexp(1.0, -b);
  std::vector<double> mass(table.alphabet.size());
  for (std::size_t j = 0; j < mass.size(); ++j) {
    const double lo = std::max(model.x_m, table.alphabet[j]);
    const double hi = std::min(model.x_M, table.alphabet[j] + width);
    mass[j] = (hi - lo) / (model.x_M - model.x_m);
  }

  double cap = 0.0;
  for (std::size_t a = 0; a < mass.size(); ++a) {
    for (std::size_t a2 = 0; a2 < mass.size(); ++a2) {
      const double p =
          mass[a] * ((1.0 - model.q0) * (a == a2 ? 1.0 : 0.0) +
                     model.q0 * mass[a2]);
      const double w = -std::log(p);
      table.entries[{table.alphabet[a], table.alphabet[a2]}] = w;
      cap = std::max(cap, w);
    }
  }
  table.cap = cap;
  table.provenance = {"analytic", 0, 0, model.q0};
  table.validate();
  return table;
}

void save_weights(const WeightTable& table,
                  const std::filesystem::path& path) {
  table.validate();
  nlohmann::json doc;
  doc["version"] = 1;
  doc["k"] = table.k;
  doc["b"] = table.b;
  doc["x_m"] = table.x_m;
  doc["x_M"] = table.x_M;
  doc["log_base"] = "e";
  doc["cap"] = table.cap;
  doc["alphabet"] = table.alphabet;
  doc["provenance"] = {{"kind", table.provenance.kind},
                       {"samples", table.provenance.samples},
                       {"seed", table.provenance.seed},
                       {"q0", table.provenance.q0}};
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& [pattern, w] : table.entries)
    entries.push_back({{"pattern", pattern}, {"weight", w}});
  doc["entries"] = std::move(entries);

  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << doc.dump(1) << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

WeightTable load_weights(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(path.string() + ": " + e.what());
  }
  try {
    if (doc.at("version").get<int>() != 1)
      throw ConfigError(path.string() + ": unsupported weights file version");
    if (doc.at("log_base").get<std::string>() != "e")
      throw ConfigError(path.string() + ": log_base must be 'e'");
    WeightTable table;
    table.k = doc.at("k").get<int>();
    table.b = doc.at("b").get<int>();
    table.x_m = doc.at("x_m").get<double>();
    table.x_M = doc.at("x_M").get<double>();
    table.cap = doc.at("cap").get<double>();
    table.alphabet = doc.at("alphabet").get<std::vector<double>>();
    const auto& prov = doc.at("provenance");
    table.provenance.kind = prov.at("kind").get<std::string>();
    table.provenance.samples = prov.at("samples").get<std::uint64_t>();
    table.provenance.seed = prov.at("seed").get<std::uint64_t>();
    table.provenance.q0 = prov.at("q0").get<double>();
    for (const auto& entry : doc.at("entries")) {
      table.entries[entry.at("pattern").get<std::vector<double>>()] =
          entry.at("weight").get<double>();
    }
    table.validate();
    return table;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": malformed weights file: " + e.what());
  }
}

double eta_reg(double lambda, double q0, int b) {
  if (!(q0 > 0.0 && q0 < 1.0))
    throw NumericError("eta_reg: q0 must lie in (0, 1)");
  if (!(lambda >= 0.0)) throw ConfigError("eta_reg: lambda must be >= 0");
  if (b < 1) throw ConfigError("eta_reg: b must be >= 1");
  return -lambda * std::log(q0) -
         std::log(1.0 - q0 + q0 * std::ldexp(1.0, -b));
}

double memoryless_gamma(double q0, int b) {
  if (!(q0 > 0.0 && q0 < 1.0))
    throw NumericError("memoryless_gamma: q0 must lie in (0, 1)");
  if (b < 1) throw ConfigError("memoryless_gamma: b must be >= 1");
  return std::log((1.0 - q0) / q0 + std::ldexp(1.0, -b)) / (double)b;
}

}  // namespace bdqmap
