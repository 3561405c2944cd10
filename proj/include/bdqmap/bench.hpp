#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "bdqmap/bounds.hpp"
#include "bdqmap/sources.hpp"

namespace bdqmap {

// One result line of a benchmark CSV. b and lambda are meaningful only for
// the quantized despecklers and stay empty in the CSV otherwise. Wall times
// go to a separate timings.csv so result files are byte-identical across
// reruns of the same configuration.
struct MetricRow {
  std::string method;
  double q0 = 0.0;
  int b = 0;            // 0 = not applicable
  double lambda = 0.0;
  bool has_lambda = false;
  double mse = 0.0;
  double psnr = 0.0;
};

struct ExperimentConfig {
  double x_m = 0.0;
  double x_M = 1.0;
  std::vector<double> q0_grid = {0.1, 0.01, 0.001};
  std::size_t n = 100000;
  std::size_t num_signals = 100;
  std::size_t num_validation = 10;
  std::uint64_t train_samples = 10000000;
  std::vector<int> bits = {2, 3};
  std::vector<double> lambda_grid;  // empty = 16 log-spaced in [1e-2, 1e2]
  int k = 2;
  std::uint64_t seed = 20250901;
  BoundConvention convention = BoundConvention::Proof;
  std::filesystem::path output_dir = "out";

  void validate() const;
};

// "paper": n=1e5, 100 test signals, 1e7 training samples (table-scale runs).
// "desk":  n=1e4, 20 test signals, 1e6 training samples (minutes, not hours).
void apply_scale(ExperimentConfig& cfg, const std::string& scale);

std::vector<double> default_lambda_grid();

std::string metric_csv_header();
std::string metric_csv_row(const MetricRow& row);

// Despeckles every configured method on fresh test sets and writes
// table1.csv (+ timings.csv). Returns the path of table1.csv.
std::filesystem::path run_table1(const ExperimentConfig& cfg);

// PSNR of the quantized despecklers across the lambda grid (0 prepended) on
// the validation sets; marks the selected lambda. Writes lambda_sweep.csv.
std::filesystem::path run_lambda_sweep(const ExperimentConfig& cfg);

// Lower-bound reports (both conventions) next to empirical genie-aided and
// quantized-despeckler MSE per q0. Writes bound_curve.csv.
std::filesystem::path run_bound_curve(const ExperimentConfig& cfg);

}  // namespace bdqmap
