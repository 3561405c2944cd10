#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bdqmap/baselines.hpp"
#include "bdqmap/bench.hpp"
#include "bdqmap/bounds.hpp"
#include "bdqmap/despeckler.hpp"
#include "bdqmap/errors.hpp"
#include "bdqmap/metrics.hpp"
#include "bdqmap/quantization.hpp"
#include "bdqmap/rng.hpp"
#include "bdqmap/signal_io.hpp"
#include "bdqmap/sources.hpp"
#include "bdqmap/weights.hpp"

namespace {

std::string indexed_name(const char* stem, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s_%04zu.csv", stem, i);
  return buf;
}

bdqmap::BoundConvention parse_convention(const std::string& name) {
  if (name == "theorem") return bdqmap::BoundConvention::Theorem;
  if (name == "proof") return bdqmap::BoundConvention::Proof;
  throw bdqmap::ConfigError("convention must be 'theorem' or 'proof'");
}

struct GenArgs {
  double q0 = 0.01;
  std::size_t n = 100000;
  std::size_t signals = 1;
  std::uint64_t seed = 1;
  std::string model = "markov";
  double x_m = 0.0;
  double x_M = 1.0;
  std::string out = "out";
};

void run_gen(const GenArgs& args) {
  const std::filesystem::path dir(args.out);
  std::filesystem::create_directories(dir);
  for (std::size_t i = 0; i < args.signals; ++i) {
    if (args.model == "markov") {
      const auto model = bdqmap::make_markov(args.q0, args.x_m, args.x_M);
      const auto pair = bdqmap::sample_speckled_markov(
          model, args.n, bdqmap::derive_seed(args.seed, {100, i}));
      bdqmap::write_signal_csv(dir / indexed_name("signal", i),
                               pair.clean.values, pair.noisy);
      bdqmap::write_segments_csv(dir / indexed_name("segments", i),
                                 pair.clean);
    } else if (args.model == "memoryless") {
      const auto model = bdqmap::make_spike_slab(args.q0, args.x_m, args.x_M);
      const auto seed = bdqmap::derive_seed(args.seed, {100, i});
      const auto x =
          bdqmap::sample_memoryless(model, args.n, bdqmap::derive_seed(seed, {1}));
      const auto y = bdqmap::apply_speckle(x, bdqmap::derive_seed(seed, {2}));
      bdqmap::write_signal_csv(dir / indexed_name("signal", i), x, y);
    } else {
      throw bdqmap::ConfigError("model must be 'markov' or 'memoryless'");
    }
  }
  std::cout << "wrote " << args.signals << " signal(s) to " << dir.string()
            << "\n";
}

struct TrainArgs {
  double q0 = 0.01;
  int b = 3;
  int k = 2;
  std::uint64_t samples = 10000000;
  std::uint64_t seed = 1;
  double x_m = 0.0;
  double x_M = 1.0;
  bool analytic = false;
  std::string out = "weights.json";
};

void run_train(const TrainArgs& args) {
  const auto model = bdqmap::make_markov(args.q0, args.x_m, args.x_M);
  const bdqmap::WeightTable table =
      args.analytic
          ? bdqmap::analytic_weights_markov(model, args.b)
          : bdqmap::train_weights(model, args.k, args.b, args.samples,
                                  args.seed);
  bdqmap::save_weights(table, args.out);
  std::cout << "wrote " << table.entries.size() << " pattern weights to "
            << args.out << "\n";
}

struct DespeckleArgs {
  std::string in;
  std::string out = "despeckled.csv";
  std::string method = "bdqmap";
  std::string weights;
  std::string segments;
  double lambda = 1.0;
  double q0 = 0.01;
  int window = 0;
  double damping = 2.0;
  double tv_weight = 1.0;
  double x_m = 0.1;
};

void run_despeckle(const DespeckleArgs& args) {
  const bdqmap::SignalColumns cols = bdqmap::read_signal_csv(args.in);
  const std::vector<double>& y = cols.y.empty() ? cols.x : cols.y;
  if (y.empty()) throw bdqmap::ConfigError("input has no samples");
  const int window =
      args.window > 0 ? args.window : bdqmap::default_window(args.q0);

  std::vector<double> xhat;
  if (args.method == "bdqmap" || args.method == "bdqmap_b") {
    if (args.weights.empty())
      throw bdqmap::ConfigError("method needs --weights");
    const auto table = std::make_shared<const bdqmap::WeightTable>(
        bdqmap::load_weights(args.weights));
    bdqmap::DespecklerConfig cfg{args.lambda, table->b, table->k, table};
    if (args.method == "bdqmap_b") {
      const auto sol = bdqmap::bdqmap_b_viterbi(y, cfg);
      xhat.resize(sol.levels.size());
      for (std::size_t i = 0; i < xhat.size(); ++i)
        xhat[i] = bdqmap::representative(sol.levels[i], table->b);
    } else {
      xhat = bdqmap::bdqmap_refined(y, cfg);
    }
  } else if (args.method == "memoryless") {
    xhat = bdqmap::memoryless_despeckle(y, args.x_m, args.lambda);
  } else if (args.method == "genie") {
    if (args.segments.empty())
      throw bdqmap::ConfigError("method genie needs --segments");
    const auto jumps = bdqmap::read_segments_csv(args.segments);
    xhat = bdqmap::genie_ml(y, jumps);
  } else {
    const std::vector<double> a = bdqmap::amplitude(y);
    if (args.method == "boxcar")
      xhat = bdqmap::boxcar(a, window);
    else if (args.method == "lee")
      xhat = bdqmap::lee(a, window);
    else if (args.method == "kuan")
      xhat = bdqmap::kuan(a, window);
    else if (args.method == "frost")
      xhat = bdqmap::frost(a, window, args.damping);
    else if (args.method == "enhanced-lee")
      xhat = bdqmap::enhanced(bdqmap::BaseFilter::Lee, a, window);
    else if (args.method == "enhanced-kuan")
      xhat = bdqmap::enhanced(bdqmap::BaseFilter::Kuan, a, window);
    else if (args.method == "tv")
      xhat = bdqmap::tv_log(y, args.tv_weight);
    else
      throw bdqmap::ConfigError("unknown method '" + args.method + "'");
  }

  bdqmap::write_signal_csv(args.out, xhat, {});
  if (!cols.x.empty() && !cols.y.empty()) {
    const double m = bdqmap::mse(xhat, cols.x);
    std::cout << "mse " << bdqmap::fmt_g17(m) << " psnr "
              << bdqmap::fmt_g17(bdqmap::psnr(m, 1.0)) << " dB (max 1)\n";
  }
  std::cout << "wrote " << args.out << "\n";
}

struct BenchArgs {
  std::string scale;
  std::vector<double> q0;
  std::size_t n = 0;
  std::size_t signals = 0;
  std::size_t validation = 0;
  std::vector<int> bits;
  int k = 0;
  std::vector<double> lambdas;
  std::uint64_t train_samples = 0;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string convention;
  std::string out = "out";
};

bdqmap::ExperimentConfig build_config(const BenchArgs& args) {
  bdqmap::ExperimentConfig cfg;
  if (!args.scale.empty()) bdqmap::apply_scale(cfg, args.scale);
  if (!args.q0.empty()) cfg.q0_grid = args.q0;
  if (args.n > 0) cfg.n = args.n;
  if (args.signals > 0) cfg.num_signals = args.signals;
  if (args.validation > 0) cfg.num_validation = args.validation;
  if (!args.bits.empty()) cfg.bits = args.bits;
  if (args.k > 0) cfg.k = args.k;
  if (!args.lambdas.empty()) cfg.lambda_grid = args.lambdas;
  if (args.train_samples > 0) cfg.train_samples = args.train_samples;
  if (args.seed_given) cfg.seed = args.seed;
  if (!args.convention.empty())
    cfg.convention = parse_convention(args.convention);
  cfg.output_dir = args.out;
  cfg.validate();
  return cfg;
}

void add_bench_options(CLI::App* sub, BenchArgs& args) {
  sub->add_option("--scale", args.scale, "preset: desk or paper")
      ->check(CLI::IsMember({"desk", "paper"}));
  sub->add_option("--q0", args.q0, "jump probabilities");
  sub->add_option("--n", args.n, "samples per signal");
  sub->add_option("--signals", args.signals, "test signals per q0");
  sub->add_option("--validation", args.validation, "validation signals");
  sub->add_option("--b", args.bits, "quantizer bit depths");
  sub->add_option("--k", args.k, "context length");
  sub->add_option("--lambda", args.lambdas, "lambda grid override");
  sub->add_option("--train-samples", args.train_samples,
                  "weight-training sample count");
  sub->add_option("--seed", args.seed, "base seed")
      ->each([&](const std::string&) { args.seed_given = true; });
  sub->add_option("--convention", args.convention,
                  "lower-bound constant convention")
      ->check(CLI::IsMember({"theorem", "proof"}));
  sub->add_option("--out", args.out, "output directory");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"despeckling benchmark for 1-D piecewise-constant sources"};
  app.set_config("--config", "", "read options from an INI file");
  app.require_subcommand(1);

  GenArgs gen_args;
  CLI::App* gen = app.add_subcommand("gen", "sample speckled signals");
  gen->add_option("--q0", gen_args.q0, "jump probability");
  gen->add_option("--n", gen_args.n, "samples per signal");
  gen->add_option("--signals", gen_args.signals, "number of signals");
  gen->add_option("--seed", gen_args.seed, "base seed");
  gen->add_option("--model", gen_args.model, "markov or memoryless");
  gen->add_option("--xm", gen_args.x_m, "amplitude lower edge");
  gen->add_option("--xM", gen_args.x_M, "amplitude upper edge");
  gen->add_option("--out", gen_args.out, "output directory");
  gen->callback([&] { run_gen(gen_args); });

  TrainArgs train_args;
  CLI::App* train =
      app.add_subcommand("train-weights", "estimate pattern weights");
  train->add_option("--q0", train_args.q0, "jump probability");
  train->add_option("--b", train_args.b, "quantizer bit depth");
  train->add_option("--k", train_args.k, "context length");
  train->add_option("--samples", train_args.samples, "training sample count");
  train->add_option("--seed", train_args.seed, "RNG seed");
  train->add_option("--xm", train_args.x_m, "amplitude lower edge");
  train->add_option("--xM", train_args.x_M, "amplitude upper edge");
  train->add_flag("--analytic", train_args.analytic,
                  "exact pair law instead of sampling (k = 2)");
  train->add_option("--out", train_args.out, "weights file path");
  train->callback([&] { run_train(train_args); });

  DespeckleArgs despeckle_args;
  CLI::App* despeckle =
      app.add_subcommand("despeckle", "despeckle one signal CSV");
  despeckle->add_option("--in", despeckle_args.in, "input signal CSV")
      ->required();
  despeckle->add_option("--out", despeckle_args.out, "output CSV");
  despeckle->add_option(
      "--method", despeckle_args.method,
      "bdqmap, bdqmap_b, memoryless, genie, boxcar, lee, kuan, frost, "
      "enhanced-lee, enhanced-kuan, tv");
  despeckle->add_option("--weights", despeckle_args.weights, "weights file");
  despeckle->add_option("--segments", despeckle_args.segments,
                        "true segment sidecar (genie)");
  despeckle->add_option("--lambda", despeckle_args.lambda,
                        "regularization weight");
  despeckle->add_option("--q0", despeckle_args.q0,
                        "jump probability (sets default window)");
  despeckle->add_option("--window", despeckle_args.window,
                        "filter window (odd), overrides --q0");
  despeckle->add_option("--damping", despeckle_args.damping, "Frost damping");
  despeckle->add_option("--tv-weight", despeckle_args.tv_weight, "TV weight");
  despeckle->add_option("--xm", despeckle_args.x_m,
                        "spike amplitude (memoryless)");
  despeckle->callback([&] { run_despeckle(despeckle_args); });

  CLI::App* bench = app.add_subcommand("bench", "benchmark suites");
  bench->require_subcommand(1);
  BenchArgs table_args, sweep_args, bound_args;
  CLI::App* table = bench->add_subcommand("table1", "PSNR comparison table");
  add_bench_options(table, table_args);
  table->callback([&] {
    std::cout << "wrote " << bdqmap::run_table1(build_config(table_args))
              << "\n";
  });
  CLI::App* sweep =
      bench->add_subcommand("lambda-sweep", "PSNR across the lambda grid");
  add_bench_options(sweep, sweep_args);
  sweep->callback([&] {
    std::cout << "wrote " << bdqmap::run_lambda_sweep(build_config(sweep_args))
              << "\n";
  });
  CLI::App* bound = bench->add_subcommand(
      "bound-curve", "MSE lower bound vs empirical estimators");
  add_bench_options(bound, bound_args);
  bound->callback([&] {
    std::cout << "wrote " << bdqmap::run_bound_curve(build_config(bound_args))
              << "\n";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const bdqmap::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const bdqmap::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 3;
  } catch (const bdqmap::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
