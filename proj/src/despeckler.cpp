#include "bdqmap/despeckler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "bdqmap/errors.hpp"
#include "bdqmap/quantization.hpp"

namespace bdqmap {

double fidelity_cost(double u, double y) {
  if (!(u > 0.0) || !std::isfinite(u))
    throw NumericError("fidelity_cost: amplitude must be positive and finite");
  if (!std::isfinite(y)) throw NumericError("fidelity_cost: y not finite");
  const double r = y / u;
  return std::log(u * u) + r * r;
}

void DespecklerConfig::validate() const {
  if (!weights) throw ConfigError("despeckler: weights table required");
  weights->validate();
  if (k < 1 || k > 2) throw ConfigError("despeckler: k must be 1 or 2");
  if (k != weights->k) throw ConfigError("despeckler: k != weights.k");
  if (b != weights->b) throw ConfigError("despeckler: b != weights.b");
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw ConfigError("despeckler: lambda must be >= 0 and finite");
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::size_t ipow(std::size_t base, int exp) {
  std::size_t out = 1;
  for (int j = 0; j < exp; ++j) out *= base;
  return out;
}

}  // namespace

TrellisSolution bdqmap_b_viterbi(std::span<const double> y,
                                 const DespecklerConfig& cfg) {
  cfg.validate();
  const std::size_t n = y.size();
  const int k = cfg.k;
  if (n < (std::size_t)k)
    throw ConfigError("bdqmap_b_viterbi: need at least k samples");

  const auto& levels = cfg.weights->alphabet;
  const std::size_t a_size = levels.size();
  const std::size_t n_prefix = ipow(a_size, k - 1);
  const std::size_t n_states = n_prefix * a_size;
  if (n_states > ((std::size_t)1 << 20))
    throw ConfigError("bdqmap_b_viterbi: state space too large");

  std::vector<double> rep(a_size);
  for (std::size_t a = 0; a < a_size; ++a)
    rep[a] = representative(levels[a], cfg.b);

  // state s encodes the window (u_{i-k+1},...,u_i), oldest digit first;
  // predecessors of s are exactly the states q * n_prefix + (s / a_size)
  const double scale = cfg.lambda / (double)cfg.b;
  std::vector<double> wscaled(n_states);
  std::vector<double> pattern((std::size_t)k);
  for (std::size_t s = 0; s < n_states; ++s) {
    std::size_t flat = s;
    for (int j = k - 1; j >= 0; --j) {
      pattern[(std::size_t)j] = levels[flat % a_size];
      flat /= a_size;
    }
    wscaled[s] = scale * cfg.weights->weight(pattern);
  }

  std::vector<double> cost(n_states);
  for (std::size_t s = 0; s < n_states; ++s) {
    double c = wscaled[s];
    std::size_t flat = s;
    for (int j = k - 1; j >= 0; --j) {
      c += fidelity_cost(rep[flat % a_size], y[(std::size_t)j]);
      flat /= a_size;
    }
    cost[s] = c;
  }

  std::vector<std::uint16_t> backptr((n - (std::size_t)k) * n_prefix);
  std::vector<double> best_pred(n_prefix);
  std::vector<double> fcur(a_size);
  std::vector<double> next(n_states);
  for (std::size_t i = (std::size_t)k; i < n; ++i) {
    std::uint16_t* bp = backptr.data() + (i - (std::size_t)k) * n_prefix;
    for (std::size_t r = 0; r < n_prefix; ++r) {
      double m = kInf;
      std::uint16_t arg = 0;
      for (std::size_t q = 0; q < a_size; ++q) {
        const double c = cost[q * n_prefix + r];
        if (c < m) {
          m = c;
          arg = (std::uint16_t)q;
        }
      }
      best_pred[r] = m;
      bp[r] = arg;
    }
    for (std::size_t a = 0; a < a_size; ++a)
      fcur[a] = fidelity_cost(rep[a], y[i]);
    for (std::size_t s = 0; s < n_states; ++s)
      next[s] = best_pred[s / a_size] + fcur[s % a_size] + wscaled[s];
    cost.swap(next);
  }

  std::size_t s = 0;
  for (std::size_t cand = 1; cand < n_states; ++cand)
    if (cost[cand] < cost[s]) s = cand;

  TrellisSolution sol;
  sol.total_cost = cost[s] / (double)n;
  sol.levels.resize(n);
  for (std::size_t i = n; i-- > (std::size_t)k;) {
    sol.levels[i] = levels[s % a_size];
    const std::size_t r = s / a_size;
    s = (std::size_t)backptr[(i - (std::size_t)k) * n_prefix + r] * n_prefix +
        r;
  }
  std::size_t flat = s;
  for (int j = k - 1; j >= 0; --j) {
    sol.levels[(std::size_t)j] = levels[flat % a_size];
    flat /= a_size;
  }
  sol.jumps = detect_jumps(sol.levels);
  return sol;
}

double trellis_objective(std::span<const double> levels,
                         std::span<const double> y,
                         const DespecklerConfig& cfg) {
  cfg.validate();
  if (levels.size() != y.size())
    throw ConfigError("trellis_objective: length mismatch");
  const std::size_t n = y.size();
  const int k = cfg.k;
  if (n < (std::size_t)k)
    throw ConfigError("trellis_objective: need at least k samples");
  const auto& ab = cfg.weights->alphabet;
  for (double level : levels)
    if (!std::binary_search(ab.begin(), ab.end(), level))
      throw ConfigError("trellis_objective: level outside alphabet");

  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    total += fidelity_cost(representative(levels[i], cfg.b), y[i]);
  const double scale = cfg.lambda / (double)cfg.b;
  for (std::size_t i = (std::size_t)k - 1; i < n; ++i) {
    std::span<const double> window =
        levels.subspan(i - (std::size_t)k + 1, (std::size_t)k);
    total += scale * cfg.weights->weight(window);
  }
  return total / (double)n;
}

std::vector<std::size_t> detect_jumps(std::span<const double> levels) {
  std::vector<std::size_t> jumps;
  for (std::size_t i = 1; i < levels.size(); ++i)
    if (levels[i] != levels[i - 1]) jumps.push_back(i);
  return jumps;
}

std::vector<double> segment_ml(std::span<const double> y,
                               std::span<const std::size_t> boundaries) {
  const std::size_t n = y.size();
  if (n == 0) throw ConfigError("segment_ml: empty signal");
  std::size_t prev = 0;
  for (std::size_t bpos : boundaries) {
    if (bpos <= prev || bpos >= n)
      throw ConfigError("segment_ml: boundaries must be strictly increasing within (0, n)");
    prev = bpos;
  }
  std::vector<double> out(n);
  std::size_t start = 0;
  for (std::size_t j = 0; j <= boundaries.size(); ++j) {
    const std::size_t end = j < boundaries.size() ? boundaries[j] : n;
    double s2 = 0.0;
    for (std::size_t i = start; i < end; ++i) s2 += y[i] * y[i];
    const double amp = std::sqrt(s2 / (double)(end - start));
    for (std::size_t i = start; i < end; ++i) out[i] = amp;
    start = end;
  }
  return out;
}

std::vector<double> bdqmap_refined(std::span<const double> y,
                                   const DespecklerConfig& cfg) {
  TrellisSolution sol = bdqmap_b_viterbi(y, cfg);
  return segment_ml(y, sol.jumps);
}

std::vector<double> genie_ml(std::span<const double> y,
                             std::span<const std::size_t> true_jumps) {
  return segment_ml(y, true_jumps);
}

namespace {

// sum_{i in [lo, hi)} y_i^2 via prefix sums; ln of the segment mean
struct SegmentCost {
  std::vector<double> prefix2;

  explicit SegmentCost(std::span<const double> y) : prefix2(y.size() + 1, 0.0) {
    for (std::size_t i = 0; i < y.size(); ++i)
      prefix2[i + 1] = prefix2[i] + y[i] * y[i];
  }
  double operator()(std::size_t lo, std::size_t hi) const {
    const double len = (double)(hi - lo);
    return len * std::log((prefix2[hi] - prefix2[lo]) / len);
  }
  double rms(std::size_t lo, std::size_t hi) const {
    return std::sqrt((prefix2[hi] - prefix2[lo]) / (double)(hi - lo));
  }
};

Partition partition_from_cuts(std::span<const double> y,
                              const SegmentCost& seg,
                              const std::vector<std::size_t>& cuts,
                              double objective) {
  Partition part;
  part.objective = objective;
  part.jumps.assign(cuts.begin() + 1, cuts.end());
  part.amplitudes.resize(y.size());
  std::size_t start = 0;
  for (std::size_t j = 1; j <= part.jumps.size() + 1; ++j) {
    const std::size_t end =
        j <= part.jumps.size() ? part.jumps[j - 1] : y.size();
    const double amp = seg.rms(start, end);
    for (std::size_t i = start; i < end; ++i) part.amplitudes[i] = amp;
    start = end;
  }
  return part;
}

}  // namespace

Partition optimal_partition(std::span<const double> y, double penalty) {
  const std::size_t n = y.size();
  if (n == 0) throw ConfigError("optimal_partition: empty signal");
  if (!(penalty >= 0.0) || !std::isfinite(penalty))
    throw ConfigError("optimal_partition: penalty must be >= 0 and finite");
  const SegmentCost seg{y};
  std::vector<double> best(n + 1, kInf);
  std::vector<std::size_t> arg(n + 1, 0);
  best[0] = 0.0;
  for (std::size_t j = 1; j <= n; ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      const double c = best[i] + (i > 0 ? penalty : 0.0) + seg(i, j);
      if (c < best[j]) {
        best[j] = c;
        arg[j] = i;
      }
    }
  }
  std::vector<std::size_t> cuts;
  for (std::size_t j = n; j > 0; j = arg[j]) cuts.push_back(arg[j]);
  std::reverse(cuts.begin(), cuts.end());
  return partition_from_cuts(y, seg, cuts, best[n]);
}

Partition partition_k_jumps(std::span<const double> y,
                            std::size_t jump_count) {
  const std::size_t n = y.size();
  if (n == 0) throw ConfigError("partition_k_jumps: empty signal");
  if (jump_count + 1 > n)
    throw ConfigError("partition_k_jumps: more segments than samples");
  const SegmentCost seg{y};
  const std::size_t m_segs = jump_count + 1;
  // d[m][j]: best cost of splitting the first j samples into m segments
  std::vector<std::vector<double>> d(m_segs + 1,
                                     std::vector<double>(n + 1, kInf));
  std::vector<std::vector<std::size_t>> arg(
      m_segs + 1, std::vector<std::size_t>(n + 1, 0));
  d[0][0] = 0.0;
  for (std::size_t m = 1; m <= m_segs; ++m) {
    for (std::size_t j = m; j + (m_segs - m) <= n; ++j) {
      for (std::size_t i = m - 1; i < j; ++i) {
        if (d[m - 1][i] == kInf) continue;
        const double c = d[m - 1][i] + seg(i, j);
        if (c < d[m][j]) {
          d[m][j] = c;
          arg[m][j] = i;
        }
      }
    }
  }
  std::vector<std::size_t> cuts(m_segs);
  std::size_t j = n;
  for (std::size_t m = m_segs; m > 0; --m) {
    cuts[m - 1] = arg[m][j];
    j = arg[m][j];
  }
  return partition_from_cuts(y, seg, cuts, d[m_segs][n]);
}

double segmentation_penalty_main(double lambda, double q0, int b,
                                 std::size_t n) {
  if (n < 2) throw ConfigError("segmentation_penalty_main: n must be >= 2");
  return (double)n / (double)(n - 1) *
         (lambda + eta_reg(lambda, q0, b) / (double)b);
}

double segmentation_penalty_v2(double lambda, int b, std::size_t n) {
  if (n < 2) throw ConfigError("segmentation_penalty_v2: n must be >= 2");
  if (b < 1) throw ConfigError("segmentation_penalty_v2: b must be >= 1");
  if (!(lambda >= 0.0))
    throw ConfigError("segmentation_penalty_v2: lambda must be >= 0");
  return (double)n / (double)(n - 1) * (lambda + 1.0 / (double)b);
}

double markov_objective(std::span<const double> u, std::span<const double> y,
                        double lambda, double q0, int b) {
  if (u.size() != y.size())
    throw ConfigError("markov_objective: length mismatch");
  const std::size_t n = y.size();
  if (n < 2) throw ConfigError("markov_objective: n must be >= 2");
  double fid = 0.0;
  for (std::size_t i = 0; i < n; ++i) fid += fidelity_cost(u[i], y[i]);
  const double jumps = (double)detect_jumps(u).size();
  return fid / (double)n +
         (lambda + eta_reg(lambda, q0, b) / (double)b) * jumps /
             (double)(n - 1);
}

std::pair<double, double> interval_lambda(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw ConfigError("interval_lambda: lambda must be >= 0 and finite");
  if (lambda == 0.0) return {1.0, 1.0};
  const double target = 1.0 + lambda;
  const auto g = [](double s) { return s - std::log(s); };
  // g decreases to 1 at s=1 then increases; bisect each branch
  double lo = 0.5;
  while (g(lo) < target) lo *= 0.5;
  double a = lo, bb = 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (a + bb);
    (g(mid) >= target ? a : bb) = mid;
  }
  const double s_lo = 0.5 * (a + bb);
  double hi = 2.0;
  while (g(hi) < target) hi *= 2.0;
  a = 1.0;
  bb = hi;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (a + bb);
    (g(mid) <= target ? a : bb) = mid;
  }
  const double s_hi = 0.5 * (a + bb);
  return {std::sqrt(s_lo), std::sqrt(s_hi)};
}

std::vector<double> memoryless_despeckle(std::span<const double> y,
                                         double x_m, double lambda) {
  if (!(x_m > 0.0) || !std::isfinite(x_m))
    throw ConfigError("memoryless_despeckle: x_m must be positive");
  const auto [r_lo, r_hi] = interval_lambda(lambda);
  std::vector<double> out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double r = std::fabs(y[i]) / x_m;
    out[i] = (r >= r_lo && r <= r_hi) ? x_m : std::fabs(y[i]);
  }
  return out;
}

}  // namespace bdqmap
