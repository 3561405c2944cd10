#include "bdqmap/baselines.hpp"

#include <algorithm>
#include <cmath>

#include "bdqmap/errors.hpp"

namespace bdqmap {

int default_window(double q0) {
  if (!(q0 > 0.0 && q0 <= 1.0))
    throw ConfigError("default_window: q0 must lie in (0, 1]");
  const double w = 1.0 / (2.0 * q0);
  const long long half = std::llround((w - 1.0) / 2.0);
  return (int)std::max(1LL, 2 * half + 1);
}

void FilterConfig::validate() const {
  if (window < 1 || window % 2 == 0)
    throw ConfigError("filter: window must be a positive odd integer");
  if (!(c_w > 0.0)) throw ConfigError("filter: c_w must be > 0");
  if (!(damping > 0.0)) throw ConfigError("filter: damping must be > 0");
  if (!(tv_weight >= 0.0)) throw ConfigError("filter: tv_weight must be >= 0");
  if (tv_iters < 1) throw ConfigError("filter: tv_iters must be >= 1");
}

std::vector<double> amplitude(std::span<const double> y) {
  std::vector<double> a(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) a[i] = std::fabs(y[i]);
  return a;
}

namespace {

void check_window(std::size_t n, int window) {
  if (n == 0) throw ConfigError("filter: empty signal");
  if (window < 1 || window % 2 == 0)
    throw ConfigError("filter: window must be a positive odd integer");
  if ((std::size_t)window > n)
    throw ConfigError("filter: window exceeds signal length");
}

// truncated centered-window first and second moments via prefix sums
struct LocalStats {
  std::vector<double> p1, p2;
  int half;

  LocalStats(std::span<const double> a, int window)
      : p1(a.size() + 1, 0.0), p2(a.size() + 1, 0.0), half(window / 2) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      p1[i + 1] = p1[i] + a[i];
      p2[i + 1] = p2[i] + a[i] * a[i];
    }
  }
  void at(std::size_t i, std::size_t n, double& mean, double& var) const {
    const std::size_t lo = i >= (std::size_t)half ? i - (std::size_t)half : 0;
    const std::size_t hi = std::min(n, i + (std::size_t)half + 1);
    const double cnt = (double)(hi - lo);
    mean = (p1[hi] - p1[lo]) / cnt;
    var = std::max(0.0, (p2[hi] - p2[lo]) / cnt - mean * mean);
  }
};

}  // namespace

std::vector<double> boxcar(std::span<const double> a, int window) {
  check_window(a.size(), window);
  const LocalStats stats(a, window);
  std::vector<double> out(a.size());
  double mean, var;
  for (std::size_t i = 0; i < a.size(); ++i) {
    stats.at(i, a.size(), mean, var);
    out[i] = mean;
  }
  return out;
}

std::vector<double> lee(std::span<const double> a, int window, double c_w) {
  check_window(a.size(), window);
  if (!(c_w > 0.0)) throw ConfigError("lee: c_w must be > 0");
  const LocalStats stats(a, window);
  std::vector<double> out(a.size());
  double mean, var;
  for (std::size_t i = 0; i < a.size(); ++i) {
    stats.at(i, a.size(), mean, var);
    double g = 0.0;
    if (var > 0.0 && mean > 0.0)
      g = std::max(0.0, 1.0 - c_w * c_w * mean * mean / var);
    out[i] = mean + g * (a[i] - mean);
  }
  return out;
}

std::vector<double> kuan(std::span<const double> a, int window, double c_w) {
  check_window(a.size(), window);
  if (!(c_w > 0.0)) throw ConfigError("kuan: c_w must be > 0");
  const LocalStats stats(a, window);
  std::vector<double> out(a.size());
  double mean, var;
  for (std::size_t i = 0; i < a.size(); ++i) {
    stats.at(i, a.size(), mean, var);
    double g = 0.0;
    if (var > 0.0 && mean > 0.0)
      g = std::max(0.0, 1.0 - c_w * c_w * mean * mean / var) /
          (1.0 + c_w * c_w);
    out[i] = mean + g * (a[i] - mean);
  }
  return out;
}

std::vector<double> frost(std::span<const double> a, int window,
                          double damping, double c_w) {
  check_window(a.size(), window);
  if (!(damping > 0.0)) throw ConfigError("frost: damping must be > 0");
  if (!(c_w > 0.0)) throw ConfigError("frost: c_w must be > 0");
  const std::size_t n = a.size();
  const int half = window / 2;
  const LocalStats stats(a, window);
  std::vector<double> out(n);
  double mean, var;
  for (std::size_t i = 0; i < n; ++i) {
    stats.at(i, n, mean, var);
    double rho = 0.0;  // per-offset decay exp(-damping (c_a/c_w)^2)
    if (mean > 0.0)
      rho = std::exp(-damping * (var / (mean * mean)) / (c_w * c_w));
    else
      rho = 1.0;
    double num = a[i];
    double den = 1.0;
    double power = 1.0;
    for (int d = 1; d <= half; ++d) {
      power *= rho;
      if (power == 0.0) break;
      if (i >= (std::size_t)d) {
        num += power * a[i - (std::size_t)d];
        den += power;
      }
      if (i + (std::size_t)d < n) {
        num += power * a[i + (std::size_t)d];
        den += power;
      }
    }
    out[i] = num / den;
  }
  return out;
}

std::vector<double> enhanced(BaseFilter base, std::span<const double> a,
                             int window, double c_w) {
  check_window(a.size(), window);
  if (!(c_w > 0.0)) throw ConfigError("enhanced: c_w must be > 0");
  const std::vector<double> base_out =
      base == BaseFilter::Lee ? lee(a, window, c_w) : kuan(a, window, c_w);
  const double point_threshold = std::sqrt(3.0) * c_w;
  const LocalStats stats(a, window);
  std::vector<double> out(a.size());
  double mean, var;
  for (std::size_t i = 0; i < a.size(); ++i) {
    stats.at(i, a.size(), mean, var);
    const double c_a = mean > 0.0 ? std::sqrt(var) / mean : 0.0;
    if (c_a < c_w)
      out[i] = mean;
    else if (c_a >= point_threshold)
      out[i] = a[i];
    else
      out[i] = base_out[i];
  }
  return out;
}

// taut-string total variation: running segment candidates (vmin, vmax) with
// accumulated tensions (umin, umax); commits a segment when a tension bound
// becomes unsatisfiable
std::vector<double> tv_denoise_1d(std::span<const double> z, double weight) {
  const std::size_t n = z.size();
  if (n == 0) throw ConfigError("tv_denoise_1d: empty signal");
  if (!(weight >= 0.0) || !std::isfinite(weight))
    throw ConfigError("tv_denoise_1d: weight must be >= 0 and finite");
  std::vector<double> x(z.begin(), z.end());
  if (weight == 0.0 || n == 1) return x;

  const double lam = weight;
  std::size_t k = 0, k0 = 0, km = 0, kp = 0;
  double vmin = z[0] - lam, vmax = z[0] + lam;
  double umin = lam, umax = -lam;
  for (;;) {
    while (k == n - 1) {
      if (umin < 0.0) {  // the lower string must jump down at km
        do {
          x[k0] = vmin;
          ++k0;
        } while (k0 <= km);
        if (k0 > n - 1) return x;
        km = k = k0;
        vmin = z[k];
        umin = lam;
        umax = vmin + lam - vmax;
      } else if (umax > 0.0) {  // the upper string must jump up at kp
        do {
          x[k0] = vmax;
          ++k0;
        } while (k0 <= kp);
        if (k0 > n - 1) return x;
        kp = k = k0;
        vmax = z[k];
        umax = -lam;
        umin = vmax - lam - vmin;
      } else {  // both tensions settled: the rest is one segment
        vmin += umin / (double)(k - k0 + 1);
        do {
          x[k0] = vmin;
          ++k0;
        } while (k0 <= k);
        return x;
      }
    }
    if (z[k + 1] + umin < vmin - lam) {  // forced jump down
      do {
        x[k0] = vmin;
        ++k0;
      } while (k0 <= km);
      km = kp = k = k0;
      vmin = z[k];
      vmax = vmin + 2.0 * lam;
      umin = lam;
      umax = -lam;
    } else if (z[k + 1] + umax > vmax + lam) {  // forced jump up
      do {
        x[k0] = vmax;
        ++k0;
      } while (k0 <= kp);
      km = kp = k = k0;
      vmax = z[k];
      vmin = vmax - 2.0 * lam;
      umin = lam;
      umax = -lam;
    } else {
      ++k;
      umin += z[k] - vmin;
      umax += z[k] - vmax;
      if (umin >= lam) {
        vmin += (umin - lam) / (double)(k - k0 + 1);
        umin = lam;
        km = k;
      }
      if (umax <= -lam) {
        vmax += (umax + lam) / (double)(k - k0 + 1);
        umax = -lam;
        kp = k;
      }
    }
  }
}

std::vector<double> tv_log(std::span<const double> y, double tv_weight,
                           int tv_iters) {
  if (tv_iters < 1) throw ConfigError("tv_log: tv_iters must be >= 1");
  std::vector<double> z(y.size());
  for (std::size_t i = 0; i < y.size(); ++i)
    z[i] = 0.5 * std::log(y[i] * y[i] + 1e-12);
  std::vector<double> denoised = tv_denoise_1d(z, tv_weight);
  for (double& v : denoised) v = std::exp(v);
  return denoised;
}

}  // namespace bdqmap
