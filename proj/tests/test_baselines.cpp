#include <algorithm>
#include <cmath>
#include <vector>

#include "bdqmap/baselines.hpp"
#include "bdqmap/errors.hpp"
#include "bdqmap/rng.hpp"
#include "bdqmap/sources.hpp"
#include "doctest.h"

using namespace bdqmap;

TEST_CASE("speckle cv constant") {
  // sqrt(Var|W| / E^2|W|) for W ~ N(0,1): sqrt(pi/2 - 1)
  CHECK(kSpeckleCv ==
        doctest::Approx(std::sqrt(std::asin(1.0) - 1.0)).epsilon(1e-15));
}

TEST_CASE("default window is the nearest odd to 1/(2 q0)") {
  CHECK(default_window(0.1) == 5);
  CHECK(default_window(0.01) == 51);
  CHECK(default_window(0.001) == 501);
  CHECK(default_window(0.3) == 1);   // 1/(2*0.3) = 1.67 rounds to 1
  CHECK(default_window(0.2) == 3);   // 2.5 has tied neighbors; ties round up
  CHECK(default_window(1.0) == 1);
  CHECK_THROWS_AS(default_window(0.0), ConfigError);
  CHECK_THROWS_AS(default_window(1.5), ConfigError);
}

TEST_CASE("amplitude takes magnitudes") {
  const std::vector<double> y = {-1.5, 0.0, 2.0};
  const std::vector<double> expect = {1.5, 0.0, 2.0};
  CHECK(amplitude(y) == expect);
}

TEST_CASE("boxcar averages with edge truncation") {
  const std::vector<double> a = {1.0, 2.0, 4.0};
  const std::vector<double> got = boxcar(a, 3);
  CHECK(got[0] == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(got[1] == doctest::Approx(7.0 / 3.0).epsilon(1e-15));
  CHECK(got[2] == doctest::Approx(3.0).epsilon(1e-15));
  const std::vector<double> wide = boxcar(a, 1);
  CHECK(wide == a);
  CHECK_THROWS_AS(boxcar(a, 2), ConfigError);
  CHECK_THROWS_AS(boxcar(a, 5), ConfigError);
  const std::vector<double> empty;
  CHECK_THROWS_AS(boxcar(empty, 1), ConfigError);
}

TEST_CASE("adaptive filters interpolate between mean and observation") {
  Rng rng = make_rng(31);
  std::vector<double> a(400);
  for (double& v : a) v = std::abs(standard_normal(rng)) * 0.8 + 0.1;
  for (int window : {5, 9}) {
    const std::vector<double> mean = boxcar(a, window);
    for (const auto& filtered : {lee(a, window), kuan(a, window)}) {
      for (std::size_t i = 0; i < a.size(); ++i) {
        const double lo = std::min(mean[i], a[i]) - 1e-12;
        const double hi = std::max(mean[i], a[i]) + 1e-12;
        CHECK(filtered[i] >= lo);
        CHECK(filtered[i] <= hi);
      }
    }
  }
}

TEST_CASE("constant input is a fixed point of the adaptive filters") {
  const std::vector<double> a(64, 0.7);
  for (const auto& filtered :
       {lee(a, 5), kuan(a, 5), frost(a, 5), enhanced(BaseFilter::Lee, a, 5),
        enhanced(BaseFilter::Kuan, a, 5)}) {
    for (double v : filtered) CHECK(v == doctest::Approx(0.7).epsilon(1e-12));
  }
}

TEST_CASE("enhanced filter picks mean, base, or passthrough per sample") {
  Rng rng = make_rng(37);
  const SourceModel model = make_markov(0.05, 0.0, 1.0);
  const SpeckledPair pair = sample_speckled_markov(model, 500, 41);
  const std::vector<double> a = amplitude(pair.noisy);
  const int window = 7;
  const std::vector<double> mean = boxcar(a, window);
  const std::vector<double> base = lee(a, window);
  const std::vector<double> got = enhanced(BaseFilter::Lee, a, window);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const bool is_mean = got[i] == doctest::Approx(mean[i]).epsilon(1e-12);
    const bool is_base = got[i] == doctest::Approx(base[i]).epsilon(1e-12);
    const bool is_input = got[i] == doctest::Approx(a[i]).epsilon(1e-12);
    CHECK((is_mean || is_base || is_input));
  }
}

TEST_CASE("frost weights are a normalized kernel") {
  // window 1 and huge damping both collapse to the identity
  Rng rng = make_rng(43);
  std::vector<double> a(50);
  for (double& v : a) v = std::abs(standard_normal(rng)) + 0.05;
  CHECK(frost(a, 1) == a);
  const std::vector<double> damped = frost(a, 5, 1e9);
  for (std::size_t i = 0; i < a.size(); ++i)
    CHECK(damped[i] == doctest::Approx(a[i]).epsilon(1e-9));
  // damping -> 0 approaches the boxcar mean
  const std::vector<double> loose = frost(a, 5, 1e-12);
  const std::vector<double> mean = boxcar(a, 5);
  for (std::size_t i = 0; i < a.size(); ++i)
    CHECK(loose[i] == doctest::Approx(mean[i]).epsilon(1e-6));
  CHECK_THROWS_AS(frost(a, 5, 0.0), ConfigError);
}

TEST_CASE("taut-string total variation denoising") {
  const std::vector<double> z = {0.0, 0.0, -1.0, -1.5};
  const std::vector<double> got = tv_denoise_1d(z, 1.0);
  REQUIRE(got.size() == 4);
  CHECK(got[0] == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(got[1] == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(got[2] == doctest::Approx(-0.75).epsilon(1e-12));
  CHECK(got[3] == doctest::Approx(-0.75).epsilon(1e-12));

  Rng rng = make_rng(47);
  std::vector<double> data(80);
  for (double& v : data) v = standard_normal(rng);
  CHECK(tv_denoise_1d(data, 0.0) == data);
  const double total = [&] {
    double s = 0.0;
    for (double v : data) s += v;
    return s / (double)data.size();
  }();
  const std::vector<double> merged = tv_denoise_1d(data, 1e6);
  for (double v : merged) CHECK(v == doctest::Approx(total).epsilon(1e-9));
}

TEST_CASE("tv solution satisfies the dual certificate") {
  Rng rng = make_rng(53);
  for (double weight : {0.3, 1.0, 4.0}) {
    std::vector<double> z(200);
    for (double& v : z) v = standard_normal(rng);
    const std::vector<double> x = tv_denoise_1d(z, weight);
    // s_i = s_{i-1} + (z_i - x_i) must stay within [-w, w], end at 0, and
    // touch the active bound with the sign of each jump
    double s = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
      s += z[i] - x[i];
      if (i + 1 < z.size()) {
        CHECK(s <= weight + 1e-9);
        CHECK(s >= -weight - 1e-9);
        if (x[i + 1] > x[i] + 1e-12) CHECK(s == doctest::Approx(-weight).epsilon(1e-9));
        if (x[i + 1] < x[i] - 1e-12) CHECK(s == doctest::Approx(weight).epsilon(1e-9));
      } else {
        CHECK(s == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("homomorphic tv operates on log amplitudes") {
  Rng rng = make_rng(59);
  std::vector<double> y(60);
  for (double& v : y) v = standard_normal(rng) * 0.5;
  // weight 0 reduces to |y| up to the 1e-12 stabilizer
  const std::vector<double> identity = tv_log(y, 0.0);
  for (std::size_t i = 0; i < y.size(); ++i)
    CHECK(identity[i] ==
          doctest::Approx(std::sqrt(y[i] * y[i] + 1e-12)).epsilon(1e-12));
  const std::vector<double> smoothed = tv_log(y, 2.0);
  for (double v : smoothed) CHECK(v > 0.0);
}

TEST_CASE("filter config validation") {
  FilterConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.window = 4;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.window = -3;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.window = 3;
  cfg.c_w = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.c_w = kSpeckleCv;
  cfg.damping = -1.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.damping = 2.0;
  cfg.tv_weight = -0.5;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.tv_weight = 1.0;
  cfg.tv_iters = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}
