#pragma once

#include <span>
#include <vector>

namespace bdqmap {

// Coefficient of variation of |N(0,1)|, the fully-developed-speckle constant
// the classical filters compare local statistics against.
inline constexpr double kSpeckleCv = 0.75551063976286703;

// 1/(2 q0) rounded to the nearest odd integer (ties round up), floor 1.
int default_window(double q0);

struct FilterConfig {
  int window = 3;
  double c_w = kSpeckleCv;
  double damping = 2.0;       // Frost
  double tv_weight = 1.0;     // TV
  int tv_iters = 100;         // TV iteration budget (exact solver ignores it)

  void validate() const;
};

// |y|, the amplitude image the classical filters operate on.
std::vector<double> amplitude(std::span<const double> y);

// Windows are centered and truncated at the edges.
std::vector<double> boxcar(std::span<const double> a, int window);

std::vector<double> lee(std::span<const double> a, int window,
                        double c_w = kSpeckleCv);

std::vector<double> kuan(std::span<const double> a, int window,
                         double c_w = kSpeckleCv);

std::vector<double> frost(std::span<const double> a, int window,
                          double damping = 2.0, double c_w = kSpeckleCv);

enum class BaseFilter { Lee, Kuan };

// Three-way classification per sample: homogeneous (c_a < c_w) -> local mean,
// point target (c_a >= sqrt(3) c_w) -> untouched, else the base filter.
std::vector<double> enhanced(BaseFilter base, std::span<const double> a,
                             int window, double c_w = kSpeckleCv);

// Exact 1-D total-variation denoising (taut string), penalty weight * TV.
std::vector<double> tv_denoise_1d(std::span<const double> z, double weight);

// Homomorphic TV: z = 0.5 ln(y^2 + 1e-12), denoise, exponentiate back.
// No bias renormalization is applied.
std::vector<double> tv_log(std::span<const double> y, double tv_weight,
                           int tv_iters = 100);

}  // namespace bdqmap
