#pragma once

#include <span>

namespace bdqmap {

double mse(std::span<const double> a, std::span<const double> b);

// 10 log10(max_val^2 / mse_value); +inf when mse_value == 0.
double psnr(double mse_value, double max_val);

// Closed-form MSE of the raw speckled amplitude |y| against x for a source
// with second moment eta2: eta2 * (2 - 2 sqrt(2/pi)).
double speckled_mse_analytic(double eta2);

}  // namespace bdqmap
