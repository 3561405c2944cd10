#pragma once

#include <cstdint>
#include <string>

namespace bdqmap {

// Two published spellings of the main-term constant c1 disagree; both are
// available. Proof is the derivation-consistent one and the default.
//   Theorem: c1 = 3 - sqrt(2/pi) - 2 sqrt(pi)
//   Proof:   c1 = 3 - sqrt(2/pi) -   sqrt(pi)
// c2 = sqrt(pi) - 2 in both.
enum class BoundConvention { Theorem, Proof };

double bound_c1(BoundConvention convention);
double bound_c2();

// Expected squared error of the ML constant on a segment of length T viewed
// through its Stirling-type sandwich:
//   f(T) = T (1 - e^{-1/2} (1 - 1/T)^{T/2} (1 - 2/T)^{-(T-1)/2}),  T >= 3.
// f(T) -> 1/4 as T grows.
double f_T(std::int64_t T);

// E[f(T) 1{T>=3}] for T ~ Geometric(q0) on {1,2,...}, summed until the
// remaining tail is below series_tol.
double expected_f_T(double q0, double series_tol = 1e-10);

// Large-deviation tail for a sum of N iid Geometric(q0) segment lengths:
// P(sum > N/q0 + N t) <= 2 exp(-N (q0 t + ln(1/(1 + q0 t)))), t > 0.
double geometric_tail(std::uint64_t N, double q0, double t);

// Correction term subtracted from the main term; epsilon sets the window
// n q0 (1 -+ epsilon) of segment counts treated as typical.
double upsilon(double q0, double x_M, std::uint64_t n, double epsilon);

struct BoundReport {
  double q0 = 0.0;
  double eta2 = 0.0;
  double x_M = 0.0;
  std::uint64_t n = 0;
  double epsilon = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double expected_fT = 0.0;
  double main_term = 0.0;
  double t1 = 0.0;
  double t2 = 0.0;
  double upsilon = 0.0;
  double lower_bound_mse = 0.0;  // main_term - upsilon; may be negative
};

struct BoundParams {
  double q0 = 0.01;
  double eta2 = 1.0 / 3.0;
  double x_M = 1.0;
  std::uint64_t n = 100000;
  double epsilon = 0.1;
  BoundConvention convention = BoundConvention::Proof;
  double series_tol = 1e-10;
};

// MSE lower bound for estimating the piecewise-constant source from speckled
// observations: 2 q0 eta2 (q0 c1 + q0^2 c2 + E[f(T) 1{T>=3}]) - upsilon.
BoundReport mse_lower_bound(const BoundParams& params);

// Same with epsilon = (n q0)^(-1/4); requires n q0 > 1.
BoundReport corollary_bound(double q0, double eta2, double x_M,
                            std::uint64_t n,
                            BoundConvention convention = BoundConvention::Proof,
                            double series_tol = 1e-10);

// Exact per-sample MSE of the ML constant on a segment of length T with unit
// amplitude: 2 (1 - sqrt(2/T) Gamma((T+1)/2) / Gamma(T/2)).
double genie_segment_mse(std::int64_t T);

std::string bound_report_csv_header();
std::string bound_report_csv_row(const BoundReport& report);

}  // namespace bdqmap
