#include "bdqmap/bounds.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "bdqmap/errors.hpp"
#include "bdqmap/signal_io.hpp"

namespace bdqmap {

namespace {

// global bound on T |f(T) - 1/4|, attained at T = 3
constexpr double kFDeviation = 0.67;

void check_q0_open(double q0, const char* who) {
  if (!(q0 > 0.0 && q0 < 1.0))
    throw NumericError(std::string(who) + ": q0 must lie in (0, 1)");
}

struct UpsilonParts {
  double value = 0.0;
  double t1 = 0.0;
  double t2 = 0.0;
};

// exponent of the segment-count tail: N (q0 t - ln(1 + q0 t))
double tail_exponent(double n_floor, double q0, double t) {
  const double z = q0 * t;
  return n_floor * (z - std::log1p(z));
}

UpsilonParts upsilon_parts(double q0, double x_M, std::uint64_t n,
                           double epsilon) {
  check_q0_open(q0, "upsilon");
  if (!(x_M >= 0.0) || !std::isfinite(x_M))
    throw ConfigError("upsilon: x_M must be >= 0 and finite");
  if (n < 1) throw ConfigError("upsilon: n must be >= 1");
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw NumericError("upsilon: epsilon must lie in (0, 1)");
  const double nq0 = (double)n * q0;
  const double f1 = std::floor(nq0 * (1.0 + epsilon));
  const double f2 = std::floor(nq0 * (1.0 - epsilon));
  if (f1 < 1.0 || f2 < 1.0)
    throw NumericError("upsilon: floor(n q0 (1 -+ epsilon)) must be >= 1");
  UpsilonParts parts;
  parts.t1 = 1.0 / q0 - (double)n / f1;
  parts.t2 = (double)n / f2 - 1.0 / q0;
  if (parts.t1 < 0.0 || parts.t2 < 0.0)
    throw NumericError("upsilon: tail shifts t1, t2 must be >= 0");
  parts.value = 2.0 * x_M * x_M *
                (epsilon / (1.0 - epsilon) +
                 nq0 * std::exp(-tail_exponent(f1, q0, parts.t1)) +
                 nq0 * std::exp(-tail_exponent(f2, q0, parts.t2)));
  return parts;
}

}  // namespace

double bound_c1(BoundConvention convention) {
  const double root = std::sqrt(2.0 / std::numbers::pi);
  const double pi_root = std::sqrt(std::numbers::pi);
  return convention == BoundConvention::Theorem ? 3.0 - root - 2.0 * pi_root
                                                : 3.0 - root - pi_root;
}

double bound_c2() { return std::sqrt(std::numbers::pi) - 2.0; }

double f_T(std::int64_t T) {
  if (T < 3) throw NumericError("f_T: T must be >= 3");
  const double t = (double)T;
  const double log_prod = -0.5 + 0.5 * t * std::log1p(-1.0 / t) -
                          0.5 * (t - 1.0) * std::log1p(-2.0 / t);
  return t * (1.0 - std::exp(log_prod));
}

double expected_f_T(double q0, double series_tol) {
  check_q0_open(q0, "expected_f_T");
  if (!(series_tol > 0.0))
    throw ConfigError("expected_f_T: series_tol must be > 0");
  // P(T = t) = (1-q0)^(t-1) q0; |f| <= 1/4 + kFDeviation/t caps the tail
  double sum = 0.0;
  const double hold = 1.0 - q0;
  double pmf = hold * hold * q0;  // t = 3
  double survivor = hold * hold * hold;  // P(T > 3)
  for (std::int64_t t = 3;; ++t) {
    sum += f_T(t) * pmf;
    if ((0.25 + kFDeviation / (double)(t + 1)) * survivor <= series_tol) break;
    if (t > 200000000)
      throw NumericError("expected_f_T: series did not converge (q0 too small)");
    pmf *= hold;
    survivor *= hold;
  }
  return sum;
}

double geometric_tail(std::uint64_t N, double q0, double t) {
  check_q0_open(q0, "geometric_tail");
  if (N < 1) throw ConfigError("geometric_tail: N must be >= 1");
  if (!(t > 0.0) || !std::isfinite(t))
    throw NumericError("geometric_tail: t must be > 0 and finite");
  return 2.0 * std::exp(-tail_exponent((double)N, q0, t));
}

double upsilon(double q0, double x_M, std::uint64_t n, double epsilon) {
  return upsilon_parts(q0, x_M, n, epsilon).value;
}

BoundReport mse_lower_bound(const BoundParams& params) {
  check_q0_open(params.q0, "mse_lower_bound");
  if (!(params.eta2 > 0.0) || !std::isfinite(params.eta2))
    throw ConfigError("mse_lower_bound: eta2 must be > 0 and finite");
  BoundReport report;
  report.q0 = params.q0;
  report.eta2 = params.eta2;
  report.x_M = params.x_M;
  report.n = params.n;
  report.epsilon = params.epsilon;
  report.c1 = bound_c1(params.convention);
  report.c2 = bound_c2();
  report.expected_fT = expected_f_T(params.q0, params.series_tol);
  report.main_term = 2.0 * params.q0 * params.eta2 *
                     (params.q0 * report.c1 +
                      params.q0 * params.q0 * report.c2 + report.expected_fT);
  const UpsilonParts parts =
      upsilon_parts(params.q0, params.x_M, params.n, params.epsilon);
  report.t1 = parts.t1;
  report.t2 = parts.t2;
  report.upsilon = parts.value;
  report.lower_bound_mse = report.main_term - report.upsilon;
  return report;
}

BoundReport corollary_bound(double q0, double eta2, double x_M,
                            std::uint64_t n, BoundConvention convention,
                            double series_tol) {
  check_q0_open(q0, "corollary_bound");
  if ((double)n * q0 <= 1.0)
    throw NumericError("corollary_bound: n q0 must exceed 1");
  BoundParams params;
  params.q0 = q0;
  params.eta2 = eta2;
  params.x_M = x_M;
  params.n = n;
  params.epsilon = std::pow((double)n * q0, -0.25);
  params.convention = convention;
  params.series_tol = series_tol;
  return mse_lower_bound(params);
}

double genie_segment_mse(std::int64_t T) {
  if (T < 1) throw NumericError("genie_segment_mse: T must be >= 1");
  const double t = (double)T;
  const double ratio =
      std::exp(std::lgamma(0.5 * (t + 1.0)) - std::lgamma(0.5 * t));
  return 2.0 * (1.0 - std::sqrt(2.0 / t) * ratio);
}

std::string bound_report_csv_header() {
  return "q0,eta2,x_M,n,epsilon,c1,c2,expected_fT,main_term,t1,t2,upsilon,"
         "lower_bound_mse";
}

std::string bound_report_csv_row(const BoundReport& r) {
  std::string row;
  row += fmt_g17(r.q0);
  row += ',';
  row += fmt_g17(r.eta2);
  row += ',';
  row += fmt_g17(r.x_M);
  row += ',';
  row += std::to_string(r.n);
  row += ',';
  row += fmt_g17(r.epsilon);
  row += ',';
  row += fmt_g17(r.c1);
  row += ',';
  row += fmt_g17(r.c2);
  row += ',';
  row += fmt_g17(r.expected_fT);
  row += ',';
  row += fmt_g17(r.main_term);
  row += ',';
  row += fmt_g17(r.t1);
  row += ',';
  row += fmt_g17(r.t2);
  row += ',';
  row += fmt_g17(r.upsilon);
  row += ',';
  row += fmt_g17(r.lower_bound_mse);
  return row;
}

}  // namespace bdqmap
