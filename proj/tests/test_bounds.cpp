#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "bdqmap/bounds.hpp"
#include "bdqmap/errors.hpp"
#include "bdqmap/metrics.hpp"
#include "doctest.h"

using namespace bdqmap;

TEST_CASE("bound constants under both spellings") {
  const double root = std::sqrt(2.0 / std::numbers::pi);
  CHECK(bound_c1(BoundConvention::Theorem) ==
        doctest::Approx(-1.3427922626138974).epsilon(1e-15));
  CHECK(bound_c1(BoundConvention::Proof) ==
        doctest::Approx(0.4296615882916186).epsilon(1e-15));
  CHECK(bound_c1(BoundConvention::Proof) - bound_c1(BoundConvention::Theorem) ==
        doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-15));
  CHECK(bound_c2() == doctest::Approx(-0.22754614909448397).epsilon(1e-15));
  CHECK(root == doctest::Approx(0.7978845608028654).epsilon(1e-15));
}

TEST_CASE("segment error profile f(T)") {
  CHECK(f_T(3) == doctest::Approx(0.028618740700780465).epsilon(1e-13));
  CHECK(f_T(4) == doctest::Approx(0.14006251767681942).epsilon(1e-13));
  CHECK(f_T(5) == doctest::Approx(0.17779987358136393).epsilon(1e-13));
  CHECK(f_T(10) == doctest::Approx(0.22401864096051646).epsilon(1e-13));
  CHECK(f_T(100) == doctest::Approx(0.24797009076013492).epsilon(1e-13));
  CHECK(f_T(10000) == doctest::Approx(0.24998020335839097).epsilon(1e-13));
  CHECK_THROWS_AS(f_T(2), NumericError);
}

TEST_CASE("f(T) approaches 1/4 like C/T") {
  for (std::int64_t T = 10; T <= 10000; T = T < 100 ? T + 1 : T * 2) {
    CHECK(std::abs(f_T(T) - 0.25) <= 0.26 / (double)T);
  }
}

TEST_CASE("expected f(T) over geometric segment lengths") {
  CHECK(expected_f_T(0.1) == doctest::Approx(0.15762091536314104).epsilon(1e-10));
  CHECK(expected_f_T(0.01) == doctest::Approx(0.23541863903312449).epsilon(1e-10));
  CHECK(expected_f_T(0.001) == doctest::Approx(0.24807220830630519).epsilon(1e-10));
  CHECK(expected_f_T(0.999) * 1e8 ==
        doctest::Approx(2.8730222233844).epsilon(1e-10));
  // tightening the tolerance must not move the value materially
  CHECK(expected_f_T(0.05, 1e-10) ==
        doctest::Approx(expected_f_T(0.05, 1e-13)).epsilon(1e-9));
  CHECK_THROWS_AS(expected_f_T(0.0), NumericError);
  CHECK_THROWS_AS(expected_f_T(0.5, -1.0), ConfigError);
}

TEST_CASE("geometric segment-count tail") {
  CHECK(geometric_tail(100, 0.1, 2.0) ==
        doctest::Approx(0.34140113637814896).epsilon(1e-13));
  CHECK(geometric_tail(1000, 0.01, 20.0) * 1e8 ==
        doctest::Approx(4.2012610006084).epsilon(1e-10));
  // monotone decreasing in the shift and in N
  CHECK(geometric_tail(100, 0.1, 3.0) < geometric_tail(100, 0.1, 2.0));
  CHECK(geometric_tail(200, 0.1, 2.0) < geometric_tail(100, 0.1, 2.0));
  CHECK_THROWS_AS(geometric_tail(0, 0.1, 1.0), ConfigError);
  CHECK_THROWS_AS(geometric_tail(10, 0.1, 0.0), NumericError);
  CHECK_THROWS_AS(geometric_tail(10, 1.5, 1.0), NumericError);
}

TEST_CASE("upsilon correction term") {
  CHECK(upsilon(0.01, 1.0, 100000, 0.17782794100389228) ==
        doctest::Approx(0.44369449956964185).epsilon(1e-12));
  // at huge n both tail exponents vanish: upsilon -> 2 eps / (1 - eps)
  const double eps = 0.05;
  CHECK(upsilon(0.01, 1.0, 10000000000ull, eps) ==
        doctest::Approx(2.0 * eps / (1.0 - eps)).epsilon(1e-9));
  // x_M scales quadratically
  CHECK(upsilon(0.01, 2.0, 100000, 0.1) ==
        doctest::Approx(4.0 * upsilon(0.01, 1.0, 100000, 0.1)).epsilon(1e-13));
  CHECK(upsilon(0.01, 0.0, 100000, 0.1) == 0.0);
  CHECK_THROWS_AS(upsilon(0.01, 1.0, 100000, 0.0), NumericError);
  CHECK_THROWS_AS(upsilon(0.01, 1.0, 100000, 1.0), NumericError);
  CHECK_THROWS_AS(upsilon(0.001, 1.0, 1000, 0.5), NumericError);
  CHECK_THROWS_AS(upsilon(0.01, -1.0, 100000, 0.1), ConfigError);
}

TEST_CASE("corollary bound report at the pinned operating point") {
  const BoundReport proof =
      corollary_bound(0.01, 1.0 / 3.0, 1.0, 100000, BoundConvention::Proof);
  CHECK(proof.epsilon == doctest::Approx(0.17782794100389228).epsilon(1e-15));
  CHECK(proof.t1 == doctest::Approx(15.038232795242141).epsilon(1e-12));
  CHECK(proof.t2 == doctest::Approx(21.654501216545012).epsilon(1e-12));
  CHECK(proof.upsilon == doctest::Approx(0.44369449956964185).epsilon(1e-12));
  CHECK(proof.main_term == doctest::Approx(0.0015979500020075415).epsilon(1e-12));
  CHECK(proof.lower_bound_mse ==
        doctest::Approx(-0.4420965495676343).epsilon(1e-12));

  const BoundReport theorem =
      corollary_bound(0.01, 1.0 / 3.0, 1.0, 100000, BoundConvention::Theorem);
  CHECK(theorem.main_term ==
        doctest::Approx(0.0014797864119471738).epsilon(1e-12));
  CHECK(theorem.lower_bound_mse ==
        doctest::Approx(-0.44221471315769467).epsilon(1e-12));
  // same correction term, different main-term constant
  CHECK(theorem.upsilon == doctest::Approx(proof.upsilon).epsilon(1e-15));

  CHECK_THROWS_AS(corollary_bound(0.001, 1.0 / 3.0, 1.0, 1000), NumericError);
}

TEST_CASE("mse_lower_bound composes its pieces") {
  BoundParams params;
  params.q0 = 0.05;
  params.eta2 = 0.4;
  params.x_M = 1.0;
  params.n = 50000;
  params.epsilon = 0.2;
  params.convention = BoundConvention::Proof;
  const BoundReport report = mse_lower_bound(params);
  const double expect_main =
      2.0 * 0.05 * 0.4 *
      (0.05 * bound_c1(BoundConvention::Proof) +
       0.05 * 0.05 * bound_c2() + expected_f_T(0.05));
  CHECK(report.main_term == doctest::Approx(expect_main).epsilon(1e-14));
  CHECK(report.upsilon ==
        doctest::Approx(upsilon(0.05, 1.0, 50000, 0.2)).epsilon(1e-14));
  CHECK(report.lower_bound_mse ==
        doctest::Approx(report.main_term - report.upsilon).epsilon(1e-14));
  params.eta2 = 0.0;
  CHECK_THROWS_AS(mse_lower_bound(params), ConfigError);
}

TEST_CASE("genie segment error closed form") {
  CHECK(genie_segment_mse(5) == doctest::Approx(0.09693427610371081).epsilon(1e-12));
  CHECK(genie_segment_mse(20) == doctest::Approx(0.024834142347687312).epsilon(1e-12));
  CHECK(genie_segment_mse(100) == doctest::Approx(0.0049936720897898256).epsilon(1e-12));
  // a length-1 segment is the raw amplitude |y|
  CHECK(genie_segment_mse(1) ==
        doctest::Approx(speckled_mse_analytic(1.0)).epsilon(1e-14));
  // shrinks like 1/(2T)
  CHECK(genie_segment_mse(10000) == doctest::Approx(1.0 / 20000.0).epsilon(1e-3));
  CHECK_THROWS_AS(genie_segment_mse(0), NumericError);
}

TEST_CASE("bound report CSV is parseable and faithful") {
  CHECK(bound_report_csv_header() ==
        "q0,eta2,x_M,n,epsilon,c1,c2,expected_fT,main_term,t1,t2,upsilon,"
        "lower_bound_mse");
  const BoundReport report =
      corollary_bound(0.01, 1.0 / 3.0, 1.0, 100000, BoundConvention::Proof);
  const std::string row = bound_report_csv_row(report);
  std::vector<std::string> fields;
  std::stringstream ss(row);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  REQUIRE(fields.size() == 13);
  CHECK(std::stod(fields[0]) == report.q0);
  CHECK(std::stoull(fields[3]) == report.n);
  CHECK(std::stod(fields[4]) == report.epsilon);
  CHECK(std::stod(fields[8]) == report.main_term);
  CHECK(std::stod(fields[11]) == report.upsilon);
  CHECK(std::stod(fields[12]) == report.lower_bound_mse);
  // %.17g text reload is exact, so two renders of the same report are equal
  CHECK(bound_report_csv_row(report) == row);
}
