#include <catch2/catch.hpp>

#include <stdexcept>

#include "relaysim/dmt_curves.hpp"

using namespace relaysim;

TEST_CASE("2x2 mimo tradeoff breakpoints") {
  CHECK(mimo_dmt(2, 2, 0.0) == 4.0);
  CHECK(mimo_dmt(2, 2, 1.0) == 1.0);
  CHECK(mimo_dmt(2, 2, 2.0) == 0.0);
  CHECK(mimo_dmt(2, 2, 0.5) == Approx(2.5));
  CHECK(mimo_dmt(1, 2, 0.0) == 2.0);
  CHECK(mimo_dmt(1, 2, 1.0) == 0.0);
  CHECK_THROWS_AS(mimo_dmt(2, 2, -0.1), std::domain_error);
  CHECK_THROWS_AS(mimo_dmt(2, 2, 2.1), std::domain_error);
  CHECK_THROWS_AS(mimo_dmt_curve(0, 2), std::invalid_argument);
}

TEST_CASE("network upper bound") {
  CHECK(upper_bound_dmt(0.0) == 4.0);
  CHECK(upper_bound_dmt(1.0) == 0.0);
  CHECK(upper_bound_dmt(1.5) == 0.0);
  CHECK(upper_bound_dmt(0.25) == Approx(3.0));
  CHECK_THROWS_AS(upper_bound_dmt(-0.5), std::domain_error);
}

TEST_CASE("space-time coding tradeoff") {
  CHECK(stc_dmt(0.0) == 6.0);
  CHECK(stc_dmt(0.5) == Approx(3.0));
  CHECK(stc_dmt(1.0) == Approx(1.0));
  CHECK(stc_dmt(1.5) == Approx(0.0));
  CHECK_THROWS_AS(stc_dmt(1.6), std::domain_error);
  CHECK_THROWS_AS(stc_dmt(-0.1), std::domain_error);

  // continuity where the pieces meet
  CHECK(6.0 - 6.0 * 0.5 == 5.0 - 4.0 * 0.5);
  CHECK(5.0 - 4.0 * 1.0 == 3.0 - 2.0 * 1.0);
}

TEST_CASE("tradeoff relations at zero multiplexing") {
  CHECK(mimo_dmt(2, 2, 0.0) == upper_bound_dmt(0.0));
  // assuming correct relay decoding, the stc curve may exceed the general bound
  CHECK(stc_dmt(0.0) > upper_bound_dmt(0.0));
}

TEST_CASE("curve evaluation clamps beyond maximal multiplexing") {
  const DmtCurve curve = stc_dmt_curve();
  CHECK(curve.value(2.0) == 0.0);
  CHECK(curve.value(0.75) == Approx(2.0));
  CHECK_THROWS_AS(curve.value(-0.25), std::domain_error);
  REQUIRE(curve.breakpoints.size() == 4);
  CHECK(curve.max_r() == Approx(1.5));
}

TEST_CASE("outage bound transform") {
  CHECK(outage_lower_bound(0.0) == 0.0);
  CHECK(outage_lower_bound(1.0) == 1.0);
  CHECK(outage_lower_bound(0.1) == Approx(0.19));
  CHECK_THROWS_AS(outage_lower_bound(-0.01), std::domain_error);
  CHECK_THROWS_AS(outage_lower_bound(1.01), std::domain_error);

  double previous = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double p = k / 100.0;
    const double mapped = outage_lower_bound(p);
    CHECK(mapped >= p);
    CHECK(mapped > previous);
    CHECK(mapped <= 1.0);
    previous = mapped;
  }
}
