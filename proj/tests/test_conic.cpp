#include <doctest.h>

#include "lndkit/conic.hpp"

using namespace lndkit;

TEST_SUITE("conic") {

TEST_CASE("points m_lambda carry a square root of t") {
  auto k = Field::prime_field(2)->with_ratfunc("t");
  auto c = conic_setup(k, "t");
  for (const char* lam : {"0", "1", "t", "t + 1", "1/t"}) {
    auto p = conic_point_lambda(c, lam);
    CAPTURE(p.label);
    CHECK(p.ideal_proper);
    CHECK(p.membership);
    CHECK(p.contains_sqrt_a);
    CHECK(p.in_locus);
    CHECK(p.field->extension_degree() == 4);
  }
}

TEST_CASE("rational points lie outside") {
  auto k = Field::prime_field(2)->with_ratfunc("t");
  auto c = conic_setup(k, "t");
  for (const char* s : {"0", "1", "t", "t^2 + 1"}) {
    auto p = conic_point_slope(c, s);
    CAPTURE(p.label);
    CHECK(p.membership);
    CHECK_FALSE(p.contains_sqrt_a);
    CHECK_FALSE(p.in_locus);
  }
  // slope 0 gives (1/t, 0): t*(1/t)^2 + 1/t = 2/t = 0
  auto p0 = conic_point_slope(c, "0");
  CHECK(p0.coords[0] == parse_field_elem("1/t", k));
  CHECK(p0.coords[1].is_zero());
}

TEST_CASE("square parameter puts rational points inside") {
  auto k = Field::prime_field(2)->with_ratfunc("t");
  auto c = conic_setup(k, "t^2");
  CHECK(conic_point_slope(c, "1").in_locus);
  CHECK(conic_point_slope(c, "0").in_locus);
  CHECK_THROWS_AS(conic_point_slope(c, "t"), Error);
}

TEST_CASE("only characteristic 2") {
  CHECK_THROWS_AS(conic_setup(Field::rationals(), "2"), Error);
}

}  // TEST_SUITE
