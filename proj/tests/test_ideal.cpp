#include <doctest.h>

#include <random>

#include "lndkit/ideal.hpp"
#include "support.hpp"

using namespace lndkit;

namespace {

struct Env {
  FieldPtr K;
  VarsPtr v;
  Poly P(const std::string& s) const { return parse_poly(s, v, K); }
  Ideal I(std::initializer_list<const char*> gens) const {
    std::vector<Poly> g;
    for (auto s : gens) g.push_back(P(s));
    return Ideal(K, v, g);
  }
};

}  // namespace

TEST_SUITE("ideal") {

TEST_CASE("small groebner bases") {
  Env e{Field::rationals(), make_vars({"x", "y"})};
  auto gb = e.I({"x"}).groebner(MonomialOrder::lex());
  REQUIRE(gb->polys.size() == 1);
  CHECK(gb->polys[0] == e.P("x"));

  Env d{Field::rationals(), make_vars({"x", "y", "z"})};
  auto q = d.I({"x*y + z^2 + 1"}).groebner();
  REQUIRE(q->polys.size() == 1);
  CHECK(q->polys[0] == d.P("x*y + z^2 + 1"));

  // S(x^2 + y^2, x*y) = y*(x^2 + y^2) - x*(x*y) = y^3
  Ideal I = e.I({"x^2 + y^2", "x*y"});
  auto b = I.groebner();
  bool has_y3 = false;
  for (const auto& p : b->polys) has_y3 = has_y3 || p == e.P("y^3");
  CHECK(has_y3);
  CHECK(b->polys.size() == 3);
  CHECK(I.member(e.P("y^3")));
  CHECK_FALSE(I.member(e.P("y^2")));
  CHECK(I.normal_form(e.P("x^2")) == e.P("-y^2"));
}

TEST_CASE("normal forms and membership") {
  Env d{Field::rationals(), make_vars({"x", "y", "z"})};
  Ideal I = d.I({"x*y + z^2 + 1"});
  CHECK(I.member(d.P("x*y + z^2 + 1")));
  CHECK(I.normal_form(d.P("x*y")) == d.P("-z^2 - 1"));
  Env e{Field::rationals(), make_vars({"x"})};
  CHECK(e.I({"x"}).normal_form(e.P("x^2")).is_zero());
  CHECK(e.I({"1"}).groebner()->is_unit_ideal());
  CHECK_FALSE(e.I({"1"}).is_proper());
}

TEST_CASE("char-2 conic points") {
  Env e{Field::prime_field(2)->with_ratfunc("t"), make_vars({"X", "Y"})};
  for (const char* lam : {"0", "1", "t"}) {
    std::string m = "(X + " + std::string(lam) + ")^2 + t";
    Ideal I = Ideal(e.K, e.v, {e.P("Y^2 + t*X^2 + X"), e.P(m)});
    CHECK(I.member(e.P(m)));
    CHECK(I.is_proper());
  }
}

TEST_CASE("elimination") {
  Env e{Field::rationals(), make_vars({"x", "y"})};
  CHECK(eliminate(e.I({"y - x^2"}), {"y"}).is_zero_ideal());
  Env f{Field::rationals(), make_vars({"X1", "X2", "u", "v", "w"})};
  Ideal J = eliminate(f.I({"u - X1^2", "v - X1^3"}), {"u", "v"});
  REQUIRE(J.generators().size() == 1);
  Poly g = J.generators()[0];
  auto uv = make_vars({"u", "v"});
  CHECK((g == parse_poly("u^3 - v^2", uv, f.K) || g == parse_poly("v^2 - u^3", uv, f.K)));
  // oracle: the relation vanishes on the parametrization
  auto X = make_vars({"X1"});
  Poly back = g.substitute({{"u", parse_poly("X1^2", X, f.K)}, {"v", parse_poly("X1^3", X, f.K)}}, X);
  CHECK(back.is_zero());
  CHECK(eliminate(f.I({"w - 1 - X2^2"}), {"w"}).is_zero_ideal());
}

TEST_CASE("ring presentation") {
  auto Q = Field::rationals();
  auto v = make_vars({"x", "y", "z"});
  auto B = RingPresentation::make(Q, v, {parse_poly("x*y + z^2 + 1", v, Q)});
  CHECK(B->dimension() == 2);
  CHECK(B->is_zero(B->parse("x*y + z^2 + 1")));
  auto A2 = RingPresentation::make(Q, make_vars({"x", "y"}), {});
  CHECK(A2->dimension() == 2);
  CHECK_THROWS_AS(RingPresentation::make(Q, v, {parse_poly("1", v, Q)}), Error);
  auto line = RingPresentation::make(Q, make_vars({"u", "v"}), {parse_poly("u^3 - v^2", make_vars({"u", "v"}), Q)});
  CHECK(line->dimension() == 1);
}

TEST_CASE("algebra map kernels") {
  auto Q = Field::rationals();
  auto v = make_vars({"x", "y", "z"});
  auto B = RingPresentation::make(Q, v, {parse_poly("x*y + z^2 + 1", v, Q)});
  std::vector<Poly> id = {B->variable(0), B->variable(1), B->variable(2)};
  auto r = algebra_map_kernel(*B, id, B->relations());
  CHECK(r.injective);
  CHECK(r.kernel.contains(B->relations()));

  auto xy = make_vars({"x", "y"});
  auto A2 = RingPresentation::make(Q, xy, {});
  auto X = make_vars({"X"});
  Ideal none(Q, X, {});
  auto diag = algebra_map_kernel(*A2, {parse_poly("X", X, Q), parse_poly("X", X, Q)}, none);
  CHECK_FALSE(diag.injective);
  REQUIRE(diag.kernel.generators().size() == 1);
  CHECK(diag.kernel.member(parse_poly("x - y", xy, Q)));

  auto X12 = make_vars({"X1", "X2"});
  auto P = [&](const char* s) { return parse_poly(s, X12, Q); };
  auto m = algebra_map_kernel(*B, {P("1 + X2^2"), P("-1 + 2*X1*X2 - X1^2 - X1^2*X2^2"), P("X1 - X2 + X1*X2^2")},
                              Ideal(Q, X12, {}));
  CHECK(m.injective);
  CHECK(jacobian_rank({P("1 + X2^2"), P("X1 - X2 + X1*X2^2")}) == 2);

  CHECK_THROWS_AS(algebra_map_kernel(*B, {P("1"), P("1"), P("1")}, Ideal(Q, X12, {})), Error);
}

TEST_CASE("property: normal form laws") {
  std::mt19937_64 rng(41);
  auto Q = Field::rationals();
  auto v = make_vars({"x", "y", "z"});
  std::vector<Ideal> ideals = {Ideal(Q, v, {parse_poly("x*y + z^2 + 1", v, Q)}),
                               Ideal(Q, v, {parse_poly("x^2 + y^2", v, Q), parse_poly("x*y", v, Q)}),
                               Ideal(Q, v, {parse_poly("x^2 + y^2 + z^2 + 1", v, Q), parse_poly("x - y*z", v, Q)})};
  for (const auto& I : ideals) {
    auto gb = I.groebner();
    for (const auto& g : I.generators()) CHECK(I.member(g));
    for (const auto& g : gb->polys) {
      CHECK(I.member(g));
      CHECK(g.leading(MonomialOrder::grevlex()).coef.rep.index() == 0);
    }
    for (int round = 0; round < 25; ++round) {
      Poly f = testsupport::random_poly(Q, v, rng, 4, 4);
      Poly g = testsupport::random_poly(Q, v, rng, 4, 4);
      Poly nf = I.normal_form(f);
      CHECK(I.normal_form(nf) == nf);
      CHECK(I.normal_form(f + g) == I.normal_form(nf + I.normal_form(g)));
      CHECK(I.member(f - nf));
      for (const auto& gen : I.generators()) CHECK(I.member(gen * f));
    }
  }
}

TEST_CASE("concurrent basis requests share one computation") {
  auto Q = Field::rationals();
  auto v = make_vars({"x", "y", "z"});
  Ideal I(Q, v, {parse_poly("x^2 + y^2 + z^2 + 1", v, Q), parse_poly("x - y*z", v, Q)});
  std::vector<std::shared_ptr<const GroebnerBasis>> got(8);
#pragma omp parallel for
  for (int k = 0; k < 8; ++k) got[static_cast<std::size_t>(k)] = I.groebner();
  for (const auto& g : got) CHECK(g.get() == got[0].get());
}

TEST_CASE("step cap") {
  auto Q = Field::rationals();
  auto v = make_vars({"x", "y", "z"});
  std::vector<Poly> gens = {parse_poly("x*y - z", v, Q), parse_poly("y*z - x", v, Q), parse_poly("x*z - y", v, Q)};
  GroebnerOptions tiny;
  tiny.max_pair_reductions = 1;
  try {
    groebner_basis(gens, MonomialOrder::grevlex(), tiny);
    FAIL("expected ResourceExceeded");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ResourceExceeded);
  }
}

}  // TEST_SUITE
