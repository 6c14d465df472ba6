#include <doctest.h>

#include <functional>
#include <random>

#include "lndkit/derivation.hpp"
#include "support.hpp"

using namespace lndkit;
using testsupport::AffinePlane;
using testsupport::Danielewski;
using testsupport::QuadricQi;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::InvalidInput;
}

}  // namespace

TEST_SUITE("derivation") {

TEST_CASE("well-definedness") {
  AffinePlane a;
  CHECK(a.Dx.apply(a.P("x^2*y")) == a.P("2*x*y"));
  Danielewski d;
  // D1(xy + z^2 + 1) = x*(-2z) + y*0 + 2z*x = 0
  CHECK(d.D1.apply(d.P("x*y + z^2 + 1")).is_zero());
  CHECK(kind_of([&] {
          check_derivation(d.B, "bad", std::map<std::string, std::string>{{"x", "1"}, {"y", "0"}, {"z", "0"}});
        }) == ErrorKind::NotWellDefined);
  CHECK(kind_of([&] {
          check_derivation(d.B, "bad", std::map<std::string, std::string>{{"x", "1"}, {"y", "0"}});
        }) == ErrorKind::InvalidInput);
  CHECK(kind_of([&] {
          check_derivation(d.B, "bad", std::map<std::string, std::string>{{"x", "0"}, {"y", "0"}, {"z", "0"}, {"w", "1"}});
        }) == ErrorKind::UnknownVariable);
  auto F2 = Field::prime_field(2)->with_ratfunc("t");
  auto XY = make_vars({"X", "Y"});
  auto conic = RingPresentation::make(F2, XY, {parse_poly("Y^2 + t*X^2 + X", XY, F2)});
  CHECK(kind_of([&] {
          check_derivation(conic, "D", std::map<std::string, std::string>{{"X", "0"}, {"Y", "0"}});
        }) == ErrorKind::PositiveCharacteristic);
  QuadricQi q;
  CHECK(q.E1.apply(q.P("x^2 + y^2 + z^2 + 1")).is_zero());
}

TEST_CASE("degrees") {
  AffinePlane a;
  CHECK(a.Dx.degree(a.P("x^3")) == 3);
  Danielewski d;
  CHECK(d.D1.apply(d.P("y")) == d.P("-2*z"));
  CHECK(d.D1.apply_power(d.P("y"), 2) == d.P("-2*x"));
  CHECK(d.D1.apply_power(d.P("y"), 3).is_zero());
  CHECK(d.D1.degree(d.P("y")) == 2);
  CHECK(d.D1.degree(d.P("z")) == 1);
  CHECK(d.D1.degree(d.P("y*z")) == 3);
  CHECK(d.D1.apply_power(d.P("y*z"), 4).is_zero());
  CHECK_FALSE(d.D1.apply_power(d.P("y*z"), 3).is_zero());
  CHECK(kind_of([&] { d.D1.degree(d.P("0")); }) == ErrorKind::ZeroElement);
  CHECK(kind_of([&] { d.D1.degree(d.P("y^10"), 5); }) == ErrorKind::DegBoundExceeded);
}

TEST_CASE("nilpotency certificates") {
  AffinePlane a;
  CHECK(certify_lnd(a.Dx, 2).kind == NilpotencyStatus::Kind::Certified);
  Danielewski d;
  auto s = certify_lnd(d.D1, 3);
  CHECK(s.kind == NilpotencyStatus::Kind::Certified);
  CHECK(s.to_string() == "certified(3)");
  CHECK(certify_lnd(d.D1, 2).kind == NilpotencyStatus::Kind::Unknown);
  auto Q = Field::rationals();
  auto x = make_vars({"x"});
  auto line = RingPresentation::make(Q, x, {});
  auto euler = check_derivation(line, "E", std::map<std::string, std::string>{{"x", "x"}});
  CHECK(certify_lnd(euler, 10).kind == NilpotencyStatus::Kind::Unknown);
}

TEST_CASE("local slices") {
  AffinePlane a;
  auto s = find_local_slice(a.Dx);
  CHECK(s.s == a.P("x"));
  CHECK(s.a == a.P("1"));
  Danielewski d;
  auto s1 = find_local_slice(d.D1);
  CHECK(s1.s == d.P("z"));
  CHECK(s1.a == d.P("x"));
  auto s2 = find_local_slice(d.D2);
  CHECK(s2.s == d.P("z"));
  CHECK(s2.a == d.P("y"));
  auto Q = Field::rationals();
  auto xy = make_vars({"x", "y"});
  auto plane = RingPresentation::make(Q, xy, {});
  // D = x^2 d/dy: slice is y, not found when only degree-2 monomials are tried on a zero derivation
  auto D = check_derivation(plane, "D", std::map<std::string, std::string>{{"x", "0"}, {"y", "x^2"}});
  CHECK(find_local_slice(D).s == plane->parse("y"));
  auto Z = check_derivation(plane, "Z", std::map<std::string, std::string>{{"x", "0"}, {"y", "0"}});
  CHECK(kind_of([&] { find_local_slice(Z, 2); }) == ErrorKind::NotFound);
}

TEST_CASE("dixmier projection") {
  AffinePlane a;
  auto s = find_local_slice(a.Dx);
  auto p = dixmier_project(a.Dx, s, a.P("x^2 + y"));
  CHECK(localized_equal(*a.B, s.a, p, Localized{a.P("y"), 0}));
  Danielewski d;
  auto s1 = find_local_slice(d.D1);
  auto pz = dixmier_project(d.D1, s1, d.P("z"));
  CHECK(pz.numerator.is_zero());
  auto py = dixmier_project(d.D1, s1, d.P("y"));
  CHECK(py.a_power == 2);
  CHECK(d.D1.apply(py.numerator).is_zero());
  // y - 2z*z/x*... collapses to -1/x on the surface
  CHECK(localized_equal(*d.B, s1.a, py, Localized{d.P("-1"), 1}));
}

TEST_CASE("exponential maps") {
  AffinePlane a;
  auto one = FieldElem::one(a.Q);
  auto img = exp_map(a.Dx, one);
  CHECK(img[0] == a.P("x + 1"));
  CHECK(img[1] == a.P("y"));

  Danielewski d;
  auto fe = exp_formal(d.D1);
  auto T = [&](const char* s) { return parse_poly(s, fe.ring->vars(), d.Q); };
  CHECK(fe.images[0] == T("x"));
  CHECK(fe.images[1] == T("y - 2*T*z - T^2*x"));
  CHECK(fe.images[2] == T("z + T*x"));
  // oracle: substitute into the relation and expand
  Poly rel = T("x*y + z^2 + 1").substitute({{"x", fe.images[0]}, {"y", fe.images[1]}, {"z", fe.images[2]}},
                                          fe.ring->vars());
  CHECK(fe.ring->reduce(rel).is_zero());

  auto plus = exp_map(d.D1, one);
  auto minus = exp_map(d.D1, -one);
  for (std::size_t i = 0; i < 3; ++i) CHECK(apply_homomorphism(plus, *d.B, *d.B, minus[i]) == d.B->variable(i));
}

TEST_CASE("property: degree additivity and factorial closure") {
  std::mt19937_64 rng(7);
  Danielewski d;
  QuadricQi q;
  struct Case {
    const RingPresentation* B;
    const Derivation* D;
  };
  std::vector<Case> cases = {{d.B.get(), &d.D1}, {d.B.get(), &d.D2}, {q.B.get(), &q.E1}};
  for (const auto& c : cases) {
    for (int round = 0; round < 30; ++round) {
      Poly b = testsupport::random_element(*c.B, rng, 3, 3);
      Poly e = testsupport::random_element(*c.B, rng, 3, 3);
      CHECK(c.D->degree(b * e) == c.D->degree(b) + c.D->degree(e));
      if (c.D->apply(b * e).is_zero()) {
        CHECK(c.D->apply(b).is_zero());
        CHECK(c.D->apply(e).is_zero());
      }
    }
  }
  // kernel products: x, x^2 + 1 in ker D1 and their product
  CHECK(d.D1.apply(d.P("x*(x^2 + 1)")).is_zero());
}

TEST_CASE("property: exponential is a homomorphism with the group law") {
  std::mt19937_64 rng(13);
  Danielewski d;
  for (int round = 0; round < 25; ++round) {
    FieldElem lam{d.Q, d.Q->sample(rng)}, mu{d.Q, d.Q->sample(rng)};
    Poly b = testsupport::random_element(*d.B, rng, 3, 3);
    Poly c = testsupport::random_element(*d.B, rng, 3, 3);
    auto phi = exp_map(d.D1, lam);
    CHECK(apply_homomorphism(phi, *d.B, *d.B, b * c) ==
          d.B->reduce(apply_homomorphism(phi, *d.B, *d.B, b) * apply_homomorphism(phi, *d.B, *d.B, c)));
    CHECK(exp_apply(d.D1, lam, b) == apply_homomorphism(phi, *d.B, *d.B, b));
    if (round < 8) {
      auto psi = exp_map(d.D1, mu);
      auto sum = exp_map(d.D1, lam + mu);
      for (std::size_t i = 0; i < 3; ++i) CHECK(apply_homomorphism(phi, *d.B, *d.B, psi[i]) == sum[i]);
    }
  }
}

TEST_CASE("property: fixed points of exp(T*D) are the kernel") {
  std::mt19937_64 rng(19);
  Danielewski d;
  auto fe = exp_formal(d.D1);
  std::vector<Poly> samples = {d.P("x"), d.P("x^2 + 3"), d.P("1"), d.P("y"), d.P("z"), d.P("x*z + y")};
  for (int k = 0; k < 10; ++k) samples.push_back(testsupport::random_element(*d.B, rng, 2, 3));
  for (const auto& b : samples) {
    bool fixed = fe.apply(b) == b.with_vars(fe.ring->vars());
    CHECK(fixed == d.D1.apply(b).is_zero());
  }
}

TEST_CASE("property: dixmier projection lands in the kernel and recovers b") {
  std::mt19937_64 rng(31);
  Danielewski d;
  auto s = find_local_slice(d.D1);
  for (int round = 0; round < 10; ++round) {
    Poly b = testsupport::random_element(*d.B, rng, 3, 3);
    Localized p = dixmier_project(d.D1, s, b);
    CHECK(d.D1.apply(p.numerator).is_zero());
    // b = Σ_n π(D^n b) s^n / (n! a^n); clear denominators with a^(2K)
    auto orbit = d.D1.orbit(b);
    const int K = static_cast<int>(orbit.size()) - 1;
    Poly total(d.Q, d.v);
    mpq_class fact = 1;
    for (int n = 0; n <= K; ++n) {
      if (n > 0) fact *= n;
      Localized pn = dixmier_project(d.D1, s, orbit[static_cast<std::size_t>(n)]);
      Poly term = pn.numerator * s.s.pow(static_cast<unsigned>(n)) *
                  s.a.pow(static_cast<unsigned>(2 * K - n - pn.a_power));
      total += term.scale(FieldElem(d.Q, d.Q->from_rational(1 / fact)));
    }
    CHECK(d.B->reduce(total - b * s.a.pow(static_cast<unsigned>(2 * K))).is_zero());
  }
}

TEST_CASE("base change") {
  AffinePlane a;
  auto Qi = extend_field(a.Q, "i", "Z^2 + 1");
  auto bc = a.Dx.base_change(Qi);
  CHECK(bc.ring()->field()->same_as(*Qi));
  CHECK(bc.apply(bc.ring()->parse("i*x^2")) == bc.ring()->parse("2*i*x"));
  CHECK(bc.status().kind == NilpotencyStatus::Kind::Certified);
  CHECK(kind_of([&] { a.Dx.base_change(Field::prime_field(3)); }) == ErrorKind::FieldMismatch);
}

}  // TEST_SUITE
