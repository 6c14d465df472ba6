#include <doctest.h>

#include <functional>
#include <random>

#include "lndkit/fml.hpp"
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

std::vector<std::string> texts(const std::vector<Poly>& ps) {
  std::vector<std::string> out;
  for (const auto& p : ps) out.push_back(p.to_string());
  return out;
}

PointFamily danielewski_family(const FieldPtr& Q) {
  return PointFamily{"curve", Q, {"c", "s"}, {Expr::parse("c"), Expr::parse("-(s^2 + 1)/c"), Expr::parse("s")}};
}

}  // namespace

TEST_SUITE("fml") {

TEST_CASE("fixed elements") {
  Danielewski d;
  auto one = DerivationSet::make(d.B, {d.D1});
  auto both = DerivationSet::make(d.B, {d.D1, d.D2});
  CHECK(fixed_by_all(one, d.P("x")));
  CHECK_FALSE(fixed_by_all(both, d.P("x")));
  CHECK(fixed_by_all(both, d.P("1")));
  CHECK(fixed_by_all(one, d.P("1")));
  CHECK_FALSE(fixed_by_all(one, d.P("z")));
}

TEST_CASE("bounded kernels") {
  AffinePlane a;
  CHECK(texts(kernel_intersection_bounded(DerivationSet::make(a.B, {a.Dx}), 2)) ==
        std::vector<std::string>{"1", "y", "y^2"});
  Danielewski d;
  CHECK(texts(kernel_intersection_bounded(DerivationSet::make(d.B, {d.D1}), 1)) == std::vector<std::string>{"1", "x"});
  CHECK(texts(kernel_intersection_bounded(DerivationSet::make(d.B, {d.D1, d.D2}), 2)) == std::vector<std::string>{"1"});
  auto k3 = kernel_intersection_bounded(DerivationSet::make(d.B, {d.D1}), 3);
  CHECK(k3.size() == 4);  // 1, x, x^2, x^3
  auto one = DerivationSet::make(d.B, {d.D1});
  for (const auto& b : k3) CHECK(fixed_by_all(one, b));
}

TEST_CASE("base change") {
  AffinePlane a;
  auto Qi = extend_field(a.Q, "i", "Z^2 + 1");
  auto bc = a.Dx.base_change(Qi);
  CHECK(bc.apply(bc.ring()->parse("i*x + y")) == bc.ring()->parse("i"));

  Danielewski d;
  for (const auto* D : {&d.D1, &d.D2}) {
    auto before = kernel_intersection_bounded(DerivationSet::make(d.B, {*D}), 2);
    auto Dbar = D->base_change(Qi);
    auto after = kernel_intersection_bounded(DerivationSet::make(Dbar.ring(), {Dbar}), 2);
    CHECK(before.size() == after.size());
  }

  // D1 over Q(i) matches E1 on the quadric under x1 = x + i*y, y1 = x - i*y
  QuadricQi q;
  auto D1 = d.D1.base_change(q.K);
  std::vector<Poly> phi = {q.P("x + i*y"), q.P("x - i*y"), q.P("z")};
  for (const auto& r : D1.ring()->relations().generators()) {
    CHECK(apply_homomorphism(phi, *D1.ring(), *q.B, r).is_zero());
  }
  for (std::size_t k = 0; k < 3; ++k) {
    Poly lhs = q.E1.apply(phi[k]);
    Poly rhs = apply_homomorphism(phi, *D1.ring(), *q.B, D1.values()[k]);
    CHECK(lhs == rhs);
  }
}

TEST_CASE("pipeline on the Danielewski surface") {
  Danielewski d;
  std::mt19937_64 rng(1);
  auto pts = family_points(*d.B, danielewski_family(d.Q), 5, rng);
  PipelineConfig cfg;
  auto rep = fml_pipeline(DerivationSet::make(d.B, {d.D1, d.D2}), pts, cfg);
  CHECK(rep.success);
  CHECK(rep.N == 2);
  CHECK(rep.n == 2);
  REQUIRE(rep.certificate);
  for (const auto& Ij : rep.certificate->ideals) CHECK_FALSE(Ij.empty());
  CHECK(rep.samples.injective == 5);
  CHECK(std::find(rep.assumptions.begin(), rep.assumptions.end(), "asserted: K_Delta = k") != rep.assumptions.end());
}

TEST_CASE("pipeline on the affine plane") {
  AffinePlane a;
  std::vector<PointSpec> pts;
  for (long long c1 : {0, 2, -3}) {
    pts.push_back(make_point(*a.B, "p", a.Q, {FieldElem::from_int(a.Q, c1), FieldElem::from_int(a.Q, 5)}));
  }
  auto rep = fml_pipeline(DerivationSet::make(a.B, {a.Dx, a.Dy}), pts, PipelineConfig{});
  CHECK(rep.success);
  auto T = [&](const char* s) { return parse_poly(s, rep.psi.target->vars(), a.Q); };
  CHECK(rep.psi.images[0] == T("x + X1"));
  CHECK(rep.psi.images[1] == T("y + X2"));
  CHECK(rep.samples.points[1].images.images[0] == parse_poly("X1 + 2", rep.samples.points[1].images.vars, a.Q));
  CHECK(rep.samples.points[1].images.images[1] == parse_poly("X2 + 5", rep.samples.points[1].images.vars, a.Q));
}

TEST_CASE("pipeline negative control") {
  Danielewski d;
  CHECK(kind_of([&] { fml_pipeline(DerivationSet::make(d.B, {d.D1}), {}, PipelineConfig{}); }) ==
        ErrorKind::GenericNotInjective);
  CHECK(kind_of([&] { fml_pipeline(DerivationSet::make(d.B, {}), {}, PipelineConfig{}); }) == ErrorKind::InvalidInput);
}

TEST_CASE("pipeline with repeated sequences") {
  QuadricQi q;
  std::mt19937_64 rng(9);
  // points over Q(i) from X1 = c, Y1 = -(s^2 + 1)/c
  PointFamily fam{"qi", q.K, {"c", "s"},
                  {Expr::parse("(c - (s^2 + 1)/c)/2"), Expr::parse("-i*(c + (s^2 + 1)/c)/2"), Expr::parse("s")}};
  auto pts = family_points(*q.B, fam, 3, rng);
  REQUIRE(pts.size() == 3);
  PipelineConfig cfg;
  cfg.method = InjectivityMethod::Jacobian;
  auto rep = fml_pipeline(DerivationSet::make(q.B, {q.E1, q.E2}), pts, cfg);
  CHECK(rep.success);
  CHECK(rep.samples.injective == 3);
}

}  // TEST_SUITE
