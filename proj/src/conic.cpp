#include "lndkit/conic.hpp"

namespace lndkit {

namespace {

std::string fresh(const FieldPtr& k, const std::string& stem) {
  std::string s = stem;
  while (k->has_symbol(s) || s == "X" || s == "Y") s += "_";
  return s;
}

void check_point(const ConicPoint& p) {
  for (const auto& g : p.ideal) {
    FieldElem v = g.embed_field(p.field).evaluate(p.coords);
    if (!v.is_zero()) throw Error(ErrorKind::InvalidPoint, p.label + ": " + g.to_string() + " does not vanish");
  }
}

}  // namespace

ConicSetup conic_setup(const FieldPtr& k, const std::string& a_text, const std::string& xname, const std::string& yname) {
  if (k->characteristic() != 2) {
    throw Error(ErrorKind::UnsupportedField, "the conic classifier works over fields of characteristic 2, not " +
                                                 k->describe());
  }
  FieldElem a = parse_field_elem(a_text, k);
  if (a.is_zero()) throw Error(ErrorKind::ZeroElement, "a must be nonzero");
  VarsPtr v = make_vars({xname, yname});
  Poly X = Poly::variable(k, v, xname), Y = Poly::variable(k, v, yname);
  Poly rel = Y * Y + (X * X).scale(a) + X;
  return ConicSetup{RingPresentation::make(k, v, {rel}, true, 1), a};
}

ConicPoint conic_point_lambda(const ConicSetup& c, const std::string& lambda_text) {
  const FieldPtr& k = c.ring->field();
  const Field& F = *k;
  FieldElem lam = parse_field_elem(lambda_text, k);
  ConicPoint p;
  p.label = "m_lambda(" + lam.to_string() + ")";
  const VarsPtr& v = c.ring->vars();
  Poly X = c.ring->variable(0);
  Poly shift = X + Poly::constant(k, v, lam);
  Poly g = shift * shift + Poly::constant(k, v, c.a);
  p.ideal = {c.ring->relations().generators()[0], g};
  Ideal m(k, v, p.ideal);
  p.ideal_proper = m.is_proper();
  p.membership = m.member(g);

  std::string wn = fresh(k, "w");
  FieldPtr kw = k->extend(wn, {F.neg(c.a.value()), F.zero(), F.one()}, 2);
  FieldElem w = FieldElem::generator(kw, wn);
  FieldElem lw = lam.embed(kw), aw = c.a.embed(kw);
  FieldElem rhs = aw * lw * lw + aw * aw + lw + w;
  std::string vn = fresh(kw, "v");
  FieldPtr kv = kw->extend(vn, {kw->neg(rhs.value()), kw->zero(), kw->one()}, 2);
  p.field = kv;
  p.coords = {(lw + w).embed(kv), FieldElem::generator(kv, vn)};
  check_point(p);
  FieldElem wv = w.embed(kv);
  p.contains_sqrt_a = wv * wv == c.a.embed(kv);
  p.witness = wn + "^2 = " + c.a.to_string();
  p.in_locus = p.contains_sqrt_a;
  return p;
}

ConicPoint conic_point_slope(const ConicSetup& c, const std::string& slope_text) {
  const FieldPtr& k = c.ring->field();
  FieldElem s = parse_field_elem(slope_text, k);
  FieldElem den = s * s + c.a;
  if (den.is_zero()) throw Error(ErrorKind::InvalidPoint, "slope " + s.to_string() + " gives no affine point");
  ConicPoint p;
  p.label = "slope(" + s.to_string() + ")";
  p.field = k;
  // X((s^2 + a)X + 1) = 0 on Y = sX, and -1 = 1
  FieldElem x0 = den.inverse();
  p.coords = {x0, s * x0};
  const VarsPtr& v = c.ring->vars();
  p.ideal = {c.ring->variable(0) - Poly::constant(k, v, p.coords[0]),
             c.ring->variable(1) - Poly::constant(k, v, p.coords[1])};
  Ideal m(k, v, p.ideal);
  p.ideal_proper = m.is_proper();
  p.membership = m.member(c.ring->relations().generators()[0]);
  check_point(p);
  p.contains_sqrt_a = is_square(c.a);
  p.witness = std::string("is_square(") + c.a.to_string() + ") = " + (p.contains_sqrt_a ? "true" : "false");
  p.in_locus = p.contains_sqrt_a;
  return p;
}

}  // namespace lndkit
