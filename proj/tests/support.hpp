#pragma once

#include <random>

#include "lndkit/poly.hpp"

namespace testsupport {

// Random polynomial with up to `terms` terms of total degree <= `degree` and
// small coefficients sampled from the field.
inline lndkit::Poly random_poly(const lndkit::FieldPtr& K, const lndkit::VarsPtr& vars, std::mt19937_64& rng,
                                int degree, int terms) {
  std::vector<lndkit::Term> ts;
  int n = static_cast<int>(rng() % static_cast<unsigned>(terms)) + 1;
  for (int k = 0; k < n; ++k) {
    lndkit::Exponent e(vars->size(), 0);
    int budget = static_cast<int>(rng() % static_cast<unsigned>(degree + 1));
    for (int b = 0; b < budget; ++b) e[rng() % vars->size()] += 1;
    ts.push_back(lndkit::Term{e, K->sample(rng, 2)});
  }
  return lndkit::Poly::from_terms(K, vars, ts);
}

}  // namespace testsupport

#include "lndkit/derivation.hpp"

namespace testsupport {

struct Danielewski {
  lndkit::FieldPtr Q = lndkit::Field::rationals();
  lndkit::VarsPtr v = lndkit::make_vars({"x", "y", "z"});
  lndkit::RingPtr B = lndkit::RingPresentation::make(Q, v, {lndkit::parse_poly("x*y + z^2 + 1", v, Q)}, true, 2);
  lndkit::Derivation D1 =
      lndkit::check_derivation(B, "D1", std::map<std::string, std::string>{{"x", "0"}, {"y", "-2*z"}, {"z", "x"}})
          .with_status(lndkit::NilpotencyStatus::certified(4));
  lndkit::Derivation D2 =
      lndkit::check_derivation(B, "D2", std::map<std::string, std::string>{{"x", "-2*z"}, {"y", "0"}, {"z", "y"}})
          .with_status(lndkit::NilpotencyStatus::certified(4));
  lndkit::Poly P(const std::string& s) const { return B->parse(s); }
};

struct AffinePlane {
  lndkit::FieldPtr Q = lndkit::Field::rationals();
  lndkit::VarsPtr v = lndkit::make_vars({"x", "y"});
  lndkit::RingPtr B = lndkit::RingPresentation::make(Q, v, {}, true, 2);
  lndkit::Derivation Dx =
      lndkit::check_derivation(B, "Dx", std::map<std::string, std::string>{{"x", "1"}, {"y", "0"}})
          .with_status(lndkit::NilpotencyStatus::certified(2));
  lndkit::Derivation Dy =
      lndkit::check_derivation(B, "Dy", std::map<std::string, std::string>{{"x", "0"}, {"y", "1"}})
          .with_status(lndkit::NilpotencyStatus::certified(2));
  lndkit::Poly P(const std::string& s) const { return B->parse(s); }
};

// x^2 + y^2 + z^2 + 1 over Q(i), with the two derivations that become D1, D2
// after x1 = x + i*y, y1 = x - i*y.
struct QuadricQi {
  lndkit::FieldPtr K = lndkit::extend_field(lndkit::Field::rationals(), "i", "Z^2 + 1");
  lndkit::VarsPtr v = lndkit::make_vars({"x", "y", "z"});
  lndkit::RingPtr B = lndkit::RingPresentation::make(K, v, {lndkit::parse_poly("x^2 + y^2 + z^2 + 1", v, K)}, true, 2);
  lndkit::Derivation E1 =
      lndkit::check_derivation(B, "E1", std::map<std::string, std::string>{{"x", "-z"}, {"y", "-i*z"}, {"z", "x + i*y"}})
          .with_status(lndkit::NilpotencyStatus::certified(4));
  lndkit::Derivation E2 =
      lndkit::check_derivation(B, "E2", std::map<std::string, std::string>{{"x", "-z"}, {"y", "i*z"}, {"z", "x - i*y"}})
          .with_status(lndkit::NilpotencyStatus::certified(4));
  lndkit::Poly P(const std::string& s) const { return B->parse(s); }
};

// Random element of B given as a reduced random polynomial, nonzero.
inline lndkit::Poly random_element(const lndkit::RingPresentation& B, std::mt19937_64& rng, int degree, int terms) {
  for (;;) {
    lndkit::Poly p = B.reduce(random_poly(B.field(), B.vars(), rng, degree, terms));
    if (!p.is_zero()) return p;
  }
}

}  // namespace testsupport
