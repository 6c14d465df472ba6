#pragma once

#include <string>
#include <vector>

#include "lndkit/ideal.hpp"

namespace lndkit {

// The conic Y^2 + a*X^2 + X = 0 over k = F_2(t) and its points. A point lies
// in X_k(B) exactly when its residue field contains a square root of a.
struct ConicSetup {
  RingPtr ring;  // k[X, Y]/(Y^2 + a*X^2 + X)
  FieldElem a;
};

ConicSetup conic_setup(const FieldPtr& k, const std::string& a_text, const std::string& xname = "X",
                       const std::string& yname = "Y");

struct ConicPoint {
  std::string label;
  FieldPtr field;                      // residue field used for the coordinates
  std::vector<FieldElem> coords;       // (X, Y)
  std::vector<Poly> ideal;             // generators of the maximal ideal, over k
  bool ideal_proper = false;
  bool membership = false;             // (X + λ)^2 + a ∈ m_λ
  bool contains_sqrt_a = false;
  std::string witness;                 // square root of a in the residue field, or reason
  bool in_locus = false;
};

// m_λ = (Y^2 + aX^2 + X, (X + λ)^2 + a) with residue field k[w: w^2 = a][v: v^2 = aλ^2 + a^2 + λ + w]
// and coordinates (λ + w, v).
ConicPoint conic_point_lambda(const ConicSetup& c, const std::string& lambda_text);

// The rational point (1/(s^2 + a), s/(s^2 + a)) on the line Y = sX.
ConicPoint conic_point_slope(const ConicSetup& c, const std::string& slope_text);

}  // namespace lndkit
