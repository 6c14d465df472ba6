#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lndkit/field.hpp"

namespace lndkit {

using Exponent = std::vector<int>;
using VarList = std::vector<std::string>;
using VarsPtr = std::shared_ptr<const VarList>;

VarsPtr make_vars(VarList names);
bool same_vars(const VarsPtr& a, const VarsPtr& b);

// Term orders on exponent vectors. `priority` lists variable indices from
// most to least significant (identity when empty); BlockGrevlex compares the
// first `block` priority positions by grevlex and breaks ties with grevlex on
// the rest, which makes it an elimination order for that first block.
struct MonomialOrder {
  enum class Kind { Lex, Grevlex, BlockGrevlex };
  Kind kind = Kind::Grevlex;
  std::vector<int> priority;
  std::size_t block = 0;

  static MonomialOrder grevlex() { return {}; }
  static MonomialOrder lex() { return {Kind::Lex, {}, 0}; }
  // Elimination order on `nvars` variables that eliminates `eliminated`.
  static MonomialOrder elimination(std::size_t nvars, const std::vector<int>& eliminated);

  // <0, 0, >0 like strcmp; larger means "more leading".
  int compare(const Exponent& a, const Exponent& b) const;
  std::string key() const;
};

int grevlex_compare(const Exponent& a, const Exponent& b);

struct Term {
  Exponent exp;
  Value coef;
};

// Sparse multivariate polynomial. Terms are kept sorted in descending
// graded-reverse-lex order with no zero coefficients.
class Poly {
 public:
  Poly() = default;
  Poly(FieldPtr field, VarsPtr vars) : field_(std::move(field)), vars_(std::move(vars)) {}

  static Poly constant(const FieldPtr& field, const VarsPtr& vars, const FieldElem& c);
  static Poly from_int(const FieldPtr& field, const VarsPtr& vars, long long n);
  static Poly variable(const FieldPtr& field, const VarsPtr& vars, const std::string& name);
  static Poly monomial(const FieldPtr& field, const VarsPtr& vars, Exponent exp, Value coef);
  // Merges duplicate exponents, drops zeros and sorts.
  static Poly from_terms(const FieldPtr& field, const VarsPtr& vars, std::vector<Term> terms);

  const FieldPtr& field() const { return field_; }
  const VarsPtr& vars() const { return vars_; }
  std::size_t nvars() const { return vars_->size(); }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  FieldElem constant_value() const;  // requires is_constant()
  int total_degree() const;          // -1 for zero
  int degree_in(std::size_t var) const;
  FieldElem coefficient(const Exponent& exp) const;
  const Term& leading(const MonomialOrder& order) const;
  // Variables with a nonzero exponent somewhere.
  std::vector<bool> support() const;

  Poly operator-() const;
  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const Poly& b);
  friend bool operator==(const Poly& a, const Poly& b);
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }
  Poly& operator+=(const Poly& b) { return *this = *this + b; }
  Poly& operator-=(const Poly& b) { return *this = *this - b; }
  Poly& operator*=(const Poly& b) { return *this = *this * b; }

  Poly scale(const FieldElem& c) const;
  Poly scale_value(const Value& c) const;
  Poly pow(unsigned n) const;
  Poly partial(const std::string& var) const;
  Poly partial(std::size_t var) const;

  // Ring homomorphism sending each listed variable to a polynomial over
  // `new_vars`; variables missing from `assignment` are mapped to the
  // same-named variable of `new_vars`.
  Poly substitute(const std::map<std::string, Poly>& assignment, const VarsPtr& new_vars) const;
  // Re-expresses the polynomial over another variable list (by name).
  Poly with_vars(const VarsPtr& new_vars) const;
  // Coerces the coefficients into an extension field.
  Poly embed_field(const FieldPtr& target) const;
  // Evaluates every variable; all values must lie in `field()`.
  FieldElem evaluate(const std::vector<FieldElem>& point) const;

  std::string to_string() const;

 private:
  void check_compatible(const Poly& other) const;

  FieldPtr field_;
  VarsPtr vars_;
  std::vector<Term> terms_;
};

// Parsed expression over + - * / ^, integer literals and symbols.
// Implicit multiplication is rejected, as are unary chains ("--x", "x*-y").
class Expr {
 public:
  struct Node;

  static Expr parse(const std::string& text);

  // Symbols resolve to `bindings`, then ring variables, then field
  // generators. Division is only allowed by nonzero constants.
  Poly to_poly(const FieldPtr& field, const VarsPtr& vars,
               const std::map<std::string, FieldElem>& bindings = {}) const;
  FieldElem to_field(const FieldPtr& field, const std::map<std::string, FieldElem>& bindings = {}) const;
  std::set<std::string> symbols() const;
  const std::string& text() const { return text_; }

 private:
  std::string text_;
  std::shared_ptr<const Node> root_;
};

Poly parse_poly(const std::string& text, const VarsPtr& vars, const FieldPtr& field);
FieldElem parse_field_elem(const std::string& text, const FieldPtr& field);

// Extends K by a root of `minpoly_text`, a monic polynomial in `var` over K.
FieldPtr extend_field(const FieldPtr& field, const std::string& name, const std::string& minpoly_text,
                      const std::string& var = "Z", int root_search_bound = 3);
// Coefficients (low first) of a univariate polynomial.
UPoly to_upoly(const Poly& p, std::size_t var);

std::optional<Poly> divide_exact(const Poly& f, const Poly& g);

using PolyMatrix = std::vector<std::vector<Poly>>;
PolyMatrix jacobian_matrix(const std::vector<Poly>& fs, const std::vector<std::size_t>& wrt);
// Rank of the Jacobian of `fs` with respect to all variables, over the
// rational function field, by fraction-free elimination. Characteristic zero.
int jacobian_rank(const std::vector<Poly>& fs);
int matrix_rank(PolyMatrix m);
// Division-free determinant (Laplace expansion), for entries in any domain.
Poly determinant(const PolyMatrix& m);

}  // namespace lndkit
