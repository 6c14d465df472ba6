#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "lndkit/error.hpp"

namespace lndkit {

// Exact coefficient fields built as towers
//
//   base (Q or F_p)  ->  rational-function indeterminates t_1, ..., t_r
//                    ->  simple algebraic extensions a_1, ..., a_s
//
// Each level is a field over the level below it. A value at level L is
// stored recursively: rationals / residues at level 0, reduced fractions of
// univariate polynomials over level L-1 at a rational-function level, and
// polynomials of degree < deg(minpoly) over level L-1 at an extension level.
// Every representation is canonical, so equality is structural.

struct Value;

struct ModInt {
  std::int64_t v = 0;
};

// num / den with gcd(num, den) = 1 and den monic. Zero is num = {}, den = {1}.
struct RatFn {
  std::vector<Value> num;
  std::vector<Value> den;
};

// Polynomial in the extension generator, reduced modulo the minimal polynomial.
struct AlgElem {
  std::vector<Value> coeffs;
};

struct Value {
  std::variant<mpq_class, ModInt, RatFn, AlgElem> rep;
};

using UPoly = std::vector<Value>;  // univariate, low degree first, no trailing zeros

enum class BaseKind { Rationals, PrimeField };

struct FieldLevel {
  enum class Kind { RationalFunction, Extension };
  Kind kind;
  std::string name;
  UPoly minpoly;  // Extension only: monic, coefficients at the level below
};

class Field;
using FieldPtr = std::shared_ptr<const Field>;

class Field : public std::enable_shared_from_this<Field> {
 public:
  static FieldPtr rationals();
  static FieldPtr prime_field(std::int64_t p);

  // Appends a rational-function indeterminate. Not allowed once the tower has
  // algebraic extensions.
  FieldPtr with_ratfunc(const std::string& name) const;

  // Appends K[Z]/(minpoly). `minpoly` holds coefficients in this field, low
  // degree first. Irreducibility is asserted by the caller; a root scan over
  // small tower elements (height <= root_search_bound) rejects obvious
  // reducible inputs.
  FieldPtr extend(const std::string& name, const UPoly& minpoly, int root_search_bound = 3) const;

  BaseKind base() const { return base_; }
  std::int64_t characteristic() const { return base_ == BaseKind::Rationals ? 0 : prime_; }
  const std::vector<FieldLevel>& levels() const { return levels_; }
  int top() const { return static_cast<int>(levels_.size()); }
  std::vector<std::string> ratfunc_names() const;
  std::vector<std::string> extension_names() const;
  bool has_symbol(const std::string& name) const;
  // Degree of the tower over base(ratfunc indeterminates).
  std::size_t extension_degree() const;

  bool same_as(const Field& other) const { return signature_ == other.signature_; }
  const std::string& signature() const { return signature_; }
  // Human readable description, e.g. "GF(2)(t)" or "Q[i: Z^2 + 1]".
  std::string describe() const { return signature_; }

  // Top-level arithmetic.
  Value zero() const { return zero_at(top()); }
  Value one() const { return one_at(top()); }
  Value from_int(long long n) const;
  Value from_rational(const mpq_class& q) const;
  Value generator(const std::string& name) const;
  bool is_zero(const Value& a) const { return is_zero_at(top(), a); }
  bool is_one(const Value& a) const { return equal_at(top(), a, one()); }
  bool equal(const Value& a, const Value& b) const { return equal_at(top(), a, b); }
  Value add(const Value& a, const Value& b) const { return add_at(top(), a, b); }
  Value sub(const Value& a, const Value& b) const { return sub_at(top(), a, b); }
  Value neg(const Value& a) const { return neg_at(top(), a); }
  Value mul(const Value& a, const Value& b) const { return mul_at(top(), a, b); }
  Value inv(const Value& a) const { return inv_at(top(), a); }
  Value div(const Value& a, const Value& b) const { return mul(a, inv(b)); }
  Value pow(const Value& a, unsigned n) const;
  std::string format(const Value& a) const { return format_at(top(), a); }
  // True for values that print as a plain signed rational (used to decide
  // whether "- c*x" may be written instead of "+ (c)*x").
  bool is_base_constant(const Value& a) const;
  // Total order on values used only for deterministic sorting.
  int compare(const Value& a, const Value& b) const { return compare_at(top(), a, b); }

  // Embedding by generator names: every level of this field must appear in
  // `other` under the same name and kind, with minimal polynomials mapping to
  // zero. Prefix towers are the common case.
  bool embeds_into(const Field& other) const;
  Value embed(const Value& a, const Field& other) const;

  Value sample(std::mt19937_64& rng, int height = 3) const { return sample_at(top(), rng, height); }
  std::vector<Value> enumerate_small(int bound, std::size_t cap) const { return enumerate_at(top(), bound, cap); }

  // Level-wise primitives; level 0 is the base field.
  Value zero_at(int level) const;
  Value one_at(int level) const;
  bool is_zero_at(int level, const Value& a) const;
  bool equal_at(int level, const Value& a, const Value& b) const;
  int compare_at(int level, const Value& a, const Value& b) const;
  Value add_at(int level, const Value& a, const Value& b) const;
  Value sub_at(int level, const Value& a, const Value& b) const;
  Value neg_at(int level, const Value& a) const;
  Value mul_at(int level, const Value& a, const Value& b) const;
  Value inv_at(int level, const Value& a) const;
  Value lift(const Value& a, int from_level, int to_level) const;
  std::string format_at(int level, const Value& a) const;

  // Univariate polynomial arithmetic with coefficients at `level`.
  void up_trim(int level, UPoly& p) const;
  UPoly up_add(int level, const UPoly& a, const UPoly& b) const;
  UPoly up_sub(int level, const UPoly& a, const UPoly& b) const;
  UPoly up_mul(int level, const UPoly& a, const UPoly& b) const;
  UPoly up_scale(int level, const UPoly& a, const Value& c) const;
  void up_divmod(int level, const UPoly& a, const UPoly& b, UPoly* quot, UPoly* rem) const;
  UPoly up_monic(int level, const UPoly& a) const;
  UPoly up_gcd(int level, UPoly a, UPoly b) const;
  // Returns g = gcd (monic) and s with s*a = g mod b.
  UPoly up_inverse_cofactor(int level, const UPoly& a, const UPoly& b, UPoly* gcd) const;
  UPoly up_derivative(int level, const UPoly& a) const;
  Value up_eval(int level, const UPoly& p, const Value& x) const;
  bool up_equal(int level, const UPoly& a, const UPoly& b) const;
  std::string up_format(int level, const UPoly& p, const std::string& var) const;

 private:
  Field() = default;
  void finalize_signature();
  Value sample_at(int level, std::mt19937_64& rng, int height) const;
  std::vector<Value> enumerate_at(int level, int bound, std::size_t cap) const;
  RatFn canonical_ratfn(int level, UPoly num, UPoly den) const;
  Value embed_at(int level, const Value& a, const Field& other) const;

  std::int64_t modp(std::int64_t a) const;
  std::int64_t inv_mod(std::int64_t a) const;

  BaseKind base_ = BaseKind::Rationals;
  std::int64_t prime_ = 0;
  std::vector<FieldLevel> levels_;
  std::string signature_;
};

// A value together with the field it lives in.
class FieldElem {
 public:
  FieldElem() = default;
  FieldElem(FieldPtr field, Value value) : field_(std::move(field)), value_(std::move(value)) {}

  static FieldElem from_int(const FieldPtr& field, long long n) { return {field, field->from_int(n)}; }
  static FieldElem zero(const FieldPtr& field) { return {field, field->zero()}; }
  static FieldElem one(const FieldPtr& field) { return {field, field->one()}; }
  static FieldElem generator(const FieldPtr& field, const std::string& name) {
    return {field, field->generator(name)};
  }

  const FieldPtr& field() const { return field_; }
  const Value& value() const { return value_; }
  bool is_zero() const { return field_->is_zero(value_); }
  bool is_one() const { return field_->is_one(value_); }
  std::string to_string() const { return field_->format(value_); }
  FieldElem pow(unsigned n) const { return {field_, field_->pow(value_, n)}; }
  FieldElem inverse() const { return {field_, field_->inv(value_)}; }
  FieldElem embed(const FieldPtr& target) const;

  friend FieldElem operator+(const FieldElem& a, const FieldElem& b);
  friend FieldElem operator-(const FieldElem& a, const FieldElem& b);
  friend FieldElem operator*(const FieldElem& a, const FieldElem& b);
  friend FieldElem operator/(const FieldElem& a, const FieldElem& b);
  friend FieldElem operator-(const FieldElem& a) { return {a.field_, a.field_->neg(a.value_)}; }
  friend bool operator==(const FieldElem& a, const FieldElem& b);
  friend bool operator!=(const FieldElem& a, const FieldElem& b) { return !(a == b); }

 private:
  FieldPtr field_;
  Value value_;
};

void require_same_field(const Field& a, const Field& b);

// Squareness in F_p(t) by squarefree decomposition of numerator and
// denominator. On success `root` (if given) receives c with c^2 = a.
bool is_square(const FieldElem& a, FieldElem* root = nullptr);

struct SquarefreeFactor {
  UPoly factor;  // monic, over the base prime field
  int multiplicity;
};
// Squarefree decomposition over F_p of a nonzero polynomial; the leading
// coefficient is returned separately.
std::vector<SquarefreeFactor> squarefree_decomposition(const Field& fp, const UPoly& f, Value* leading);

// Square root in F_p, if one exists.
std::optional<std::int64_t> sqrt_mod(std::int64_t a, std::int64_t p);
bool is_prime(std::int64_t n);

}  // namespace lndkit
