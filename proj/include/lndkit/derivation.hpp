#pragma once

#include <map>
#include <string>
#include <vector>

#include "lndkit/ideal.hpp"

namespace lndkit {

constexpr int kDefaultDegreeBound = 64;

struct NilpotencyStatus {
  enum class Kind { Certified, Asserted, Unknown };
  Kind kind = Kind::Unknown;
  int bound = 0;  // Certified only

  static NilpotencyStatus certified(int bound) { return {Kind::Certified, bound}; }
  static NilpotencyStatus asserted() { return {Kind::Asserted, 0}; }
  static NilpotencyStatus unknown() { return {Kind::Unknown, 0}; }
  bool usable() const { return kind != Kind::Unknown; }
  std::string to_string() const;
};

// A k-derivation of B = k[x]/I, stored by its values on the generators.
// Every application returns a normal form modulo I.
class Derivation {
 public:
  Derivation() = default;

  const RingPtr& ring() const { return ring_; }
  const std::string& name() const { return name_; }
  const std::vector<Poly>& values() const { return values_; }
  const NilpotencyStatus& status() const { return status_; }
  Derivation with_status(NilpotencyStatus s) const;
  bool is_zero() const;

  Poly apply(const Poly& b) const;
  Poly apply_power(const Poly& b, int n) const;
  // Greatest n with D^n(b) != 0; throws DegBoundExceeded past `bound`.
  int degree(const Poly& b, int bound = kDefaultDegreeBound) const;
  // D^0(b), D^1(b), ... up to the last nonzero iterate.
  std::vector<Poly> orbit(const Poly& b, int bound = kDefaultDegreeBound) const;

  // Same derivation on B[extra], killing the new variables.
  Derivation lift(const RingPtr& extended) const;
  // Scalar extension K ⊗ B; the nilpotency status carries over.
  Derivation base_change(const FieldPtr& K) const;

  std::string to_string() const;

 private:
  friend Derivation check_derivation(const RingPtr&, const std::string&, std::vector<Poly>);
  Derivation(RingPtr ring, std::string name, std::vector<Poly> values)
      : ring_(std::move(ring)), name_(std::move(name)), values_(std::move(values)) {}

  RingPtr ring_;
  std::string name_;
  std::vector<Poly> values_;
  NilpotencyStatus status_;
};

// Verifies that the values (one per generator, in generator order) define a
// derivation of B, i.e. D(r) ∈ I for every relation r. Characteristic zero.
Derivation check_derivation(const RingPtr& B, const std::string& name, std::vector<Poly> values);
Derivation check_derivation(const RingPtr& B, const std::string& name,
                            const std::map<std::string, std::string>& values);

// Certified(bound) when every generator is killed by some D^n, n <= bound.
NilpotencyStatus certify_lnd(const Derivation& D, int bound);

struct LocalSlice {
  Poly s;
  Poly a;  // D(s), a nonzero kernel element
};

// Exponent vectors of total degree <= degree: by degree, grevlex ascending within a degree.
std::vector<Exponent> monomials_up_to(std::size_t nvars, int degree);

LocalSlice find_local_slice(const Derivation& D, int search_degree = 3);

// numerator / a^a_power in B_a.
struct Localized {
  Poly numerator;
  int a_power = 0;
};

bool localized_equal(const RingPresentation& B, const Poly& a, const Localized& u, const Localized& v);

// π(b) = Σ_n (-1)^n D^n(b) s^n / (n! a^n), written over a^deg_D(b).
Localized dixmier_project(const Derivation& D, const LocalSlice& slice, const Poly& b,
                          int bound = kDefaultDegreeBound);

// exp(λD)(b) = Σ λ^n D^n(b) / n!.
Poly exp_apply(const Derivation& D, const FieldElem& lambda, const Poly& b, int bound = kDefaultDegreeBound);
// Images of the generators under exp(λD); checked to preserve I.
std::vector<Poly> exp_map(const Derivation& D, const FieldElem& lambda, int bound = kDefaultDegreeBound);

// exp(T·D) with a formal parameter: images live in B[T].
struct FormalExp {
  RingPtr ring;  // B[T]
  std::string parameter;
  std::vector<Poly> images;
  Poly apply(const Poly& b) const;  // b over B's variables
};
FormalExp exp_formal(const Derivation& D, const std::string& parameter = "T", int bound = kDefaultDegreeBound);

// Applies the endomorphism x_i -> images[i] (images over `target`) to b.
Poly apply_homomorphism(const std::vector<Poly>& images, const RingPresentation& source,
                        const RingPresentation& target, const Poly& b);

}  // namespace lndkit
