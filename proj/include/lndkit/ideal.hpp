#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "lndkit/poly.hpp"

namespace lndkit {

struct GroebnerOptions {
  // Cap on S-polynomial reductions; exceeding it raises ResourceExceeded.
  std::size_t max_pair_reductions = 100000;
};

// A reduced Groebner basis together with its term order. `sorted` holds the
// same polynomials with terms sorted by `order`, ready for reduction.
struct GroebnerBasis {
  MonomialOrder order;
  std::vector<Poly> polys;
  std::vector<std::vector<Term>> sorted;

  // Unique remainder of f modulo the basis.
  Poly reduce(const Poly& f) const;
  bool is_unit_ideal() const;
};

// Buchberger's algorithm: normal selection strategy, Gebauer-Moeller pair
// update (product and chain criteria), reduced and monic output.
GroebnerBasis groebner_basis(const std::vector<Poly>& gens, const MonomialOrder& order,
                             const GroebnerOptions& options = {});

class Ideal {
 public:
  Ideal(FieldPtr field, VarsPtr vars, std::vector<Poly> generators, GroebnerOptions options = {});

  const FieldPtr& field() const { return field_; }
  const VarsPtr& vars() const { return vars_; }
  const std::vector<Poly>& generators() const { return gens_; }

  // Cached per order; concurrent callers trigger at most one computation.
  std::shared_ptr<const GroebnerBasis> groebner(const MonomialOrder& order = MonomialOrder::grevlex()) const;
  Poly normal_form(const Poly& f, const MonomialOrder& order = MonomialOrder::grevlex()) const;
  bool member(const Poly& f) const { return normal_form(f).is_zero(); }
  bool is_zero_ideal() const;
  bool is_proper() const { return !groebner()->is_unit_ideal(); }
  bool contains(const Ideal& other) const;

  Ideal embed_field(const FieldPtr& target) const;
  Ideal with_vars(const VarsPtr& vars) const;
  Ideal plus(const std::vector<Poly>& more) const;
  std::string to_string() const;

 private:
  struct Cache {
    std::mutex mutex;
    std::map<std::string, std::shared_ptr<const GroebnerBasis>> bases;
  };

  FieldPtr field_;
  VarsPtr vars_;
  std::vector<Poly> gens_;
  GroebnerOptions options_;
  std::shared_ptr<Cache> cache_;
};

// Generators of I ∩ k[keep], expressed over the variable list `keep`.
Ideal eliminate(const Ideal& ideal, const std::vector<std::string>& keep);

class RingPresentation;
using RingPtr = std::shared_ptr<const RingPresentation>;

// B = k[x_1..x_m]/I. The domain property is asserted by the caller; only
// properness of I is verified.
class RingPresentation {
 public:
  static RingPtr make(FieldPtr field, VarsPtr vars, std::vector<Poly> relations, bool asserted_domain = true,
                      std::optional<int> asserted_dimension = std::nullopt, GroebnerOptions options = {});

  const FieldPtr& field() const { return field_; }
  const VarsPtr& vars() const { return vars_; }
  std::size_t ngens() const { return vars_->size(); }
  const Ideal& relations() const { return relations_; }
  bool asserted_domain() const { return asserted_domain_; }
  std::optional<int> asserted_dimension() const { return asserted_dimension_; }

  Poly reduce(const Poly& f) const { return relations_.normal_form(f); }
  bool is_zero(const Poly& f) const { return reduce(f).is_zero(); }
  Poly parse(const std::string& text) const;
  Poly variable(std::size_t i) const { return Poly::variable(field_, vars_, (*vars_)[i]); }
  Poly constant(long long n) const { return Poly::from_int(field_, vars_, n); }

  // Largest subset S of the variables with I ∩ k[S] = 0, found by
  // elimination over subsets (largest first). Computed once.
  int dimension() const;

  // B[extra]; same relations over the longer variable list.
  RingPtr extended(const VarList& extra) const;
  // K ⊗ B for an extension field K.
  RingPtr base_change(const FieldPtr& target) const;

 private:
  RingPresentation(FieldPtr field, VarsPtr vars, Ideal relations)
      : field_(std::move(field)), vars_(std::move(vars)), relations_(std::move(relations)) {}

  FieldPtr field_;
  VarsPtr vars_;
  Ideal relations_;
  bool asserted_domain_ = true;
  std::optional<int> asserted_dimension_;
  GroebnerOptions options_;
  mutable std::once_flag dim_once_;
  mutable int dim_ = -1;
};

struct KernelResult {
  Ideal kernel;    // over the source variables, coefficients in the target field
  bool injective;  // kernel ⊆ I_source
};

// Kernel of B -> T = K[y]/J sending x_i to images[i], computed as
// (I_source + J + (x_i - image_i)) ∩ K[x].
KernelResult algebra_map_kernel(const RingPresentation& source, const std::vector<Poly>& images,
                                const Ideal& target_relations);

}  // namespace lndkit
