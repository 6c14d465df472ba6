#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "lndkit/derivation.hpp"

namespace lndkit {

// Ψ_S : B -> B[X_1..X_N], stored as the images of the generators of B.
struct EmbeddingMap {
  RingPtr source;                      // B
  RingPtr target;                      // B[X]
  std::vector<std::string> sequence;   // names of D_1..D_N
  VarList xvars;                       // X_1..X_N
  std::vector<Poly> images;            // over target->vars(), reduced mod I

  std::size_t nx() const { return xvars.size(); }
  Poly apply(const Poly& b) const;
  // Positions of the X variables in target->vars().
  std::vector<std::size_t> x_indices() const;
};

// Fresh names X1..XN (or with another stem) avoiding the ring and field symbols.
VarList fresh_names(const RingPresentation& B, const std::string& stem, std::size_t count);

// Ψ_S = ε_N ∘ ... ∘ ε_1 with ε_k = exp(X_k δ_k), δ_k the extension of D_k to B[X]
// killing X. Generators are processed in parallel.
EmbeddingMap build_psi(const RingPtr& B, const std::vector<Derivation>& S, int bound = kDefaultDegreeBound);
// Same computation on one thread; kept as the reference for the parallel one.
EmbeddingMap build_psi_serial(const RingPtr& B, const std::vector<Derivation>& S, int bound = kDefaultDegreeBound);

// A maximal ideal of B given by coordinates in an extension field of k.
struct PointSpec {
  std::string name;
  FieldPtr field;
  std::vector<FieldElem> coords;  // generator order
  std::string describe() const;
};

// Validates that the relations vanish at the coordinates (InvalidPoint).
PointSpec make_point(const RingPresentation& B, std::string name, FieldPtr field, std::vector<FieldElem> coords);

// Ψ^m: images over κ[X].
struct Specialized {
  FieldPtr field;
  VarsPtr vars;
  std::vector<Poly> images;
};
Specialized specialize(const EmbeddingMap& psi, const PointSpec& point);

enum class InjectivityMethod { Jacobian, Elimination, Both };
InjectivityMethod parse_method(const std::string& s);
std::string to_string(InjectivityMethod m);

struct InjectivityVerdict {
  bool injective = false;
  std::optional<bool> jacobian;
  std::optional<bool> elimination;
  int rank = -1;  // jacobian rank when computed
  std::string summary() const;
};

// Injectivity of κ ⊗ B -> κ[X], x_i -> images[i]. The jacobian route compares
// the rank of the images with dim B; the elimination route computes the kernel.
// Method Both throws OracleDisagreement when the two differ.
InjectivityVerdict injectivity_test(const RingPresentation& B, const std::vector<Poly>& images, InjectivityMethod method);

// Rank of the Jacobian of Ψ with respect to X over Frac(B)(X), read off from
// the largest minor that is nonzero modulo I·B[X].
int generic_jacobian_rank(const EmbeddingMap& psi);

// Ideals I_j of B (one per target variable) whose common non-vanishing locus
// is certified to consist of points where Ψ^m is injective.
struct LocusCertificate {
  std::vector<std::vector<Poly>> ideals;  // generators of I_j, over B's variables
  std::vector<Poly> annihilators;         // P_j in k[x, u, X_j]
  std::vector<Poly> leading;              // c_j in k[x, u]
  std::vector<Poly> leading_image;        // Ψ̂(c_j) in B[X], reduced
  std::vector<Poly> product;              // generators of I_1 ⋯ I_n
  // True when every I_j has a generator that does not vanish at the point.
  bool covers(const PointSpec& point) const;
};

LocusCertificate certify_open_locus(const EmbeddingMap& psi);

// Linear substitution X_i -> Σ_j a_ij Y_j.
struct Reduction {
  std::vector<std::vector<long long>> matrix;  // N rows, n columns
  int trial = 0;                               // 0 = coordinate projection
  VarList yvars;
  std::string describe(const VarList& xvars) const;
};

struct ReducedImages {
  Reduction reduction;
  Specialized images;
  InjectivityVerdict verdict;
};

// Integer matrices from a seeded stream with entries in [-3, 3]; trial 0 is
// the projection keeping X_1..X_n. Throws ReductionFailed after `trials`.
ReducedImages eakin_reduce(const RingPresentation& B, const Specialized& images, std::size_t target_dim,
                           std::uint64_t seed, int trials, InjectivityMethod method);

struct ReducedEmbedding {
  Reduction reduction;
  EmbeddingMap psi;
};
// The generic version, applied to Ψ itself: the result must keep generic rank n.
ReducedEmbedding eakin_reduce_generic(const EmbeddingMap& psi, std::size_t target_dim, std::uint64_t seed, int trials);

// Parametrized point family: coordinates are expressions in the parameters
// (and field constants), optionally over an extension field.
struct PointFamily {
  std::string name;
  FieldPtr field;
  std::vector<std::string> params;
  std::vector<Expr> coords;  // generator order
};

// `count` valid points from the family; parameter values come from the seeded
// stream, draws that divide by zero are skipped (at most 50*count draws).
std::vector<PointSpec> family_points(const RingPresentation& B, const PointFamily& family, std::size_t count,
                                     std::mt19937_64& rng);
// Random coordinates in k, kept when the relations vanish.
std::vector<PointSpec> random_points(const RingPresentation& B, std::size_t count, std::size_t trials,
                                     std::mt19937_64& rng);

struct PointResult {
  std::string name;
  std::string coords;
  InjectivityVerdict verdict;
  std::optional<bool> covered;  // inside the certified locus
  bool certificate_violation = false;
  Specialized images;
  std::string error;            // non-empty when the test raised
  std::optional<ErrorKind> error_kind;
};

struct SampleReport {
  std::vector<PointResult> points;
  std::size_t injective = 0;
  std::size_t not_injective = 0;
  std::size_t covered = 0;
  std::size_t violations = 0;
  std::size_t errors = 0;
};

// Per-point injectivity tests, run concurrently; results keep input order.
SampleReport sample_and_test(const EmbeddingMap& psi, const std::vector<PointSpec>& points, InjectivityMethod method,
                             const LocusCertificate* certificate = nullptr);
SampleReport sample_and_test_serial(const EmbeddingMap& psi, const std::vector<PointSpec>& points,
                                    InjectivityMethod method, const LocusCertificate* certificate = nullptr);

}  // namespace lndkit
