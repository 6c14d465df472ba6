#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lndkit/embedding.hpp"

namespace lndkit {

// Δ: named locally nilpotent derivations of one ring. K_Δ = k is an input
// assumption recorded in every report, never checked.
struct DerivationSet {
  RingPtr ring;
  std::vector<Derivation> members;
  bool trivial_fixed_field_asserted = true;

  static DerivationSet make(RingPtr ring, std::vector<Derivation> members);
};

// exp(T·D)(b) = b for all D, and D(b) = 0 for all D; both are computed and
// must agree (InternalDisagreement otherwise).
bool fixed_by_all(const DerivationSet& delta, const Poly& b);

// Basis of { b of degree <= bound in normal form : D(b) = 0 for all D in Δ }.
// The ambient space is spanned by the standard monomials of degree <= bound.
std::vector<Poly> kernel_intersection_bounded(const DerivationSet& delta, int degree_bound,
                                              std::size_t max_monomials = 4000);

struct PipelineConfig {
  int max_repeat = 3;        // Δ repeated r = 1..max_repeat times
  std::uint64_t seed = 1;
  int trials = 20;           // Eakin trials
  int bound = kDefaultDegreeBound;
  InjectivityMethod method = InjectivityMethod::Both;
  bool certify = true;
  bool parallel = true;
};

struct PipelineReport {
  std::vector<std::string> assumptions;
  int repeats = 0;
  std::size_t N = 0;  // |S|
  std::size_t n = 0;  // dim B
  EmbeddingMap psi;                      // Ψ_S
  std::optional<Reduction> generic_reduction;
  EmbeddingMap reduced;                  // Ψ after reduction to n variables
  std::optional<LocusCertificate> certificate;
  SampleReport samples;
  bool success = false;
  std::vector<std::string> notes;
};

// S = Δ repeated r times → Ψ_S → generic injectivity → reduction to dim B
// variables → certificate → per-point tests. Throws GenericNotInjective once
// the repeat budget is used up.
PipelineReport fml_pipeline(const DerivationSet& delta, const std::vector<PointSpec>& points, const PipelineConfig& config);

// Assumption lines for a ring and a set of derivations.
std::vector<std::string> assumptions_for(const RingPresentation& B, const std::vector<Derivation>& ds, bool k_delta);

}  // namespace lndkit
