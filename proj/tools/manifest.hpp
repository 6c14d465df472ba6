#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lndkit/embedding.hpp"

namespace lndkit::cli {

using json = nlohmann::ordered_json;

struct ConicRun {
  std::string a = "t";
  std::vector<std::string> lambda = {"0", "1", "t"};
  std::vector<std::string> slopes = {"0", "1", "t"};
};

struct RunBlock {
  std::uint64_t seed = 1;
  int bound = kDefaultDegreeBound;
  int trials = 20;
  std::string method = "both";
  int samples = 5;          // default count for point families
  int random_trials = 0;    // random coordinate trials, filtered by the relations
  int max_repeat = 3;
  int repeat = 1;
  int slice_degree = 3;
  int kernel_degree = 2;
  bool certify = true;
  std::vector<std::string> elements;  // ring elements for slice / kernel
  std::vector<std::string> lambda;    // scalars for exp
  ConicRun conic;
};

struct FamilySpec {
  PointFamily family;
  std::size_t count = 0;
};

struct Manifest {
  FieldPtr field;
  RingPtr ring;
  std::vector<Derivation> derivations;  // manifest order
  std::vector<std::string> lnd_requests;  // "asserted" or "certify(N)", per derivation
  std::vector<std::string> delta;         // names, defaults to every derivation
  std::vector<PointSpec> points;
  std::vector<FamilySpec> families;
  RunBlock run;

  const Derivation& derivation(const std::string& name) const;
  std::vector<Derivation> delta_members() const;
};

// Parses and validates a manifest. Errors name the offending location as a
// JSON pointer ("/derivations/D1/values/y") or as line:column for syntax errors.
Manifest load_manifest(const std::string& text);
Manifest load_manifest_file(const std::string& path);

// Field descriptor block: {"base": "Q" | p, "ratfunc": [...], "extensions": [{"name", "minpoly"}]}.
FieldPtr parse_field_block(const json& j, const std::string& where);

// Bundled fixtures.
std::vector<std::string> example_names();
json example_manifest(const std::string& name);

}  // namespace lndkit::cli
