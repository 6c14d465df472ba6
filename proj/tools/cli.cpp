#include "cli.hpp"

#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "lndkit/conic.hpp"
#include "lndkit/fml.hpp"
#include "manifest.hpp"

namespace lndkit::cli {

namespace {

struct Flags {
  std::string manifest;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<int> bound, trials;
  std::optional<std::string> method;
  std::vector<std::string> lambda;
  std::string example;
};

struct Report {
  std::string command;
  std::string field;
  std::string ring;
  json ring_json;
  std::vector<std::string> assumptions;
  std::vector<std::string> body;
  json result = json::object();
  bool violation = false;

  void line(std::string s) { body.push_back(std::move(s)); }
};

std::string join(const std::vector<std::string>& xs, const std::string& sep) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? sep : "") + xs[i];
  return s;
}

std::vector<std::string> poly_strings(const std::vector<Poly>& ps) {
  std::vector<std::string> out;
  for (const auto& p : ps) out.push_back(p.to_string());
  return out;
}

std::string ring_text(const RingPresentation& B) {
  std::string s = B.field()->describe() + "[" + join(*B.vars(), ", ") + "]";
  const auto& rels = B.relations().generators();
  if (!rels.empty()) s += "/(" + join(poly_strings(rels), ", ") + ")";
  return s;
}

std::string images_text(const VarList& names, const std::vector<Poly>& images) {
  std::vector<std::string> parts;
  for (std::size_t i = 0; i < images.size(); ++i) parts.push_back(names[i] + " -> " + images[i].to_string());
  return join(parts, ", ");
}

json images_json(const VarList& names, const std::vector<Poly>& images) {
  json j = json::object();
  for (std::size_t i = 0; i < images.size(); ++i) j[names[i]] = images[i].to_string();
  return j;
}

json verdict_json(const InjectivityVerdict& v) {
  json j;
  j["injective"] = v.injective;
  if (v.jacobian) {
    j["jacobian"] = *v.jacobian;
    j["rank"] = v.rank;
  }
  if (v.elimination) j["elimination"] = *v.elimination;
  return j;
}

void add_field_assumptions(const Field& K, std::vector<std::string>& out) {
  const auto& levels = K.levels();
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i].kind != FieldLevel::Kind::Extension) continue;
    std::string s = "asserted-irreducible: " + levels[i].name + " root of " +
                    K.up_format(static_cast<int>(i), levels[i].minpoly, "Z");
    if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
  }
}

Report start(const std::string& command, const Manifest& m, bool uses_delta) {
  Report r;
  r.command = command;
  r.field = m.field->describe();
  r.ring = ring_text(*m.ring);
  r.ring_json["vars"] = *m.ring->vars();
  r.ring_json["relations"] = poly_strings(m.ring->relations().generators());
  r.assumptions = assumptions_for(*m.ring, uses_delta ? m.delta_members() : m.derivations, uses_delta);
  for (const auto& p : m.points) add_field_assumptions(*p.field, r.assumptions);
  for (const auto& f : m.families) add_field_assumptions(*f.family.field, r.assumptions);
  return r;
}

std::string render_text(const Report& r) {
  std::ostringstream os;
  os << kVersion << "\n";
  os << "command: " << r.command << "\n";
  os << "field: " << r.field << "\n";
  os << "ring: " << r.ring << "\n";
  os << "assumptions:\n";
  for (const auto& a : r.assumptions) os << "  " << a << "\n";
  for (const auto& b : r.body) os << b << "\n";
  return os.str();
}

json render_json(const Report& r) {
  json j;
  j["version"] = kVersion;
  j["command"] = r.command;
  j["field"] = r.field;
  j["ring"] = r.ring_json;
  j["assumptions"] = r.assumptions;
  j["result"] = r.result;
  return j;
}

RunBlock effective_run(const Manifest& m, const Flags& f) {
  RunBlock r = m.run;
  if (f.seed) r.seed = *f.seed;
  if (f.bound) r.bound = *f.bound;
  if (f.trials) r.trials = *f.trials;
  if (f.method) {
    parse_method(*f.method);
    r.method = *f.method;
  }
  if (!f.lambda.empty()) r.lambda = f.lambda;
  return r;
}

std::vector<PointSpec> collect_points(const Manifest& m, const RunBlock& run) {
  std::vector<PointSpec> pts = m.points;
  std::mt19937_64 rng(run.seed);
  for (const auto& f : m.families) {
    auto more = family_points(*m.ring, f.family, f.count, rng);
    pts.insert(pts.end(), more.begin(), more.end());
  }
  if (run.random_trials > 0) {
    auto more = random_points(*m.ring, static_cast<std::size_t>(run.samples),
                              static_cast<std::size_t>(run.random_trials), rng);
    pts.insert(pts.end(), more.begin(), more.end());
  }
  return pts;
}

DerivationSet delta_of(const Manifest& m) {
  if (m.delta.empty()) throw Error(ErrorKind::InvalidInput, "manifest /derivations: no derivations given");
  return DerivationSet::make(m.ring, m.delta_members());
}

std::vector<Derivation> repeated(const DerivationSet& d, int r) {
  std::vector<Derivation> S;
  for (int k = 0; k < r; ++k) S.insert(S.end(), d.members.begin(), d.members.end());
  return S;
}

std::vector<FieldElem> parse_scalars(const std::vector<std::string>& texts, const FieldPtr& K) {
  std::vector<FieldElem> out;
  for (const auto& t : texts) out.push_back(parse_field_elem(t, K));
  return out;
}

// ---------------------------------------------------------------- commands

void cmd_check_lnd(const Manifest& m, const RunBlock& run, Report& r) {
  if (m.derivations.empty()) r.line("no derivations");
  json ds = json::object();
  for (std::size_t k = 0; k < m.derivations.size(); ++k) {
    const Derivation& D = m.derivations[k];
    r.line(D.to_string());
    r.line("  requested: " + m.lnd_requests[k] + "; status: " + D.status().to_string());
    std::vector<std::string> degs;
    json dj;
    dj["values"] = images_json(*m.ring->vars(), D.values());
    dj["status"] = D.status().to_string();
    for (std::size_t i = 0; i < m.ring->ngens(); ++i) {
      const std::string& x = (*m.ring->vars())[i];
      try {
        int d = D.degree(m.ring->variable(i), run.bound);
        degs.push_back("deg " + x + " = " + std::to_string(d));
        dj["degrees"][x] = d;
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::ZeroElement) {
          degs.push_back("deg " + x + " = -inf");
          dj["degrees"][x] = nullptr;
        } else if (e.kind() == ErrorKind::DegBoundExceeded) {
          degs.push_back("deg " + x + " > " + std::to_string(run.bound));
          dj["degrees"][x] = "> " + std::to_string(run.bound);
        } else {
          throw;
        }
      }
    }
    r.line("  " + join(degs, ", "));
    ds[D.name()] = dj;
  }
  r.result["derivations"] = ds;
}

void cmd_exp(const Manifest& m, const RunBlock& run, Report& r) {
  DerivationSet delta = delta_of(m);
  std::vector<std::string> texts = run.lambda.empty() ? std::vector<std::string>{"1"} : run.lambda;
  auto lambdas = parse_scalars(texts, m.field);
  json arr = json::array();
  for (const auto& D : delta.members) {
    for (const auto& lam : lambdas) {
      auto images = exp_map(D, lam, run.bound);
      auto inverse = exp_map(D, -lam, run.bound);
      bool identity = true;
      for (std::size_t i = 0; i < images.size(); ++i) {
        Poly back = apply_homomorphism(inverse, *m.ring, *m.ring, images[i]);
        if (!m.ring->is_zero(back - m.ring->variable(i))) identity = false;
      }
      std::string label = "exp(" + lam.to_string() + "*" + D.name() + ")";
      r.line(label + ": " + images_text(*m.ring->vars(), images));
      r.line("  relations preserved: yes; inverse exp(" + (-lam).to_string() + "*" + D.name() +
             ") gives identity: " + (identity ? "yes" : "no"));
      if (!identity) r.violation = true;
      json j;
      j["derivation"] = D.name();
      j["lambda"] = lam.to_string();
      j["images"] = images_json(*m.ring->vars(), images);
      j["inverse_identity"] = identity;
      arr.push_back(j);
    }
  }
  r.result["exp"] = arr;
}

void cmd_slice(const Manifest& m, const RunBlock& run, Report& r) {
  DerivationSet delta = delta_of(m);
  json arr = json::array();
  for (const auto& D : delta.members) {
    json j;
    j["derivation"] = D.name();
    LocalSlice sl;
    try {
      sl = find_local_slice(D, run.slice_degree);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NotFound) throw;
      r.line(D.name() + ": no local slice up to degree " + std::to_string(run.slice_degree));
      j["slice"] = nullptr;
      arr.push_back(j);
      continue;
    }
    r.line(D.name() + ": slice s = " + sl.s.to_string() + ", D(s) = " + sl.a.to_string());
    j["slice"] = sl.s.to_string();
    j["a"] = sl.a.to_string();
    json el = json::array();
    for (const auto& text : run.elements) {
      Poly b = m.ring->reduce(m.ring->parse(text));
      Localized pi = dixmier_project(D, sl, b, run.bound);
      bool killed = D.apply(pi.numerator).is_zero();
      if (!killed) r.violation = true;
      std::string den = pi.a_power == 0 ? "" : " / (" + sl.a.to_string() + ")^" + std::to_string(pi.a_power);
      r.line("  pi(" + b.to_string() + ") = (" + pi.numerator.to_string() + ")" + den +
             "; D(pi(b)) = 0: " + (killed ? "yes" : "no"));
      json e;
      e["b"] = b.to_string();
      e["numerator"] = pi.numerator.to_string();
      e["a_power"] = pi.a_power;
      e["in_kernel"] = killed;
      el.push_back(e);
    }
    j["projections"] = el;
    arr.push_back(j);
  }
  r.result["slices"] = arr;
}

void cmd_kernel(const Manifest& m, const RunBlock& run, Report& r) {
  DerivationSet delta = delta_of(m);
  auto basis = kernel_intersection_bounded(delta, run.kernel_degree);
  r.line("kernel of {" + join(m.delta, ", ") + "} up to degree " + std::to_string(run.kernel_degree) + ": " +
         std::to_string(basis.size()) + " basis element" + (basis.size() == 1 ? "" : "s"));
  for (const auto& b : basis) r.line("  " + b.to_string());
  r.result["degree"] = run.kernel_degree;
  r.result["basis"] = poly_strings(basis);
  json fixed = json::object();
  for (const auto& text : run.elements) {
    Poly b = m.ring->reduce(m.ring->parse(text));
    bool f = fixed_by_all(delta, b);
    r.line("fixed by all: " + b.to_string() + ": " + (f ? "yes" : "no"));
    fixed[b.to_string()] = f;
  }
  r.result["fixed"] = fixed;
}

void psi_lines(const EmbeddingMap& psi, Report& r, json& j) {
  r.line("S = (" + join(psi.sequence, ", ") + "), N = " + std::to_string(psi.nx()));
  for (std::size_t i = 0; i < psi.images.size(); ++i) {
    r.line("  " + (*psi.source->vars())[i] + " -> " + psi.images[i].to_string());
  }
  j["sequence"] = psi.sequence;
  j["xvars"] = psi.xvars;
  j["images"] = images_json(*psi.source->vars(), psi.images);
}

void cmd_psi(const Manifest& m, const RunBlock& run, Report& r) {
  DerivationSet delta = delta_of(m);
  EmbeddingMap psi = build_psi(m.ring, repeated(delta, run.repeat), run.bound);
  json j;
  psi_lines(psi, r, j);
  int rank = generic_jacobian_rank(psi);
  r.line("generic jacobian rank: " + std::to_string(rank) + ", dim B = " + std::to_string(m.ring->dimension()));
  j["generic_rank"] = rank;
  j["dimension"] = m.ring->dimension();
  r.result["psi"] = j;
}

void cmd_inject(const Manifest& m, const RunBlock& run, Report& r) {
  DerivationSet delta = delta_of(m);
  EmbeddingMap psi = build_psi(m.ring, repeated(delta, run.repeat), run.bound);
  InjectivityMethod method = parse_method(run.method);
  const std::size_t n = static_cast<std::size_t>(m.ring->dimension());
  json j;
  psi_lines(psi, r, j);
  r.line("dim B = " + std::to_string(n) + ", method = " + to_string(method));
  auto points = collect_points(m, run);
  json arr = json::array();
  std::size_t injective = 0;
  for (const auto& p : points) {
    json pj;
    pj["name"] = p.name;
    pj["coords"] = p.describe();
    try {
      Specialized spec = specialize(psi, p);
      InjectivityVerdict v;
      std::string via;
      if (psi.nx() > n) {
        ReducedImages red = eakin_reduce(*m.ring, spec, n, run.seed, run.trials, method);
        v = red.verdict;
        via = "; reduction " + red.reduction.describe(psi.xvars);
        pj["reduction"] = red.reduction.describe(psi.xvars);
        spec = red.images;
      } else {
        v = injectivity_test(*m.ring, spec.images, method);
      }
      if (v.injective) ++injective;
      r.line(p.name + " " + p.describe() + ": " + v.summary() + via);
      r.line("  images: " + images_text(*m.ring->vars(), spec.images));
      pj["verdict"] = verdict_json(v);
      pj["images"] = images_json(*m.ring->vars(), spec.images);
    } catch (const Error& e) {
      if (is_assumption_violation(e.kind())) r.violation = true;
      r.line(p.name + " " + p.describe() + ": error " + e.what());
      pj["error"] = e.what();
    }
    arr.push_back(pj);
  }
  r.line("points: " + std::to_string(points.size()) + ", injective: " + std::to_string(injective));
  j["points"] = arr;
  r.result["inject"] = j;
}

void certificate_lines(const LocusCertificate& c, const VarList& xvars, Report& r, json& j) {
  json ideals = json::array();
  for (std::size_t k = 0; k < c.ideals.size(); ++k) {
    r.line("I_" + std::to_string(k + 1) + " (" + xvars[k] + "): (" + join(poly_strings(c.ideals[k]), ", ") + ")");
    r.line("  leading coefficient " + c.leading[k].to_string() + " -> " + c.leading_image[k].to_string());
    json ij;
    ij["variable"] = xvars[k];
    ij["generators"] = poly_strings(c.ideals[k]);
    ij["annihilator"] = c.annihilators[k].to_string();
    ij["leading"] = c.leading[k].to_string();
    ij["leading_image"] = c.leading_image[k].to_string();
    ideals.push_back(ij);
  }
  r.line("product: " + std::to_string(c.product.size()) + " generators");
  j["ideals"] = ideals;
  j["product"] = poly_strings(c.product);
}

void cmd_certify(const Manifest& m, const RunBlock& run, Report& r) {
  DerivationSet delta = delta_of(m);
  EmbeddingMap psi = build_psi(m.ring, repeated(delta, run.repeat), run.bound);
  const std::size_t n = static_cast<std::size_t>(m.ring->dimension());
  json j;
  psi_lines(psi, r, j);
  if (psi.nx() > n) {
    ReducedEmbedding red = eakin_reduce_generic(psi, n, run.seed, run.trials);
    r.line("generic reduction: " + red.reduction.describe(psi.xvars));
    j["reduction"] = red.reduction.describe(psi.xvars);
    psi = red.psi;
  }
  LocusCertificate cert = certify_open_locus(psi);
  certificate_lines(cert, psi.xvars, r, j);
  json arr = json::array();
  for (const auto& p : collect_points(m, run)) {
    bool cov = cert.covers(p);
    r.line(p.name + " " + p.describe() + ": " + (cov ? "inside" : "outside") + " the certified locus");
    json pj;
    pj["name"] = p.name;
    pj["coords"] = p.describe();
    pj["covered"] = cov;
    arr.push_back(pj);
  }
  j["points"] = arr;
  r.result["certificate"] = j;
}

void cmd_pipeline(const Manifest& m, const RunBlock& run, Report& r) {
  DerivationSet delta = delta_of(m);
  PipelineConfig cfg;
  cfg.max_repeat = run.max_repeat;
  cfg.seed = run.seed;
  cfg.trials = run.trials;
  cfg.bound = run.bound;
  cfg.method = parse_method(run.method);
  cfg.certify = run.certify;
  auto points = collect_points(m, run);
  PipelineReport rep = fml_pipeline(delta, points, cfg);
  json j;
  for (const auto& note : rep.notes) r.line("note: " + note);
  r.line("repeats r = " + std::to_string(rep.repeats) + ", N = " + std::to_string(rep.N) + ", n = " +
         std::to_string(rep.n));
  j["repeats"] = rep.repeats;
  j["N"] = rep.N;
  j["n"] = rep.n;
  json pj;
  psi_lines(rep.psi, r, pj);
  j["psi"] = pj;
  if (rep.generic_reduction) {
    r.line("generic reduction: " + rep.generic_reduction->describe(rep.psi.xvars));
    r.line("reduced: " + images_text(*m.ring->vars(), rep.reduced.images));
    j["reduction"] = rep.generic_reduction->describe(rep.psi.xvars);
    j["reduced"] = images_json(*m.ring->vars(), rep.reduced.images);
  }
  if (rep.certificate) {
    json cj;
    certificate_lines(*rep.certificate, rep.reduced.xvars, r, cj);
    j["certificate"] = cj;
  }
  json arr = json::array();
  for (const auto& p : rep.samples.points) {
    json pt;
    pt["name"] = p.name;
    pt["coords"] = p.coords;
    std::string loc;
    if (p.covered) {
      loc = *p.covered ? "; in locus" : "; outside locus";
      pt["covered"] = *p.covered;
    }
    if (p.error_kind) {
      r.line(p.name + " " + p.coords + ": error " + p.error);
      pt["error"] = p.error;
      if (is_assumption_violation(*p.error_kind)) r.violation = true;
    } else {
      r.line(p.name + " " + p.coords + ": " + p.verdict.summary() + loc +
             (p.certificate_violation ? "; CERTIFICATE VIOLATION" : ""));
      r.line("  images: " + images_text(*m.ring->vars(), p.images.images));
      pt["verdict"] = verdict_json(p.verdict);
      pt["images"] = images_json(*m.ring->vars(), p.images.images);
      pt["certificate_violation"] = p.certificate_violation;
    }
    arr.push_back(pt);
  }
  j["points"] = arr;
  const SampleReport& s = rep.samples;
  r.line("points: " + std::to_string(s.points.size()) + ", injective: " + std::to_string(s.injective) +
         ", not injective: " + std::to_string(s.not_injective) + ", in locus: " + std::to_string(s.covered) +
         ", violations: " + std::to_string(s.violations) + ", errors: " + std::to_string(s.errors));
  r.line(std::string("result: ") + (rep.success ? "success" : "failure"));
  if (s.violations > 0) r.violation = true;
  j["success"] = rep.success;
  r.result["pipeline"] = j;
}

void cmd_xk_conic(const Manifest& m, const RunBlock& run, Report& r) {
  const VarList& v = *m.ring->vars();
  if (v.size() != 2) throw Error(ErrorKind::InvalidInput, "manifest /ring/vars: the conic needs two variables");
  ConicSetup c = conic_setup(m.field, run.conic.a, v[0], v[1]);
  r.line("derivation pipeline unavailable (char " + std::to_string(m.field->characteristic()) + ")");
  r.line("conic: " + ring_text(*c.ring));
  std::vector<std::string> lambdas = run.lambda.empty() ? run.conic.lambda : run.lambda;
  std::size_t inside = 0, outside = 0;
  json arr = json::array();
  auto emit = [&](const ConicPoint& p, const std::string& member_label) {
    (p.in_locus ? inside : outside) += 1;
    std::vector<std::string> coords;
    for (const auto& x : p.coords) coords.push_back(x.to_string());
    r.line(p.label + ": residue field " + p.field->describe() + ", point (" + join(coords, ", ") + ")");
    r.line("  ideal (" + join(poly_strings(p.ideal), ", ") + ") proper: " + (p.ideal_proper ? "yes" : "no") + "; " +
           member_label + ": " + (p.membership ? "yes" : "no"));
    r.line("  square root of " + c.a.to_string() + ": " + p.witness + "; in X_k(B): " + (p.in_locus ? "yes" : "no"));
    json j;
    j["label"] = p.label;
    j["field"] = p.field->describe();
    j["coords"] = coords;
    j["ideal"] = poly_strings(p.ideal);
    j["proper"] = p.ideal_proper;
    j["membership"] = p.membership;
    j["witness"] = p.witness;
    j["in_locus"] = p.in_locus;
    arr.push_back(j);
  };
  for (const auto& l : lambdas) emit(conic_point_lambda(c, l), "(X + lambda)^2 + a in m");
  for (const auto& s : run.conic.slopes) emit(conic_point_slope(c, s), "relation in m");
  r.line("in X_k(B): " + std::to_string(inside) + ", outside: " + std::to_string(outside));
  r.result["points"] = arr;
  r.result["inside"] = inside;
  r.result["outside"] = outside;
}

using Command = void (*)(const Manifest&, const RunBlock&, Report&);

struct CommandInfo {
  const char* name;
  const char* help;
  Command fn;
  bool uses_delta;
};

const std::vector<CommandInfo>& commands() {
  static const std::vector<CommandInfo> table = {
      {"check-lnd", "verify derivations and their local nilpotency", cmd_check_lnd, false},
      {"exp", "exponential automorphisms exp(lambda*D)", cmd_exp, true},
      {"slice", "local slices and Dixmier projections", cmd_slice, true},
      {"kernel", "bounded-degree common kernel of Delta", cmd_kernel, true},
      {"psi", "the embedding homomorphism Psi_S", cmd_psi, true},
      {"inject", "injectivity of Psi at the manifest points", cmd_inject, true},
      {"certify", "certified open locus of injectivity", cmd_certify, true},
      {"pipeline", "full embedding pipeline for Delta", cmd_pipeline, true},
      {"xk-conic", "characteristic 2 conic classifier", cmd_xk_conic, false},
  };
  return table;
}

void write_file(const std::string& path, const std::string& data) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::InvalidInput, "cannot write '" + path + "'");
  f << data;
}

int run_command(const CommandInfo& c, const Flags& f, std::ostream& out) {
  if (f.manifest.empty()) throw Error(ErrorKind::InvalidInput, "--manifest is required");
  Manifest m = load_manifest_file(f.manifest);
  RunBlock run = effective_run(m, f);
  Report r = start(c.name, m, c.uses_delta);
  c.fn(m, run, r);
  std::string text = render_text(r);
  out << text;
  if (!f.out.empty()) {
    write_file(f.out, text);
    write_file(f.out + ".json", render_json(r).dump(2) + "\n");
  }
  return r.violation ? 2 : 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Locally nilpotent derivations toolkit", "lndkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  Flags f;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--manifest", f.manifest, "manifest file (JSON)");
    sub->add_option("--out", f.out, "write the text report to PATH and the structured dump to PATH.json");
    sub->add_option("--seed", f.seed, "seed for randomized searches");
    sub->add_option("--bound", f.bound, "nilpotency degree bound")->check(CLI::PositiveNumber);
    sub->add_option("--trials", f.trials, "reduction trials")->check(CLI::PositiveNumber);
    sub->add_option("--method", f.method, "injectivity method")
        ->check(CLI::IsMember({"jacobian", "elimination", "both"}));
    sub->add_option("--lambda", f.lambda, "comma separated scalars")->delimiter(',');
  };
  std::vector<std::pair<CLI::App*, const CommandInfo*>> subs;
  for (const auto& c : commands()) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    add_common(sub);
    subs.emplace_back(sub, &c);
  }
  CLI::App* ex = app.add_subcommand("example", "print a bundled manifest");
  ex->add_option("name", f.example, "danielewski, char2-conic, quadric-qi or affine-plane")->required();
  ex->add_option("--out", f.out, "also write the manifest to PATH");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (ex->parsed()) {
      std::string text = example_manifest(f.example).dump(2) + "\n";
      out << text;
      if (!f.out.empty()) write_file(f.out, text);
      return 0;
    }
    for (const auto& [sub, info] : subs) {
      if (sub->parsed()) return run_command(*info, f, out);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return is_assumption_violation(e.kind()) ? 2 : 1;
  }
  return 1;
}

}  // namespace lndkit::cli
