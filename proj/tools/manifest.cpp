#include "manifest.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace lndkit::cli {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& msg, ErrorKind kind = ErrorKind::InvalidInput) {
  throw Error(kind, "manifest " + (where.empty() ? std::string("/") : where) + ": " + msg);
}

// Runs fn, prefixing library errors with the manifest location.
template <typename Fn>
auto at(const std::string& where, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    if (e.detail().rfind("manifest ", 0) == 0) throw;
    fail(where, e.detail(), e.kind());
  }
}

std::string escape(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~') {
      out += "~0";
    } else if (c == '/') {
      out += "~1";
    } else {
      out += c;
    }
  }
  return out;
}

std::string child(const std::string& where, const std::string& key) { return where + "/" + escape(key); }
std::string child(const std::string& where, std::size_t idx) { return where + "/" + std::to_string(idx); }

void expect_object(const json& j, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
}

void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  expect_object(j, where);
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = std::any_of(allowed.begin(), allowed.end(), [&](const char* a) { return it.key() == a; });
    if (!ok) fail(child(where, it.key()), "unknown key '" + it.key() + "'");
  }
}

std::string get_string(const json& j, const std::string& where) {
  if (!j.is_string()) fail(where, "expected a string");
  return j.get<std::string>();
}

long long get_int(const json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where, "expected an integer");
  return j.get<long long>();
}

bool get_bool(const json& j, const std::string& where) {
  if (!j.is_boolean()) fail(where, "expected true or false");
  return j.get<bool>();
}

std::vector<std::string> get_strings(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get_string(j[i], child(where, i)));
  return out;
}

std::string line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

RunBlock parse_run(const json& j, const std::string& where) {
  RunBlock r;
  check_keys(j, where,
             {"seed", "bound", "trials", "method", "samples", "random_trials", "max_repeat", "repeat", "slice_degree",
              "kernel_degree", "certify", "elements", "lambda", "conic"});
  auto positive = [&](const char* key, int& slot, long long lo) {
    if (!j.contains(key)) return;
    long long v = get_int(j[key], child(where, key));
    if (v < lo || v > 1000000) fail(child(where, key), "out of range");
    slot = static_cast<int>(v);
  };
  if (j.contains("seed")) {
    long long s = get_int(j["seed"], child(where, "seed"));
    if (s < 0) fail(child(where, "seed"), "must be non-negative");
    r.seed = static_cast<std::uint64_t>(s);
  }
  positive("bound", r.bound, 1);
  positive("trials", r.trials, 1);
  positive("samples", r.samples, 0);
  positive("random_trials", r.random_trials, 0);
  positive("max_repeat", r.max_repeat, 1);
  positive("repeat", r.repeat, 1);
  positive("slice_degree", r.slice_degree, 1);
  positive("kernel_degree", r.kernel_degree, 0);
  if (j.contains("method")) {
    r.method = get_string(j["method"], child(where, "method"));
    at(child(where, "method"), [&] { return parse_method(r.method); });
  }
  if (j.contains("certify")) r.certify = get_bool(j["certify"], child(where, "certify"));
  if (j.contains("elements")) r.elements = get_strings(j["elements"], child(where, "elements"));
  if (j.contains("lambda")) r.lambda = get_strings(j["lambda"], child(where, "lambda"));
  if (j.contains("conic")) {
    const std::string w = child(where, "conic");
    const json& c = j["conic"];
    check_keys(c, w, {"a", "lambda", "slopes"});
    if (c.contains("a")) r.conic.a = get_string(c["a"], child(w, "a"));
    if (c.contains("lambda")) r.conic.lambda = get_strings(c["lambda"], child(w, "lambda"));
    if (c.contains("slopes")) r.conic.slopes = get_strings(c["slopes"], child(w, "slopes"));
  }
  return r;
}

std::map<std::string, std::string> coordinate_texts(const json& j, const std::string& where, const RingPresentation& B) {
  expect_object(j, where);
  std::map<std::string, std::string> out;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(B.vars()->begin(), B.vars()->end(), it.key()) == B.vars()->end()) {
      fail(child(where, it.key()), "'" + it.key() + "' is not a generator", ErrorKind::UnknownVariable);
    }
    out[it.key()] = get_string(it.value(), child(where, it.key()));
  }
  for (const auto& v : *B.vars()) {
    if (!out.count(v)) fail(where, "no coordinate for generator '" + v + "'");
  }
  return out;
}

}  // namespace

FieldPtr parse_field_block(const json& j, const std::string& where) {
  check_keys(j, where, {"base", "ratfunc", "extensions", "root_search_bound"});
  if (!j.contains("base")) fail(where, "missing key 'base'");
  FieldPtr K;
  const json& b = j["base"];
  if (b.is_string() && b.get<std::string>() == "Q") {
    K = Field::rationals();
  } else if (b.is_number_integer()) {
    K = at(child(where, "base"), [&] { return Field::prime_field(b.get<long long>()); });
  } else {
    fail(child(where, "base"), "expected \"Q\" or a prime");
  }
  int bound = 3;
  if (j.contains("root_search_bound")) {
    bound = static_cast<int>(get_int(j["root_search_bound"], child(where, "root_search_bound")));
  }
  if (j.contains("ratfunc")) {
    auto names = get_strings(j["ratfunc"], child(where, "ratfunc"));
    for (std::size_t i = 0; i < names.size(); ++i) {
      K = at(child(child(where, "ratfunc"), i), [&] { return K->with_ratfunc(names[i]); });
    }
  }
  if (j.contains("extensions")) {
    const std::string w = child(where, "extensions");
    if (!j["extensions"].is_array()) fail(w, "expected an array");
    for (std::size_t i = 0; i < j["extensions"].size(); ++i) {
      const json& e = j["extensions"][i];
      const std::string we = child(w, i);
      check_keys(e, we, {"name", "minpoly"});
      if (!e.contains("name") || !e.contains("minpoly")) fail(we, "need 'name' and 'minpoly'");
      std::string name = get_string(e["name"], child(we, "name"));
      std::string mp = get_string(e["minpoly"], child(we, "minpoly"));
      K = at(child(we, "minpoly"), [&] { return extend_field(K, name, mp, "Z", bound); });
    }
  }
  return K;
}

const Derivation& Manifest::derivation(const std::string& name) const {
  for (const auto& d : derivations) {
    if (d.name() == name) return d;
  }
  throw Error(ErrorKind::InvalidInput, "no derivation named '" + name + "'");
}

std::vector<Derivation> Manifest::delta_members() const {
  std::vector<Derivation> out;
  for (const auto& n : delta) out.push_back(derivation(n));
  return out;
}

Manifest load_manifest(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::SyntaxError, "manifest " + line_col(text, e.byte == 0 ? 0 : e.byte - 1) + ": invalid JSON");
  }
  check_keys(root, "", {"field", "ring", "derivations", "delta", "points", "run"});
  Manifest m;
  if (root.contains("run")) m.run = parse_run(root["run"], "/run");
  if (!root.contains("field")) fail("", "missing key 'field'");
  if (!root.contains("ring")) fail("", "missing key 'ring'");
  m.field = parse_field_block(root["field"], "/field");

  const json& r = root["ring"];
  check_keys(r, "/ring", {"vars", "relations", "assert"});
  if (!r.contains("vars")) fail("/ring", "missing key 'vars'");
  auto names = get_strings(r["vars"], "/ring/vars");
  if (names.empty()) fail("/ring/vars", "need at least one variable");
  VarsPtr vars = at("/ring/vars", [&] { return make_vars(names); });
  std::vector<Poly> rels;
  if (r.contains("relations")) {
    auto texts = get_strings(r["relations"], "/ring/relations");
    for (std::size_t i = 0; i < texts.size(); ++i) {
      rels.push_back(at(child("/ring/relations", i), [&] { return parse_poly(texts[i], vars, m.field); }));
    }
  }
  bool domain = true;
  std::optional<int> dim;
  if (r.contains("assert")) {
    const json& a = r["assert"];
    check_keys(a, "/ring/assert", {"domain", "dimension"});
    if (a.contains("domain")) domain = get_bool(a["domain"], "/ring/assert/domain");
    if (a.contains("dimension")) dim = static_cast<int>(get_int(a["dimension"], "/ring/assert/dimension"));
  }
  m.ring = at("/ring", [&] { return RingPresentation::make(m.field, vars, rels, domain, dim); });
  if (dim && *dim != m.ring->dimension()) {
    fail("/ring/assert/dimension", "asserted " + std::to_string(*dim) + " but elimination gives " +
                                       std::to_string(m.ring->dimension()));
  }

  if (root.contains("derivations")) {
    const json& ds = root["derivations"];
    expect_object(ds, "/derivations");
    for (auto it = ds.begin(); it != ds.end(); ++it) {
      const std::string w = child("/derivations", it.key());
      check_keys(it.value(), w, {"values", "lnd"});
      if (!it.value().contains("values")) fail(w, "missing key 'values'");
      const json& vals = it.value()["values"];
      expect_object(vals, child(w, "values"));
      std::map<std::string, std::string> texts;
      for (auto v = vals.begin(); v != vals.end(); ++v) {
        texts[v.key()] = get_string(v.value(), child(child(w, "values"), v.key()));
      }
      // locate parse errors at the offending value
      for (const auto& [k, t] : texts) {
        if (std::find(vars->begin(), vars->end(), k) == vars->end()) continue;
        at(child(child(w, "values"), k), [&] { return parse_poly(t, vars, m.field); });
      }
      Derivation d = at(w, [&] { return check_derivation(m.ring, it.key(), texts); });
      std::string lnd = "certify(16)";
      if (it.value().contains("lnd")) lnd = get_string(it.value()["lnd"], child(w, "lnd"));
      if (lnd == "asserted") {
        d = d.with_status(NilpotencyStatus::asserted());
      } else if (lnd.rfind("certify(", 0) == 0 && lnd.back() == ')') {
        int bound = 0;
        try {
          bound = std::stoi(lnd.substr(8, lnd.size() - 9));
        } catch (...) {
          fail(child(w, "lnd"), "expected certify(N)");
        }
        if (bound < 1) fail(child(w, "lnd"), "bound must be positive");
        d = d.with_status(certify_lnd(d, bound));
      } else {
        fail(child(w, "lnd"), "expected \"asserted\" or \"certify(N)\"");
      }
      m.lnd_requests.push_back(lnd);
      m.derivations.push_back(std::move(d));
    }
  }
  if (root.contains("delta")) {
    m.delta = get_strings(root["delta"], "/delta");
    for (std::size_t i = 0; i < m.delta.size(); ++i) {
      bool found = std::any_of(m.derivations.begin(), m.derivations.end(),
                               [&](const Derivation& d) { return d.name() == m.delta[i]; });
      if (!found) fail(child("/delta", i), "no derivation named '" + m.delta[i] + "'", ErrorKind::UnknownSymbol);
    }
  } else {
    for (const auto& d : m.derivations) m.delta.push_back(d.name());
  }

  if (root.contains("points")) {
    const json& ps = root["points"];
    if (!ps.is_array()) fail("/points", "expected an array");
    std::set<std::string> names_seen;
    for (std::size_t i = 0; i < ps.size(); ++i) {
      const std::string w = child("/points", i);
      const json& p = ps[i];
      expect_object(p, w);
      FieldPtr kappa = m.field;
      if (p.contains("field")) kappa = parse_field_block(p["field"], child(w, "field"));
      if (!m.field->embeds_into(*kappa)) {
        fail(child(w, "field"), m.field->describe() + " does not embed into " + kappa->describe(), ErrorKind::FieldMismatch);
      }
      if (p.contains("family")) {
        check_keys(p, w, {"family", "params", "coords", "count", "field"});
        FamilySpec f;
        f.family.name = get_string(p["family"], child(w, "family"));
        f.family.field = kappa;
        if (p.contains("params")) f.family.params = get_strings(p["params"], child(w, "params"));
        if (!p.contains("coords")) fail(w, "missing key 'coords'");
        auto texts = coordinate_texts(p["coords"], child(w, "coords"), *m.ring);
        for (const auto& v : *m.ring->vars()) {
          const std::string wc = child(child(w, "coords"), v);
          Expr e = at(wc, [&] { return Expr::parse(texts[v]); });
          for (const auto& s : e.symbols()) {
            bool known = kappa->has_symbol(s) ||
                         std::find(f.family.params.begin(), f.family.params.end(), s) != f.family.params.end();
            if (!known) fail(wc, "unknown symbol '" + s + "'", ErrorKind::UnknownSymbol);
          }
          f.family.coords.push_back(std::move(e));
        }
        f.count = static_cast<std::size_t>(m.run.samples);
        if (p.contains("count")) f.count = static_cast<std::size_t>(get_int(p["count"], child(w, "count")));
        m.families.push_back(std::move(f));
      } else {
        check_keys(p, w, {"name", "coords", "field"});
        std::string name = p.contains("name") ? get_string(p["name"], child(w, "name")) : "p" + std::to_string(i + 1);
        if (!p.contains("coords")) fail(w, "missing key 'coords'");
        auto texts = coordinate_texts(p["coords"], child(w, "coords"), *m.ring);
        std::vector<FieldElem> coords;
        for (const auto& v : *m.ring->vars()) {
          coords.push_back(at(child(child(w, "coords"), v), [&] { return parse_field_elem(texts[v], kappa); }));
        }
        m.points.push_back(at(w, [&] { return make_point(*m.ring, name, kappa, coords); }));
      }
    }
  }
  return m;
}

Manifest load_manifest_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot read manifest '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return load_manifest(ss.str());
}

// ---------------------------------------------------------------- fixtures

std::vector<std::string> example_names() { return {"danielewski", "char2-conic", "quadric-qi", "affine-plane"}; }

json example_manifest(const std::string& name) {
  if (name == "danielewski") {
    return json::parse(R"json({
  "field": {"base": "Q"},
  "ring": {"vars": ["x", "y", "z"], "relations": ["x*y + z^2 + 1"], "assert": {"domain": true, "dimension": 2}},
  "derivations": {
    "D1": {"values": {"x": "0", "y": "-2*z", "z": "x"}, "lnd": "certify(4)"},
    "D2": {"values": {"x": "-2*z", "y": "0", "z": "y"}, "lnd": "certify(4)"}
  },
  "delta": ["D1", "D2"],
  "points": [
    {"name": "m", "coords": {"x": "1", "y": "-1", "z": "0"}},
    {"family": "curve", "params": ["c", "s"], "coords": {"x": "c", "y": "-(s^2 + 1)/c", "z": "s"}, "count": 5}
  ],
  "run": {"seed": 1, "method": "both", "elements": ["y", "z", "x*z + y"], "lambda": ["1", "-1/2"]}
})json");
  }
  if (name == "char2-conic") {
    return json::parse(R"json({
  "field": {"base": 2, "ratfunc": ["t"]},
  "ring": {"vars": ["X", "Y"], "relations": ["Y^2 + t*X^2 + X"], "assert": {"domain": true, "dimension": 1}},
  "run": {"seed": 1, "conic": {"a": "t", "lambda": ["0", "1", "t"], "slopes": ["0", "1", "t"]}}
})json");
  }
  if (name == "quadric-qi") {
    return json::parse(R"json({
  "field": {"base": "Q", "extensions": [{"name": "i", "minpoly": "Z^2 + 1"}]},
  "ring": {"vars": ["x", "y", "z"], "relations": ["x^2 + y^2 + z^2 + 1"], "assert": {"domain": true, "dimension": 2}},
  "derivations": {
    "D1": {"values": {"x": "-z", "y": "-i*z", "z": "x + i*y"}, "lnd": "certify(4)"},
    "D2": {"values": {"x": "-z", "y": "i*z", "z": "x - i*y"}, "lnd": "certify(4)"}
  },
  "delta": ["D1", "D2"],
  "points": [
    {"name": "k0", "coords": {"x": "u + v", "y": "u - v", "z": "1"},
     "field": {"base": "Q", "ratfunc": ["u"],
               "extensions": [{"name": "v", "minpoly": "Z^2 + u^2 + 1"}, {"name": "i", "minpoly": "Z^2 + 1"}]}},
    {"family": "gauss", "params": ["c", "s"],
     "coords": {"x": "(c - (s^2 + 1)/c)/2", "y": "-i*(c + (s^2 + 1)/c)/2", "z": "s"}, "count": 3}
  ],
  "run": {"seed": 1, "method": "both", "elements": ["x + i*y", "z"]}
})json");
  }
  if (name == "affine-plane") {
    return json::parse(R"json({
  "field": {"base": "Q"},
  "ring": {"vars": ["x", "y"], "relations": [], "assert": {"domain": true, "dimension": 2}},
  "derivations": {
    "Dx": {"values": {"x": "1", "y": "0"}, "lnd": "certify(2)"},
    "Dy": {"values": {"x": "0", "y": "1"}, "lnd": "certify(2)"}
  },
  "delta": ["Dx", "Dy"],
  "points": [
    {"name": "origin", "coords": {"x": "0", "y": "0"}},
    {"name": "p", "coords": {"x": "2", "y": "5"}},
    {"name": "q", "coords": {"x": "-3", "y": "1"}}
  ],
  "run": {"seed": 1, "method": "both", "random_trials": 3, "elements": ["x^2 + y"], "lambda": ["1"]}
})json");
  }
  throw Error(ErrorKind::InvalidInput, "unknown example '" + name + "' (danielewski, char2-conic, quadric-qi, affine-plane)");
}

}  // namespace lndkit::cli
