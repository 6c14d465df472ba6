#include "lndkit/embedding.hpp"

#include <algorithm>
#include <exception>
#include <map>
#include <set>

namespace lndkit {

namespace {

bool taken(const RingPresentation& B, const std::string& name) {
  return std::find(B.vars()->begin(), B.vars()->end(), name) != B.vars()->end() || B.field()->has_symbol(name);
}

int dimension_of(const RingPresentation& B) { return B.dimension(); }

// Runs body(i) for i in [0, n), on all threads or on one, rethrowing the
// first failure by index.
template <typename Body>
void for_each_index(std::size_t n, bool parallel, const Body& body) {
  std::vector<std::exception_ptr> errors(n);
  const long long count = static_cast<long long>(n);
  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < count; ++i) {
      try {
        body(static_cast<std::size_t>(i));
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  } else {
    for (long long i = 0; i < count; ++i) {
      try {
        body(static_cast<std::size_t>(i));
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

EmbeddingMap build_psi_impl(const RingPtr& B, const std::vector<Derivation>& S, int bound, bool parallel) {
  if (B->field()->characteristic() != 0) {
    throw Error(ErrorKind::PositiveCharacteristic, "derivation pipeline unavailable (char " +
                                                       std::to_string(B->field()->characteristic()) + ")");
  }
  EmbeddingMap psi;
  psi.source = B;
  psi.xvars = fresh_names(*B, "X", S.size());
  psi.target = B->extended(psi.xvars);
  std::vector<Derivation> lifted;
  for (const auto& D : S) {
    if (D.ring().get() != B.get() && !same_vars(D.ring()->vars(), B->vars())) {
      throw Error(ErrorKind::InvalidInput, D.name() + " is defined on another ring");
    }
    if (!D.status().usable()) {
      throw Error(ErrorKind::InvalidInput, D.name() + " is neither certified nor asserted locally nilpotent");
    }
    psi.sequence.push_back(D.name());
    lifted.push_back(D.lift(psi.target));
  }
  const RingPresentation& T = *psi.target;
  const Field& F = *T.field();
  std::vector<Poly> X;
  for (const auto& name : psi.xvars) X.push_back(Poly::variable(T.field(), T.vars(), name));

  psi.images.assign(B->ngens(), Poly(T.field(), T.vars()));
  for_each_index(B->ngens(), parallel, [&](std::size_t i) {
    Poly f = T.variable(i);
    for (std::size_t k = 0; k < lifted.size(); ++k) {
      auto orbit = lifted[k].orbit(f, bound);
      Poly next(T.field(), T.vars());
      Value coef = F.one();
      Poly xpow = T.constant(1);
      for (std::size_t n = 0; n < orbit.size(); ++n) {
        if (n > 0) {
          coef = F.div(coef, F.from_int(static_cast<long long>(n)));
          xpow *= X[k];
        }
        next += (orbit[n] * xpow).scale_value(coef);
      }
      f = T.reduce(next);
    }
    psi.images[i] = std::move(f);
  });
  return psi;
}

std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t r) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<bool> pick(n, false);
  std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(r), true);
  do {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < n; ++i) {
      if (pick[i]) s.push_back(i);
    }
    out.push_back(std::move(s));
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return out;
}

// Splits f into coefficients of the monomials in the variables `split`,
// keeping the remaining variables; each coefficient is over `rest`.
std::map<Exponent, Poly> split_by(const Poly& f, const std::vector<std::size_t>& split, const VarsPtr& rest) {
  std::vector<std::size_t> keep;
  for (std::size_t v = 0; v < f.nvars(); ++v) {
    if (std::find(split.begin(), split.end(), v) == split.end()) keep.push_back(v);
  }
  std::map<Exponent, std::vector<Term>> parts;
  for (const auto& t : f.terms()) {
    Exponent key, e;
    for (std::size_t v : split) key.push_back(t.exp[v]);
    for (std::size_t v : keep) e.push_back(t.exp[v]);
    parts[key].push_back(Term{e, t.coef});
  }
  std::map<Exponent, Poly> out;
  for (auto& [k, ts] : parts) out.emplace(k, Poly::from_terms(f.field(), rest, std::move(ts)));
  return out;
}

void push_unique(std::vector<Poly>& v, Poly p) {
  if (p.is_zero()) return;
  for (const auto& q : v) {
    if (q == p) return;
  }
  v.push_back(std::move(p));
}

Specialized substitute_linear(const Specialized& in, const std::vector<std::vector<long long>>& a, const VarList& yvars) {
  VarsPtr ys = make_vars(yvars);
  std::map<std::string, Poly> sub;
  for (std::size_t i = 0; i < in.vars->size(); ++i) {
    Poly s(in.field, ys);
    for (std::size_t j = 0; j < yvars.size(); ++j) {
      if (a[i][j] != 0) s += Poly::variable(in.field, ys, yvars[j]).scale(FieldElem::from_int(in.field, a[i][j]));
    }
    sub.emplace((*in.vars)[i], s);
  }
  Specialized out{in.field, ys, {}};
  for (const auto& p : in.images) out.images.push_back(p.substitute(sub, ys));
  return out;
}

std::vector<std::vector<long long>> trial_matrix(std::size_t N, std::size_t n, int trial, std::mt19937_64& rng) {
  std::vector<std::vector<long long>> a(N, std::vector<long long>(n, 0));
  if (trial == 0) {
    for (std::size_t i = 0; i < std::min(N, n); ++i) a[i][i] = 1;
    return a;
  }
  for (auto& row : a) {
    for (auto& x : row) x = static_cast<long long>(rng() % 7) - 3;
  }
  return a;
}

std::string join_coords(const std::vector<FieldElem>& c) {
  std::string s = "(";
  for (std::size_t i = 0; i < c.size(); ++i) s += (i ? ", " : "") + c[i].to_string();
  return s + ")";
}

SampleReport sample_impl(const EmbeddingMap& psi, const std::vector<PointSpec>& points, InjectivityMethod method,
                         const LocusCertificate* certificate, bool parallel) {
  SampleReport report;
  report.points.resize(points.size());
  dimension_of(*psi.source);
  for_each_index(points.size(), parallel, [&](std::size_t i) {
    const PointSpec& p = points[i];
    PointResult& r = report.points[i];
    r.name = p.name;
    r.coords = p.describe();
    try {
      if (certificate) r.covered = certificate->covers(p);
      r.images = specialize(psi, p);
      r.verdict = injectivity_test(*psi.source, r.images.images, method);
      r.certificate_violation = r.covered.value_or(false) && !r.verdict.injective;
    } catch (const Error& e) {
      r.error = e.what();
      r.error_kind = e.kind();
    }
  });
  for (const auto& r : report.points) {
    if (r.error_kind) {
      ++report.errors;
      continue;
    }
    ++(r.verdict.injective ? report.injective : report.not_injective);
    if (r.covered.value_or(false)) ++report.covered;
    if (r.certificate_violation) ++report.violations;
  }
  return report;
}

}  // namespace

// ---------------------------------------------------------------- Ψ

Poly EmbeddingMap::apply(const Poly& b) const { return apply_homomorphism(images, *source, *target, b); }

std::vector<std::size_t> EmbeddingMap::x_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = source->ngens(); i < target->ngens(); ++i) out.push_back(i);
  return out;
}

VarList fresh_names(const RingPresentation& B, const std::string& stem, std::size_t count) {
  std::string s = stem;
  for (;;) {
    bool clash = false;
    for (std::size_t i = 1; i <= count && !clash; ++i) clash = taken(B, s + std::to_string(i));
    if (!clash) break;
    s += "_";
  }
  VarList out;
  for (std::size_t i = 1; i <= count; ++i) out.push_back(s + std::to_string(i));
  return out;
}

EmbeddingMap build_psi(const RingPtr& B, const std::vector<Derivation>& S, int bound) {
  return build_psi_impl(B, S, bound, true);
}

EmbeddingMap build_psi_serial(const RingPtr& B, const std::vector<Derivation>& S, int bound) {
  return build_psi_impl(B, S, bound, false);
}

// ---------------------------------------------------------------- points

std::string PointSpec::describe() const { return join_coords(coords); }

PointSpec make_point(const RingPresentation& B, std::string name, FieldPtr field, std::vector<FieldElem> coords) {
  if (!B.field()->embeds_into(*field)) {
    throw Error(ErrorKind::InvalidPoint, name + ": " + B.field()->describe() + " does not embed into " + field->describe());
  }
  if (coords.size() != B.ngens()) throw Error(ErrorKind::InvalidPoint, name + ": need one coordinate per generator");
  for (auto& c : coords) {
    if (!c.field()->same_as(*field)) c = c.embed(field);
  }
  for (const auto& r : B.relations().generators()) {
    FieldElem v = r.embed_field(field).evaluate(coords);
    if (!v.is_zero()) {
      throw Error(ErrorKind::InvalidPoint,
                  name + ": relation " + r.to_string() + " takes the value " + v.to_string() + " at " + join_coords(coords));
    }
  }
  return PointSpec{std::move(name), std::move(field), std::move(coords)};
}

Specialized specialize(const EmbeddingMap& psi, const PointSpec& point) {
  if (point.coords.size() != psi.source->ngens()) throw Error(ErrorKind::InvalidPoint, point.name + ": wrong arity");
  VarsPtr xs = make_vars(psi.xvars);
  std::map<std::string, Poly> sub;
  for (std::size_t i = 0; i < point.coords.size(); ++i) {
    sub.emplace((*psi.source->vars())[i], Poly::constant(point.field, xs, point.coords[i]));
  }
  Specialized out{point.field, xs, {}};
  for (const auto& img : psi.images) out.images.push_back(img.embed_field(point.field).substitute(sub, xs));
  return out;
}

// ---------------------------------------------------------------- injectivity

InjectivityMethod parse_method(const std::string& s) {
  if (s == "jacobian") return InjectivityMethod::Jacobian;
  if (s == "elimination") return InjectivityMethod::Elimination;
  if (s == "both") return InjectivityMethod::Both;
  throw Error(ErrorKind::InvalidInput, "unknown method '" + s + "' (jacobian|elimination|both)");
}

std::string to_string(InjectivityMethod m) {
  switch (m) {
    case InjectivityMethod::Jacobian:
      return "jacobian";
    case InjectivityMethod::Elimination:
      return "elimination";
    case InjectivityMethod::Both:
      break;
  }
  return "both";
}

std::string InjectivityVerdict::summary() const {
  std::string s = injective ? "injective" : "not injective";
  if (jacobian) s += std::string("; jacobian ") + (*jacobian ? "yes" : "no") + " (rank " + std::to_string(rank) + ")";
  if (elimination) s += std::string("; elimination ") + (*elimination ? "yes" : "no");
  return s;
}

InjectivityVerdict injectivity_test(const RingPresentation& B, const std::vector<Poly>& images, InjectivityMethod method) {
  if (images.size() != B.ngens()) throw Error(ErrorKind::InvalidInput, "need one image per generator");
  const FieldPtr& K = images.front().field();
  InjectivityVerdict v;
  const int n = dimension_of(B);
  if (method != InjectivityMethod::Elimination) {
    v.rank = jacobian_rank(images);
    v.jacobian = v.rank == n;
  }
  if (method != InjectivityMethod::Jacobian) {
    RingPtr BK = B.field()->same_as(*K) ? nullptr : B.base_change(K);
    const RingPresentation& src = BK ? *BK : B;
    v.elimination = algebra_map_kernel(src, images, Ideal(K, images.front().vars(), {})).injective;
  }
  if (v.jacobian && v.elimination && *v.jacobian != *v.elimination) {
    throw Error(ErrorKind::OracleDisagreement, "jacobian route says " + std::string(*v.jacobian ? "" : "not ") +
                                                   "injective (rank " + std::to_string(v.rank) +
                                                   "), elimination route disagrees");
  }
  v.injective = v.jacobian ? *v.jacobian : *v.elimination;
  return v;
}

int generic_jacobian_rank(const EmbeddingMap& psi) {
  if (psi.source->field()->characteristic() != 0) {
    throw Error(ErrorKind::PositiveCharacteristic, "jacobian criterion needs characteristic zero");
  }
  PolyMatrix J = jacobian_matrix(psi.images, psi.x_indices());
  const std::size_t m = J.size(), N = psi.nx();
  for (std::size_t r = std::min(m, N); r > 0; --r) {
    for (const auto& rows : subsets(m, r)) {
      for (const auto& cols : subsets(N, r)) {
        PolyMatrix minor;
        for (std::size_t i : rows) {
          std::vector<Poly> row;
          for (std::size_t j : cols) row.push_back(J[i][j]);
          minor.push_back(std::move(row));
        }
        if (!psi.target->is_zero(determinant(minor))) return static_cast<int>(r);
      }
    }
  }
  return 0;
}

// ---------------------------------------------------------------- certificate

bool LocusCertificate::covers(const PointSpec& point) const {
  for (const auto& gens : ideals) {
    bool nonzero = false;
    for (const auto& g : gens) {
      if (!g.embed_field(point.field).evaluate(point.coords).is_zero()) {
        nonzero = true;
        break;
      }
    }
    if (!nonzero) return false;
  }
  return true;
}

LocusCertificate certify_open_locus(const EmbeddingMap& psi) {
  const RingPresentation& B = *psi.source;
  const std::size_t m = B.ngens(), N = psi.nx();
  const int n = dimension_of(B);
  if (static_cast<int>(N) != n) {
    throw Error(ErrorKind::InvalidInput, "certificate needs dim B = " + std::to_string(n) + " target variables, have " +
                                             std::to_string(N) + " (reduce first)");
  }
  const int grank = generic_jacobian_rank(psi);
  if (grank != n) {
    throw Error(ErrorKind::GenericNotInjective, "generic jacobian rank " + std::to_string(grank) + " < dim B = " +
                                                    std::to_string(n));
  }

  // k[x, u, X]: x for the coefficients, u for the source copy of B
  VarList uvars = fresh_names(B, "u", m);
  for (auto& u : uvars) {
    while (std::find(psi.xvars.begin(), psi.xvars.end(), u) != psi.xvars.end()) u += "_";
  }
  VarList all = *B.vars();
  all.insert(all.end(), uvars.begin(), uvars.end());
  all.insert(all.end(), psi.xvars.begin(), psi.xvars.end());
  VarsPtr allv = make_vars(all);
  const FieldPtr& K = B.field();

  std::vector<Poly> gens;
  for (const auto& r : B.relations().generators()) gens.push_back(r.with_vars(allv));
  for (std::size_t i = 0; i < m; ++i) {
    gens.push_back(Poly::variable(K, allv, uvars[i]) - psi.images[i].with_vars(allv));
  }
  Ideal J(K, allv, gens);

  VarList xu = *B.vars();
  xu.insert(xu.end(), uvars.begin(), uvars.end());
  VarsPtr xuv = make_vars(xu);
  Ideal L = eliminate(J, xu);

  std::map<std::string, Poly> to_image;
  for (std::size_t i = 0; i < m; ++i) to_image.emplace(uvars[i], psi.images[i]);

  LocusCertificate cert;
  for (std::size_t j = 0; j < N; ++j) {
    VarList keep = xu;
    keep.push_back(psi.xvars[j]);
    VarsPtr keepv = make_vars(keep);
    Ideal Jj = eliminate(J, keep);

    std::optional<Poly> best_p;
    std::optional<Poly> best_c;
    int best_deg = 0;
    for (const auto& f : Jj.generators()) {
      auto parts = split_by(f, {keep.size() - 1}, xuv);
      int deg = -1;
      Poly lead(K, xuv);
      std::vector<Term> stripped;
      for (auto it = parts.rbegin(); it != parts.rend(); ++it) {
        Poly c = L.normal_form(it->second.with_vars(L.vars()));
        if (c.is_zero()) continue;
        if (deg < 0) {
          deg = it->first[0];
          lead = c;
        }
        for (const auto& t : c.terms()) {
          Exponent e = t.exp;
          e.push_back(it->first[0]);
          stripped.push_back(Term{e, t.coef});
        }
      }
      if (deg <= 0) continue;
      Poly p = Poly::from_terms(K, keepv, std::move(stripped));
      if (!best_p || deg < best_deg || (deg == best_deg && p.size() < best_p->size())) {
        best_p = p;
        best_c = lead;
        best_deg = deg;
      }
    }
    if (!best_p) {
      throw Error(ErrorKind::GenericNotInjective, psi.xvars[j] + " is not algebraic over the image");
    }
    Poly image = psi.target->reduce(best_c->substitute(to_image, psi.target->vars()));
    if (image.is_zero()) throw Error(ErrorKind::InternalDisagreement, "leading coefficient maps to zero");
    std::vector<Poly> Ij;
    for (auto& [_, c] : split_by(image, psi.x_indices(), B.vars())) push_unique(Ij, B.reduce(c));
    cert.annihilators.push_back(*best_p);
    cert.leading.push_back(*best_c);
    cert.leading_image.push_back(image);
    cert.ideals.push_back(std::move(Ij));
  }

  std::vector<Poly> prod = {B.constant(1)};
  for (const auto& Ij : cert.ideals) {
    std::vector<Poly> next;
    for (const auto& a : prod) {
      for (const auto& b : Ij) push_unique(next, B.reduce(a * b));
    }
    prod = std::move(next);
  }
  cert.product = std::move(prod);
  return cert;
}

// ---------------------------------------------------------------- reduction

std::string Reduction::describe(const VarList& xvars) const {
  std::string s;
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    std::string rhs;
    for (std::size_t j = 0; j < yvars.size(); ++j) {
      long long a = matrix[i][j];
      if (a == 0) continue;
      std::string mag = (a == 1 || a == -1) ? yvars[j] : std::to_string(a < 0 ? -a : a) + "*" + yvars[j];
      if (rhs.empty()) {
        rhs = (a < 0 ? "-" : "") + mag;
      } else {
        rhs += (a < 0 ? " - " : " + ") + mag;
      }
    }
    s += (i ? ", " : "") + xvars[i] + " -> " + (rhs.empty() ? "0" : rhs);
  }
  return s;
}

ReducedImages eakin_reduce(const RingPresentation& B, const Specialized& images, std::size_t target_dim,
                           std::uint64_t seed, int trials, InjectivityMethod method) {
  const std::size_t N = images.vars->size();
  if (N < target_dim) throw Error(ErrorKind::InvalidInput, "fewer variables than the target dimension");
  VarList ys;
  for (std::size_t j = 1; j <= target_dim; ++j) {
    std::string y = "Y" + std::to_string(j);
    while (images.field->has_symbol(y)) y += "_";
    ys.push_back(y);
  }
  std::mt19937_64 rng(seed);
  for (int t = 0; t < std::max(trials, 1); ++t) {
    auto a = trial_matrix(N, target_dim, t, rng);
    Specialized reduced = substitute_linear(images, a, ys);
    InjectivityVerdict v = injectivity_test(B, reduced.images, method);
    if (v.injective) return ReducedImages{Reduction{a, t, ys}, std::move(reduced), v};
  }
  throw Error(ErrorKind::ReductionFailed, "no injective projection to " + std::to_string(target_dim) +
                                              " variables in " + std::to_string(trials) + " trials");
}

ReducedEmbedding eakin_reduce_generic(const EmbeddingMap& psi, std::size_t target_dim, std::uint64_t seed, int trials) {
  const std::size_t N = psi.nx();
  if (N < target_dim) throw Error(ErrorKind::InvalidInput, "fewer variables than the target dimension");
  const RingPresentation& B = *psi.source;
  VarList ys = fresh_names(B, "Y", target_dim);
  RingPtr target = B.extended(ys);
  std::mt19937_64 rng(seed);
  for (int t = 0; t < std::max(trials, 1); ++t) {
    auto a = trial_matrix(N, target_dim, t, rng);
    std::map<std::string, Poly> sub;
    for (std::size_t i = 0; i < N; ++i) {
      Poly s(target->field(), target->vars());
      for (std::size_t j = 0; j < target_dim; ++j) {
        if (a[i][j] != 0) {
          s += Poly::variable(target->field(), target->vars(), ys[j]).scale(FieldElem::from_int(target->field(), a[i][j]));
        }
      }
      sub.emplace(psi.xvars[i], s);
    }
    EmbeddingMap out{psi.source, target, psi.sequence, ys, {}};
    for (const auto& img : psi.images) out.images.push_back(target->reduce(img.substitute(sub, target->vars())));
    if (generic_jacobian_rank(out) == static_cast<int>(target_dim)) {
      return ReducedEmbedding{Reduction{a, t, ys}, std::move(out)};
    }
  }
  throw Error(ErrorKind::ReductionFailed, "no generic projection to " + std::to_string(target_dim) + " variables in " +
                                              std::to_string(trials) + " trials");
}

// ---------------------------------------------------------------- sampling

std::vector<PointSpec> family_points(const RingPresentation& B, const PointFamily& family, std::size_t count,
                                     std::mt19937_64& rng) {
  if (family.coords.size() != B.ngens()) {
    throw Error(ErrorKind::InvalidInput, family.name + ": need one coordinate expression per generator");
  }
  std::vector<PointSpec> out;
  std::set<std::string> seen;
  for (std::size_t draw = 0; out.size() < count && draw < 50 * count; ++draw) {
    std::map<std::string, FieldElem> bind;
    for (const auto& p : family.params) bind.emplace(p, FieldElem{family.field, family.field->sample(rng, 3)});
    std::vector<FieldElem> coords;
    try {
      for (const auto& e : family.coords) coords.push_back(e.to_field(family.field, bind));
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::DivisionByZero) continue;
      throw;
    }
    std::string key = join_coords(coords);
    if (!seen.insert(key).second) continue;
    out.push_back(make_point(B, family.name + "#" + std::to_string(out.size() + 1), family.field, std::move(coords)));
  }
  return out;
}

std::vector<PointSpec> random_points(const RingPresentation& B, std::size_t count, std::size_t trials,
                                     std::mt19937_64& rng) {
  std::vector<PointSpec> out;
  const FieldPtr& K = B.field();
  std::set<std::string> seen;
  for (std::size_t t = 0; t < trials && out.size() < count; ++t) {
    std::vector<FieldElem> coords;
    for (std::size_t i = 0; i < B.ngens(); ++i) coords.push_back(FieldElem{K, K->sample(rng, 2)});
    bool ok = true;
    for (const auto& r : B.relations().generators()) ok = ok && r.evaluate(coords).is_zero();
    if (!ok || !seen.insert(join_coords(coords)).second) continue;
    out.push_back(PointSpec{"random#" + std::to_string(out.size() + 1), K, std::move(coords)});
  }
  return out;
}

SampleReport sample_and_test(const EmbeddingMap& psi, const std::vector<PointSpec>& points, InjectivityMethod method,
                             const LocusCertificate* certificate) {
  return sample_impl(psi, points, method, certificate, true);
}

SampleReport sample_and_test_serial(const EmbeddingMap& psi, const std::vector<PointSpec>& points,
                                    InjectivityMethod method, const LocusCertificate* certificate) {
  return sample_impl(psi, points, method, certificate, false);
}

}  // namespace lndkit
