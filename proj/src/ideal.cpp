#include "lndkit/ideal.hpp"

#include <algorithm>
#include <numeric>

namespace lndkit {

namespace {

using Terms = std::vector<Term>;

bool divides(const Exponent& a, const Exponent& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) return false;
  }
  return true;
}

bool coprime(const Exponent& a, const Exponent& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != 0 && b[i] != 0) return false;
  }
  return true;
}

Exponent lcm(const Exponent& a, const Exponent& b) {
  Exponent r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = std::max(a[i], b[i]);
  return r;
}

Exponent diff(const Exponent& a, const Exponent& b) {
  Exponent r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

class Reducer {
 public:
  Reducer(const Field& field, const MonomialOrder& order) : F_(field), order_(order) {}

  Terms sorted(const Poly& p) const {
    Terms t = p.terms();
    std::sort(t.begin(), t.end(), [&](const Term& a, const Term& b) { return order_.compare(a.exp, b.exp) > 0; });
    return t;
  }

  void make_monic(Terms& t) const {
    if (t.empty() || F_.is_one(t.front().coef)) return;
    Value inv = F_.inv(t.front().coef);
    for (auto& term : t) term.coef = F_.mul(term.coef, inv);
  }

  // f[fi..] - c * x^shift * g[gi..]
  Terms sub_mul(const Terms& f, std::size_t fi, const Value& c, const Exponent& shift, const Terms& g,
                std::size_t gi) const {
    Terms out;
    out.reserve(f.size() - fi + g.size() - gi);
    Exponent e(shift.size());
    while (fi < f.size() || gi < g.size()) {
      if (gi < g.size()) {
        for (std::size_t k = 0; k < e.size(); ++k) e[k] = g[gi].exp[k] + shift[k];
      }
      int cmp = fi == f.size() ? -1 : (gi == g.size() ? 1 : order_.compare(f[fi].exp, e));
      if (cmp > 0) {
        out.push_back(f[fi++]);
      } else if (cmp < 0) {
        out.push_back(Term{e, F_.neg(F_.mul(c, g[gi].coef))});
        ++gi;
      } else {
        Value v = F_.sub(f[fi].coef, F_.mul(c, g[gi].coef));
        if (!F_.is_zero(v)) out.push_back(Term{e, std::move(v)});
        ++fi;
        ++gi;
      }
    }
    return out;
  }

  // Full reduction by monic polynomials.
  Terms reduce(Terms work, const std::vector<const Terms*>& basis) const {
    Terms result;
    std::size_t pos = 0;
    while (pos < work.size()) {
      const Term& lt = work[pos];
      const Terms* hit = nullptr;
      for (const Terms* g : basis) {
        if (divides(g->front().exp, lt.exp)) {
          hit = g;
          break;
        }
      }
      if (!hit) {
        result.push_back(work[pos++]);
        continue;
      }
      Value c = lt.coef;
      Exponent shift = diff(lt.exp, hit->front().exp);
      work = sub_mul(work, pos + 1, c, shift, *hit, 1);
      pos = 0;
    }
    return result;
  }

  Terms spoly(const Terms& f, const Terms& g) const {
    Exponent l = lcm(f.front().exp, g.front().exp);
    Exponent sf = diff(l, f.front().exp);
    Exponent sg = diff(l, g.front().exp);
    Terms fs;
    fs.reserve(f.size());
    for (std::size_t i = 1; i < f.size(); ++i) {
      Exponent e(sf.size());
      for (std::size_t k = 0; k < e.size(); ++k) e[k] = f[i].exp[k] + sf[k];
      fs.push_back(Term{std::move(e), f[i].coef});
    }
    return sub_mul(fs, 0, F_.one(), sg, g, 1);
  }

  const MonomialOrder& order() const { return order_; }

 private:
  const Field& F_;
  const MonomialOrder& order_;
};

struct Pair {
  std::size_t i, j;
  Exponent lcm;
};

}  // namespace

// ---------------------------------------------------------------- Buchberger

GroebnerBasis groebner_basis(const std::vector<Poly>& gens, const MonomialOrder& order,
                             const GroebnerOptions& options) {
  GroebnerBasis out;
  out.order = order;
  if (gens.empty()) return out;
  const Field& F = *gens.front().field();
  const FieldPtr field = gens.front().field();
  const VarsPtr vars = gens.front().vars();
  Reducer red(F, out.order);

  std::vector<Terms> polys;
  std::vector<bool> active;
  std::vector<Pair> pairs;

  auto active_basis = [&]() {
    std::vector<const Terms*> b;
    for (std::size_t k = 0; k < polys.size(); ++k) {
      if (active[k]) b.push_back(&polys[k]);
    }
    return b;
  };

  auto update = [&](Terms h) {
    red.make_monic(h);
    const std::size_t hi = polys.size();
    polys.push_back(std::move(h));
    active.push_back(false);
    const Exponent lh = polys[hi].front().exp;

    std::vector<Pair> candidates;
    for (std::size_t g = 0; g < hi; ++g) {
      if (active[g]) candidates.push_back(Pair{g, hi, lcm(polys[g].front().exp, lh)});
    }
    std::vector<Pair> kept;
    for (std::size_t a = 0; a < candidates.size(); ++a) {
      const Pair& p = candidates[a];
      bool keep = coprime(polys[p.i].front().exp, lh);
      if (!keep) {
        keep = true;
        for (std::size_t b = a + 1; b < candidates.size() && keep; ++b) {
          if (divides(candidates[b].lcm, p.lcm)) keep = false;
        }
        for (const Pair& q : kept) {
          if (keep && divides(q.lcm, p.lcm)) keep = false;
        }
      }
      if (keep) kept.push_back(p);
    }
    std::vector<Pair> next;
    for (Pair& p : pairs) {
      bool chain = divides(lh, p.lcm) && lcm(polys[p.i].front().exp, lh) != p.lcm &&
                   lcm(polys[p.j].front().exp, lh) != p.lcm;
      if (!chain) next.push_back(std::move(p));
    }
    for (Pair& p : kept) {
      if (!coprime(polys[p.i].front().exp, lh)) next.push_back(std::move(p));
    }
    pairs = std::move(next);
    for (std::size_t g = 0; g < hi; ++g) {
      if (active[g] && divides(lh, polys[g].front().exp)) active[g] = false;
    }
    active[hi] = true;
  };

  for (const Poly& g : gens) {
    require_same_field(F, *g.field());
    Terms t = red.reduce(red.sorted(g), active_basis());
    if (!t.empty()) update(std::move(t));
  }

  std::size_t steps = 0;
  while (!pairs.empty()) {
    auto best = std::min_element(pairs.begin(), pairs.end(), [&](const Pair& a, const Pair& b) {
      int c = out.order.compare(a.lcm, b.lcm);
      if (c != 0) return c < 0;
      return std::tie(a.j, a.i) < std::tie(b.j, b.i);
    });
    Pair p = *best;
    pairs.erase(best);
    if (++steps > options.max_pair_reductions) {
      throw Error(ErrorKind::ResourceExceeded,
                  "Groebner basis exceeded " + std::to_string(options.max_pair_reductions) + " pair reductions");
    }
    Terms h = red.reduce(red.spoly(polys[p.i], polys[p.j]), active_basis());
    if (!h.empty()) update(std::move(h));
  }

  // interreduce the (already minimal) active set
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k < polys.size(); ++k) {
    if (active[k]) idx.push_back(k);
  }
  std::vector<Terms> reduced;
  for (std::size_t k : idx) {
    std::vector<const Terms*> others;
    for (std::size_t o : idx) {
      if (o != k) others.push_back(&polys[o]);
    }
    Terms tail(polys[k].begin() + 1, polys[k].end());
    Terms r = red.reduce(std::move(tail), others);
    r.insert(r.begin(), polys[k].front());
    reduced.push_back(std::move(r));
  }
  std::sort(reduced.begin(), reduced.end(),
            [&](const Terms& a, const Terms& b) { return out.order.compare(a.front().exp, b.front().exp) > 0; });
  for (auto& t : reduced) {
    out.polys.push_back(Poly::from_terms(field, vars, t));
    out.sorted.push_back(std::move(t));
  }
  return out;
}

Poly GroebnerBasis::reduce(const Poly& f) const {
  if (sorted.empty() || f.is_zero()) return f;
  Reducer red(*f.field(), order);
  std::vector<const Terms*> basis;
  for (const auto& t : sorted) basis.push_back(&t);
  return Poly::from_terms(f.field(), f.vars(), red.reduce(red.sorted(f), basis));
}

bool GroebnerBasis::is_unit_ideal() const {
  return polys.size() == 1 && polys[0].is_constant() && !polys[0].is_zero();
}

// ---------------------------------------------------------------- Ideal

Ideal::Ideal(FieldPtr field, VarsPtr vars, std::vector<Poly> generators, GroebnerOptions options)
    : field_(std::move(field)), vars_(std::move(vars)), options_(options), cache_(std::make_shared<Cache>()) {
  for (auto& g : generators) {
    require_same_field(*field_, *g.field());
    if (!same_vars(vars_, g.vars())) g = g.with_vars(vars_);
    if (!g.is_zero()) gens_.push_back(std::move(g));
  }
}

std::shared_ptr<const GroebnerBasis> Ideal::groebner(const MonomialOrder& order) const {
  std::lock_guard<std::mutex> lock(cache_->mutex);
  auto& slot = cache_->bases[order.key()];
  if (!slot) slot = std::make_shared<const GroebnerBasis>(groebner_basis(gens_, order, options_));
  return slot;
}

Poly Ideal::normal_form(const Poly& f, const MonomialOrder& order) const {
  require_same_field(*field_, *f.field());
  Poly g = same_vars(vars_, f.vars()) ? f : f.with_vars(vars_);
  if (gens_.empty()) return g;
  return groebner(order)->reduce(g);
}

bool Ideal::is_zero_ideal() const { return gens_.empty(); }

bool Ideal::contains(const Ideal& other) const {
  return std::all_of(other.gens_.begin(), other.gens_.end(), [&](const Poly& g) { return member(g); });
}

Ideal Ideal::embed_field(const FieldPtr& target) const {
  std::vector<Poly> g;
  for (const auto& p : gens_) g.push_back(p.embed_field(target));
  return Ideal(target, vars_, std::move(g), options_);
}

Ideal Ideal::with_vars(const VarsPtr& vars) const {
  std::vector<Poly> g;
  for (const auto& p : gens_) g.push_back(p.with_vars(vars));
  return Ideal(field_, vars, std::move(g), options_);
}

Ideal Ideal::plus(const std::vector<Poly>& more) const {
  std::vector<Poly> g = gens_;
  g.insert(g.end(), more.begin(), more.end());
  return Ideal(field_, vars_, std::move(g), options_);
}

std::string Ideal::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < gens_.size(); ++i) s += (i ? ", " : "") + gens_[i].to_string();
  return s + ")";
}

Ideal eliminate(const Ideal& ideal, const std::vector<std::string>& keep) {
  const VarList& vars = *ideal.vars();
  std::vector<int> drop;
  for (std::size_t v = 0; v < vars.size(); ++v) {
    if (std::find(keep.begin(), keep.end(), vars[v]) == keep.end()) drop.push_back(static_cast<int>(v));
  }
  for (const auto& k : keep) {
    if (std::find(vars.begin(), vars.end(), k) == vars.end()) throw Error(ErrorKind::UnknownVariable, "'" + k + "'");
  }
  VarsPtr kept = make_vars(keep);
  if (ideal.is_zero_ideal()) return Ideal(ideal.field(), kept, {});
  auto gb = ideal.groebner(MonomialOrder::elimination(vars.size(), drop));
  std::vector<Poly> out;
  for (const auto& p : gb->polys) {
    auto s = p.support();
    bool ok = std::none_of(drop.begin(), drop.end(), [&](int v) { return s[static_cast<std::size_t>(v)]; });
    if (ok) out.push_back(p.with_vars(kept));
  }
  return Ideal(ideal.field(), kept, std::move(out));
}

// ---------------------------------------------------------------- RingPresentation

RingPtr RingPresentation::make(FieldPtr field, VarsPtr vars, std::vector<Poly> relations, bool asserted_domain,
                               std::optional<int> asserted_dimension, GroebnerOptions options) {
  for (const auto& v : *vars) {
    if (field->has_symbol(v)) throw Error(ErrorKind::NameCollision, "variable '" + v + "' is also a field generator");
  }
  Ideal rel(field, vars, std::move(relations), options);
  if (!rel.is_proper()) throw Error(ErrorKind::InvalidInput, "relation ideal is the unit ideal");
  auto ring = std::shared_ptr<RingPresentation>(new RingPresentation(std::move(field), std::move(vars), std::move(rel)));
  ring->asserted_domain_ = asserted_domain;
  ring->asserted_dimension_ = asserted_dimension;
  ring->options_ = options;
  return ring;
}

Poly RingPresentation::parse(const std::string& text) const { return reduce(parse_poly(text, vars_, field_)); }

int RingPresentation::dimension() const {
  std::call_once(dim_once_, [this] {
    const std::size_t m = ngens();
    if (relations_.is_zero_ideal()) {
      dim_ = static_cast<int>(m);
      return;
    }
    for (std::size_t size = m; size-- > 0;) {
      // subsets of the given size, in lexicographic order of index vectors
      std::vector<bool> pick(m, false);
      std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(size), true);
      do {
        std::vector<std::string> keep;
        for (std::size_t v = 0; v < m; ++v) {
          if (pick[v]) keep.push_back((*vars_)[v]);
        }
        if (eliminate(relations_, keep).is_zero_ideal()) {
          dim_ = static_cast<int>(size);
          return;
        }
      } while (std::prev_permutation(pick.begin(), pick.end()));
    }
    dim_ = 0;
  });
  return dim_;
}

RingPtr RingPresentation::extended(const VarList& extra) const {
  VarList names = *vars_;
  names.insert(names.end(), extra.begin(), extra.end());
  VarsPtr nv = make_vars(std::move(names));
  std::vector<Poly> rel;
  for (const auto& g : relations_.generators()) rel.push_back(g.with_vars(nv));
  return make(field_, nv, std::move(rel), asserted_domain_, std::nullopt, options_);
}

RingPtr RingPresentation::base_change(const FieldPtr& target) const {
  std::vector<Poly> rel;
  for (const auto& g : relations_.generators()) rel.push_back(g.embed_field(target));
  return make(target, vars_, std::move(rel), asserted_domain_, asserted_dimension_, options_);
}

// ---------------------------------------------------------------- kernels

KernelResult algebra_map_kernel(const RingPresentation& source, const std::vector<Poly>& images,
                                const Ideal& target_relations) {
  if (images.size() != source.ngens()) {
    throw Error(ErrorKind::InvalidInput, "need one image per source generator");
  }
  const FieldPtr& K = target_relations.field();
  const VarsPtr& tvars = target_relations.vars();
  for (const auto& img : images) {
    require_same_field(*K, *img.field());
    if (!same_vars(img.vars(), tvars)) throw Error(ErrorKind::UnknownVariable, "image over a different variable list");
  }

  // source variables, renamed away from target names if needed
  VarList names;
  for (const auto& v : *source.vars()) {
    std::string n = v;
    while (std::find(tvars->begin(), tvars->end(), n) != tvars->end() ||
           std::find(names.begin(), names.end(), n) != names.end()) {
      n += "_s";
    }
    names.push_back(n);
  }
  VarsPtr svars = make_vars(names);
  VarList all = names;
  all.insert(all.end(), tvars->begin(), tvars->end());
  VarsPtr allvars = make_vars(all);

  std::map<std::string, Poly> as_images, as_vars;
  for (std::size_t i = 0; i < source.ngens(); ++i) {
    as_images.emplace((*source.vars())[i], images[i]);
    as_vars.emplace((*source.vars())[i], Poly::variable(K, allvars, names[i]));
  }

  std::vector<Poly> gens;
  for (const auto& r : source.relations().generators()) {
    Poly rk = r.embed_field(K);
    if (!target_relations.member(rk.substitute(as_images, tvars))) {
      throw Error(ErrorKind::NotAHomomorphism, "relation " + r.to_string() + " does not map into the target relations");
    }
    gens.push_back(rk.substitute(as_vars, allvars));
  }
  for (const auto& g : target_relations.generators()) gens.push_back(g.with_vars(allvars));
  for (std::size_t i = 0; i < source.ngens(); ++i) {
    gens.push_back(Poly::variable(K, allvars, names[i]) - images[i].with_vars(allvars));
  }
  Ideal kernel_renamed = eliminate(Ideal(K, allvars, std::move(gens)), names);

  std::vector<Poly> kgens;
  for (const auto& g : kernel_renamed.generators()) {
    kgens.push_back(Poly::from_terms(K, source.vars(), g.terms()));
  }
  Ideal kernel(K, source.vars(), std::move(kgens));
  Ideal src = source.relations().embed_field(K);
  return KernelResult{kernel, src.contains(kernel)};
}

}  // namespace lndkit
