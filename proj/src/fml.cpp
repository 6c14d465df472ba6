#include "lndkit/fml.hpp"

#include <algorithm>
#include <map>

namespace lndkit {

DerivationSet DerivationSet::make(RingPtr ring, std::vector<Derivation> members) {
  for (const auto& D : members) {
    if (!same_vars(D.ring()->vars(), ring->vars()) || !D.ring()->field()->same_as(*ring->field())) {
      throw Error(ErrorKind::InvalidInput, D.name() + " is defined on another ring");
    }
    if (!D.status().usable()) {
      throw Error(ErrorKind::InvalidInput, D.name() + " is neither certified nor asserted locally nilpotent");
    }
  }
  return DerivationSet{std::move(ring), std::move(members), true};
}

bool fixed_by_all(const DerivationSet& delta, const Poly& b) {
  bool by_derivation = true, by_exp = true;
  for (const auto& D : delta.members) {
    bool killed = D.apply(b).is_zero();
    FormalExp e = exp_formal(D);
    Poly bb = delta.ring->reduce(b);
    bool fixed = e.apply(bb) == bb.with_vars(e.ring->vars());
    if (killed != fixed) {
      throw Error(ErrorKind::InternalDisagreement,
                  D.name() + ": D(b) = 0 is " + (killed ? "true" : "false") + " but exp(T*D)(b) = b is " +
                      (fixed ? "true" : "false") + " for b = " + b.to_string());
    }
    by_derivation = by_derivation && killed;
    by_exp = by_exp && fixed;
  }
  return by_derivation && by_exp;
}

namespace {

// Kernel basis of M (rows x cols) over F; one vector per free column, with a
// 1 in that column, pivots chosen left to right.
std::vector<std::vector<Value>> nullspace(const Field& F, std::vector<std::vector<Value>> M, std::size_t cols) {
  std::vector<std::size_t> pivot_cols;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < M.size(); ++c) {
    std::size_t p = r;
    while (p < M.size() && F.is_zero(M[p][c])) ++p;
    if (p == M.size()) continue;
    std::swap(M[p], M[r]);
    Value inv = F.inv(M[r][c]);
    for (auto& v : M[r]) v = F.mul(v, inv);
    for (std::size_t i = 0; i < M.size(); ++i) {
      if (i == r || F.is_zero(M[i][c])) continue;
      Value f = M[i][c];
      for (std::size_t k = 0; k < cols; ++k) M[i][k] = F.sub(M[i][k], F.mul(f, M[r][k]));
    }
    pivot_cols.push_back(c);
    ++r;
  }
  std::vector<std::vector<Value>> out;
  for (std::size_t f = 0; f < cols; ++f) {
    if (std::find(pivot_cols.begin(), pivot_cols.end(), f) != pivot_cols.end()) continue;
    std::vector<Value> v(cols, F.zero());
    v[f] = F.one();
    for (std::size_t i = 0; i < pivot_cols.size(); ++i) v[pivot_cols[i]] = F.neg(M[i][f]);
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace

std::vector<Poly> kernel_intersection_bounded(const DerivationSet& delta, int degree_bound, std::size_t max_monomials) {
  const RingPresentation& B = *delta.ring;
  const Field& F = *B.field();
  auto gb = B.relations().groebner();
  std::vector<Exponent> leads;
  for (const auto& g : gb->polys) leads.push_back(g.leading(gb->order).exp);
  auto all = monomials_up_to(B.ngens(), degree_bound);
  std::vector<Exponent> basis;
  for (const auto& e : all) {
    bool standard = std::none_of(leads.begin(), leads.end(), [&](const Exponent& l) {
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (l[i] > e[i]) return false;
      }
      return true;
    });
    if (standard) basis.push_back(e);
    if (basis.size() > max_monomials) {
      throw Error(ErrorKind::ResourceExceeded, "more than " + std::to_string(max_monomials) + " standard monomials");
    }
  }

  // rows indexed by (derivation, monomial of the image)
  std::map<std::pair<std::size_t, Exponent>, std::size_t> row_of;
  std::vector<std::vector<Value>> M;
  for (std::size_t c = 0; c < basis.size(); ++c) {
    Poly m = Poly::monomial(B.field(), B.vars(), basis[c], F.one());
    for (std::size_t k = 0; k < delta.members.size(); ++k) {
      Poly image = delta.members[k].apply(m);
      for (const auto& t : image.terms()) {
        auto key = std::make_pair(k, t.exp);
        auto it = row_of.find(key);
        if (it == row_of.end()) {
          it = row_of.emplace(key, M.size()).first;
          M.emplace_back(basis.size(), F.zero());
        }
        M[it->second][c] = t.coef;
      }
    }
  }
  std::vector<Poly> out;
  for (const auto& v : nullspace(F, std::move(M), basis.size())) {
    std::vector<Term> ts;
    for (std::size_t c = 0; c < basis.size(); ++c) {
      if (!F.is_zero(v[c])) ts.push_back(Term{basis[c], v[c]});
    }
    out.push_back(Poly::from_terms(B.field(), B.vars(), std::move(ts)));
  }
  return out;
}

std::vector<std::string> assumptions_for(const RingPresentation& B, const std::vector<Derivation>& ds, bool k_delta) {
  std::vector<std::string> out;
  if (k_delta) out.push_back("asserted: K_Delta = k");
  if (B.asserted_domain()) out.push_back("asserted: domain");
  const auto& levels = B.field()->levels();
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i].kind == FieldLevel::Kind::Extension) {
      out.push_back("asserted-irreducible: " + levels[i].name + " root of " +
                    B.field()->up_format(static_cast<int>(i), levels[i].minpoly, "Z"));
    }
  }
  for (const auto& D : ds) {
    switch (D.status().kind) {
      case NilpotencyStatus::Kind::Certified:
        out.push_back("certified: lnd(" + D.name() + ") bound " + std::to_string(D.status().bound));
        break;
      case NilpotencyStatus::Kind::Asserted:
        out.push_back("asserted: lnd(" + D.name() + ")");
        break;
      case NilpotencyStatus::Kind::Unknown:
        out.push_back("unknown: lnd(" + D.name() + ")");
        break;
    }
  }
  return out;
}

PipelineReport fml_pipeline(const DerivationSet& delta, const std::vector<PointSpec>& points, const PipelineConfig& config) {
  if (delta.members.empty()) throw Error(ErrorKind::InvalidInput, "empty derivation set");
  const RingPtr& B = delta.ring;
  if (B->field()->characteristic() != 0) {
    throw Error(ErrorKind::PositiveCharacteristic, "derivation pipeline unavailable (char " +
                                                       std::to_string(B->field()->characteristic()) + ")");
  }
  PipelineReport rep;
  rep.assumptions = assumptions_for(*B, delta.members, delta.trivial_fixed_field_asserted);
  rep.n = static_cast<std::size_t>(B->dimension());

  bool generic_ok = false;
  for (int r = 1; r <= std::max(config.max_repeat, 1); ++r) {
    std::vector<Derivation> S;
    for (int k = 0; k < r; ++k) S.insert(S.end(), delta.members.begin(), delta.members.end());
    rep.psi = config.parallel ? build_psi(B, S, config.bound) : build_psi_serial(B, S, config.bound);
    rep.repeats = r;
    rep.N = S.size();
    int rank = generic_jacobian_rank(rep.psi);
    if (rank == static_cast<int>(rep.n)) {
      generic_ok = true;
      break;
    }
    rep.notes.push_back("r = " + std::to_string(r) + ": generic jacobian rank " + std::to_string(rank) + " < " +
                        std::to_string(rep.n));
  }
  if (!generic_ok) {
    throw Error(ErrorKind::GenericNotInjective,
                "Psi_S is not injective at the generic point for S = Delta repeated up to " +
                    std::to_string(config.max_repeat) + " times (" + rep.notes.back() + ")");
  }

  if (rep.N > rep.n) {
    auto red = eakin_reduce_generic(rep.psi, rep.n, config.seed, config.trials);
    rep.generic_reduction = red.reduction;
    rep.reduced = std::move(red.psi);
  } else {
    rep.reduced = rep.psi;
  }

  if (config.certify) rep.certificate = certify_open_locus(rep.reduced);
  const LocusCertificate* cert = rep.certificate ? &*rep.certificate : nullptr;
  rep.samples = config.parallel ? sample_and_test(rep.reduced, points, config.method, cert)
                                : sample_and_test_serial(rep.reduced, points, config.method, cert);

  // the zero section recovers each point
  for (std::size_t k = 0; k < points.size(); ++k) {
    const PointResult& pr = rep.samples.points[k];
    if (pr.error_kind) continue;
    std::vector<FieldElem> zero(pr.images.vars->size(), FieldElem::zero(pr.images.field));
    for (std::size_t i = 0; i < pr.images.images.size(); ++i) {
      if (pr.images.images[i].evaluate(zero) != points[k].coords[i]) {
        throw Error(ErrorKind::InternalDisagreement, pr.name + ": zero section does not return the point");
      }
    }
  }
  rep.success = rep.samples.violations == 0 && rep.samples.errors == 0;
  return rep;
}

}  // namespace lndkit
