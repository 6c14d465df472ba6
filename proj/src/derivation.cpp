#include "lndkit/derivation.hpp"

#include <algorithm>

namespace lndkit {

std::string NilpotencyStatus::to_string() const {
  switch (kind) {
    case Kind::Certified:
      return "certified(" + std::to_string(bound) + ")";
    case Kind::Asserted:
      return "asserted";
    case Kind::Unknown:
      break;
  }
  return "unknown";
}

Derivation Derivation::with_status(NilpotencyStatus s) const {
  Derivation d = *this;
  d.status_ = s;
  return d;
}

bool Derivation::is_zero() const {
  return std::all_of(values_.begin(), values_.end(), [](const Poly& p) { return p.is_zero(); });
}

Poly Derivation::apply(const Poly& b) const {
  Poly f = same_vars(b.vars(), ring_->vars()) ? b : b.with_vars(ring_->vars());
  Poly out(ring_->field(), ring_->vars());
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i].is_zero()) continue;
    Poly d = f.partial(i);
    if (!d.is_zero()) out += d * values_[i];
  }
  return ring_->reduce(out);
}

Poly Derivation::apply_power(const Poly& b, int n) const {
  Poly cur = ring_->reduce(same_vars(b.vars(), ring_->vars()) ? b : b.with_vars(ring_->vars()));
  for (int k = 0; k < n && !cur.is_zero(); ++k) cur = apply(cur);
  return cur;
}

std::vector<Poly> Derivation::orbit(const Poly& b, int bound) const {
  std::vector<Poly> out;
  Poly cur = ring_->reduce(same_vars(b.vars(), ring_->vars()) ? b : b.with_vars(ring_->vars()));
  while (!cur.is_zero()) {
    if (static_cast<int>(out.size()) > bound) {
      throw Error(ErrorKind::DegBoundExceeded, name_ + ": D^n(" + b.to_string() + ") nonzero for n = " +
                                                   std::to_string(bound) + " (not locally nilpotent, or bound too small)");
    }
    out.push_back(cur);
    cur = apply(cur);
  }
  return out;
}

int Derivation::degree(const Poly& b, int bound) const {
  auto o = orbit(b, bound);
  if (o.empty()) throw Error(ErrorKind::ZeroElement, "degree of the zero element");
  return static_cast<int>(o.size()) - 1;
}

Derivation Derivation::lift(const RingPtr& extended) const {
  std::vector<Poly> vals;
  for (const auto& name : *extended->vars()) {
    auto it = std::find(ring_->vars()->begin(), ring_->vars()->end(), name);
    if (it == ring_->vars()->end()) {
      vals.emplace_back(extended->field(), extended->vars());
    } else {
      vals.push_back(values_[static_cast<std::size_t>(it - ring_->vars()->begin())].with_vars(extended->vars()));
    }
  }
  Derivation d(extended, name_, std::move(vals));
  d.status_ = status_;
  return d;
}

Derivation Derivation::base_change(const FieldPtr& K) const {
  if (!ring_->field()->embeds_into(*K)) {
    throw Error(ErrorKind::FieldMismatch, ring_->field()->describe() + " does not embed into " + K->describe());
  }
  RingPtr bk = ring_->base_change(K);
  std::vector<Poly> vals;
  for (const auto& v : values_) vals.push_back(bk->reduce(v.embed_field(K)));
  Derivation d(bk, name_, std::move(vals));
  d.status_ = status_;
  return d;
}

std::string Derivation::to_string() const {
  std::string s = name_ + ":";
  for (std::size_t i = 0; i < values_.size(); ++i) {
    s += (i ? ", " : " ") + (*ring_->vars())[i] + " -> " + values_[i].to_string();
  }
  return s;
}

Derivation check_derivation(const RingPtr& B, const std::string& name, std::vector<Poly> values) {
  if (B->field()->characteristic() != 0) {
    throw Error(ErrorKind::PositiveCharacteristic,
                "derivations need characteristic zero, field is " + B->field()->describe());
  }
  if (values.size() != B->ngens()) {
    throw Error(ErrorKind::InvalidInput, name + ": need one value per generator");
  }
  for (auto& v : values) {
    require_same_field(*B->field(), *v.field());
    v = B->reduce(same_vars(v.vars(), B->vars()) ? v : v.with_vars(B->vars()));
  }
  Derivation d(B, name, std::move(values));
  for (const auto& r : B->relations().generators()) {
    Poly res = d.apply(r);
    if (!res.is_zero()) {
      throw Error(ErrorKind::NotWellDefined,
                  name + ": D(" + r.to_string() + ") = " + res.to_string() + " is not in the relation ideal");
    }
  }
  return d;
}

Derivation check_derivation(const RingPtr& B, const std::string& name,
                            const std::map<std::string, std::string>& values) {
  for (const auto& [k, _] : values) {
    if (std::find(B->vars()->begin(), B->vars()->end(), k) == B->vars()->end()) {
      throw Error(ErrorKind::UnknownVariable, name + ": '" + k + "' is not a generator");
    }
  }
  std::vector<Poly> vals;
  for (const auto& v : *B->vars()) {
    auto it = values.find(v);
    if (it == values.end()) throw Error(ErrorKind::InvalidInput, name + ": no value for generator '" + v + "'");
    vals.push_back(parse_poly(it->second, B->vars(), B->field()));
  }
  return check_derivation(B, name, std::move(vals));
}

NilpotencyStatus certify_lnd(const Derivation& D, int bound) {
  for (std::size_t i = 0; i < D.ring()->ngens(); ++i) {
    Poly cur = D.ring()->reduce(D.ring()->variable(i));
    int n = 0;
    while (!cur.is_zero()) {
      if (++n > bound) return NilpotencyStatus::unknown();
      cur = D.apply(cur);
    }
  }
  return NilpotencyStatus::certified(bound);
}

namespace {

void monomials_of_degree(std::size_t nvars, int degree, Exponent& cur, std::size_t var, std::vector<Exponent>& out) {
  if (var + 1 == nvars) {
    cur[var] = degree;
    out.push_back(cur);
    cur[var] = 0;
    return;
  }
  for (int k = degree; k >= 0; --k) {
    cur[var] = k;
    monomials_of_degree(nvars, degree - k, cur, var + 1, out);
  }
  cur[var] = 0;
}

}  // namespace

std::vector<Exponent> monomials_up_to(std::size_t nvars, int degree) {
  std::vector<Exponent> out;
  if (nvars == 0) return {Exponent{}};
  for (int d = 0; d <= degree; ++d) {
    std::vector<Exponent> layer;
    Exponent cur(nvars, 0);
    monomials_of_degree(nvars, d, cur, 0, layer);
    std::sort(layer.begin(), layer.end(), [](const Exponent& a, const Exponent& b) { return grevlex_compare(a, b) < 0; });
    out.insert(out.end(), layer.begin(), layer.end());
  }
  return out;
}

LocalSlice find_local_slice(const Derivation& D, int search_degree) {
  const RingPresentation& B = *D.ring();
  auto test = [&](const Poly& s) -> std::optional<LocalSlice> {
    Poly a = D.apply(s);
    if (a.is_zero() || !D.apply(a).is_zero()) return std::nullopt;
    return LocalSlice{B.reduce(s), a};
  };
  for (std::size_t i = 0; i < B.ngens(); ++i) {
    if (auto r = test(B.variable(i))) return *r;
  }
  for (const auto& e : monomials_up_to(B.ngens(), search_degree)) {
    int deg = 0;
    for (int x : e) deg += x;
    if (deg < 2) continue;
    if (auto r = test(Poly::monomial(B.field(), B.vars(), e, B.field()->one()))) return *r;
  }
  throw Error(ErrorKind::NotFound, D.name() + ": no local slice among monomials of degree <= " +
                                       std::to_string(search_degree));
}

bool localized_equal(const RingPresentation& B, const Poly& a, const Localized& u, const Localized& v) {
  Poly lhs = u.numerator * a.pow(static_cast<unsigned>(v.a_power));
  Poly rhs = v.numerator * a.pow(static_cast<unsigned>(u.a_power));
  return B.is_zero(lhs - rhs);
}

Localized dixmier_project(const Derivation& D, const LocalSlice& slice, const Poly& b, int bound) {
  const RingPresentation& B = *D.ring();
  const Field& F = *B.field();
  auto orbit = D.orbit(b, bound);
  if (orbit.empty()) return Localized{Poly(B.field(), B.vars()), 0};
  const int K = static_cast<int>(orbit.size()) - 1;
  Poly num(B.field(), B.vars());
  Value coef = F.one();  // (-1)^n / n!
  for (int n = 0; n <= K; ++n) {
    if (n > 0) coef = F.div(F.neg(coef), F.from_int(n));
    Poly term = orbit[static_cast<std::size_t>(n)] * slice.s.pow(static_cast<unsigned>(n)) *
                slice.a.pow(static_cast<unsigned>(K - n));
    num += term.scale_value(coef);
  }
  return Localized{B.reduce(num), K};
}

Poly exp_apply(const Derivation& D, const FieldElem& lambda, const Poly& b, int bound) {
  const RingPresentation& B = *D.ring();
  require_same_field(*B.field(), *lambda.field());
  const Field& F = *B.field();
  if (F.characteristic() != 0) throw Error(ErrorKind::PositiveCharacteristic, "exp needs characteristic zero");
  auto orbit = D.orbit(b, bound);
  Poly out(B.field(), B.vars());
  Value coef = F.one();  // λ^n / n!
  for (std::size_t n = 0; n < orbit.size(); ++n) {
    if (n > 0) coef = F.div(F.mul(coef, lambda.value()), F.from_int(static_cast<long long>(n)));
    out += orbit[n].scale_value(coef);
  }
  return B.reduce(out);
}

Poly apply_homomorphism(const std::vector<Poly>& images, const RingPresentation& source,
                        const RingPresentation& target, const Poly& b) {
  std::map<std::string, Poly> sub;
  for (std::size_t i = 0; i < source.ngens(); ++i) sub.emplace((*source.vars())[i], images[i]);
  Poly f = same_vars(b.vars(), source.vars()) ? b : b.with_vars(source.vars());
  return target.reduce(f.substitute(sub, target.vars()));
}

std::vector<Poly> exp_map(const Derivation& D, const FieldElem& lambda, int bound) {
  const RingPresentation& B = *D.ring();
  std::vector<Poly> images;
  for (std::size_t i = 0; i < B.ngens(); ++i) images.push_back(exp_apply(D, lambda, B.variable(i), bound));
  for (const auto& r : B.relations().generators()) {
    if (!apply_homomorphism(images, B, B, r).is_zero()) {
      throw Error(ErrorKind::NotAHomomorphism, "exp(" + D.name() + ") does not preserve " + r.to_string());
    }
  }
  return images;
}

Poly FormalExp::apply(const Poly& b) const {
  std::map<std::string, Poly> sub;
  for (std::size_t i = 0; i < images.size(); ++i) sub.emplace((*ring->vars())[i], images[i]);
  return ring->reduce(b.substitute(sub, ring->vars()));
}

FormalExp exp_formal(const Derivation& D, const std::string& parameter, int bound) {
  const RingPresentation& B = *D.ring();
  if (B.field()->characteristic() != 0) throw Error(ErrorKind::PositiveCharacteristic, "exp needs characteristic zero");
  std::string T = parameter;
  while (std::find(B.vars()->begin(), B.vars()->end(), T) != B.vars()->end() || B.field()->has_symbol(T)) T += "_";
  RingPtr BT = B.extended({T});
  Poly Tp = Poly::variable(BT->field(), BT->vars(), T);
  const Field& F = *B.field();
  FormalExp out{BT, T, {}};
  for (std::size_t i = 0; i < B.ngens(); ++i) {
    auto orbit = D.orbit(B.variable(i), bound);
    Poly img(BT->field(), BT->vars());
    Value coef = F.one();
    for (std::size_t n = 0; n < orbit.size(); ++n) {
      if (n > 0) coef = F.div(coef, F.from_int(static_cast<long long>(n)));
      img += (orbit[n].with_vars(BT->vars()) * Tp.pow(static_cast<unsigned>(n))).scale_value(coef);
    }
    out.images.push_back(BT->reduce(img));
  }
  for (const auto& r : B.relations().generators()) {
    if (!out.apply(r).is_zero()) {
      throw Error(ErrorKind::NotAHomomorphism, "exp(T*" + D.name() + ") does not preserve " + r.to_string());
    }
  }
  return out;
}

}  // namespace lndkit
