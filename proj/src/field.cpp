#include "lndkit/field.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>
#include <tuple>

namespace lndkit {

namespace {

bool atomic_text(const std::string& s) {
  return s.find_first_of(" +()") == std::string::npos && s.find('-', 1) == std::string::npos;
}

std::string join_term(const std::string& out, const std::string& term) {
  if (out.empty()) return term;
  if (!term.empty() && term[0] == '-') return out + " - " + term.substr(1);
  return out + " + " + term;
}

}  // namespace

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

// ---------------------------------------------------------------- construction

FieldPtr Field::rationals() {
  auto f = std::shared_ptr<Field>(new Field());
  f->base_ = BaseKind::Rationals;
  f->finalize_signature();
  return f;
}

FieldPtr Field::prime_field(std::int64_t p) {
  if (!is_prime(p)) throw Error(ErrorKind::UnsupportedField, "characteristic " + std::to_string(p) + " is not prime");
  if (p > (std::int64_t{1} << 31)) throw Error(ErrorKind::UnsupportedField, "prime too large");
  auto f = std::shared_ptr<Field>(new Field());
  f->base_ = BaseKind::PrimeField;
  f->prime_ = p;
  f->finalize_signature();
  return f;
}

FieldPtr Field::with_ratfunc(const std::string& name) const {
  if (has_symbol(name)) throw Error(ErrorKind::NameCollision, "symbol '" + name + "' already used in " + signature_);
  if (!extension_names().empty()) {
    throw Error(ErrorKind::UnsupportedField, "rational-function indeterminates must precede algebraic extensions");
  }
  auto f = std::shared_ptr<Field>(new Field(*this));
  f->levels_.push_back({FieldLevel::Kind::RationalFunction, name, {}});
  f->finalize_signature();
  return f;
}

FieldPtr Field::extend(const std::string& name, const UPoly& minpoly, int root_search_bound) const {
  if (has_symbol(name)) throw Error(ErrorKind::NameCollision, "symbol '" + name + "' already used in " + signature_);
  UPoly m = minpoly;
  up_trim(top(), m);
  if (m.size() < 3) throw Error(ErrorKind::NotIrreducible, "minimal polynomial must have degree >= 2");
  if (!is_one(m.back())) throw Error(ErrorKind::NonMonic, "minimal polynomial of '" + name + "' is not monic");
  for (const Value& c : enumerate_small(root_search_bound, 600)) {
    if (is_zero(up_eval(top(), m, c))) {
      throw Error(ErrorKind::NotIrreducible,
                  "minimal polynomial of '" + name + "' has the root " + format(c) + " in " + signature_);
    }
  }
  auto f = std::shared_ptr<Field>(new Field(*this));
  f->levels_.push_back({FieldLevel::Kind::Extension, name, std::move(m)});
  f->finalize_signature();
  return f;
}

void Field::finalize_signature() {
  std::string s = base_ == BaseKind::Rationals ? "Q" : "GF(" + std::to_string(prime_) + ")";
  for (int L = 0; L < top(); ++L) {
    const FieldLevel& lv = levels_[L];
    if (lv.kind == FieldLevel::Kind::RationalFunction) {
      s += "(" + lv.name + ")";
    } else {
      s += "[" + lv.name + ": " + up_format(L, lv.minpoly, "Z") + "]";
    }
  }
  signature_ = s;
}

std::vector<std::string> Field::ratfunc_names() const {
  std::vector<std::string> out;
  for (const auto& lv : levels_) {
    if (lv.kind == FieldLevel::Kind::RationalFunction) out.push_back(lv.name);
  }
  return out;
}

std::vector<std::string> Field::extension_names() const {
  std::vector<std::string> out;
  for (const auto& lv : levels_) {
    if (lv.kind == FieldLevel::Kind::Extension) out.push_back(lv.name);
  }
  return out;
}

bool Field::has_symbol(const std::string& name) const {
  return std::any_of(levels_.begin(), levels_.end(), [&](const FieldLevel& lv) { return lv.name == name; });
}

std::size_t Field::extension_degree() const {
  std::size_t d = 1;
  for (const auto& lv : levels_) {
    if (lv.kind == FieldLevel::Kind::Extension) d *= lv.minpoly.size() - 1;
  }
  return d;
}

// ---------------------------------------------------------------- base helpers

std::int64_t Field::modp(std::int64_t a) const {
  a %= prime_;
  return a < 0 ? a + prime_ : a;
}

std::int64_t Field::inv_mod(std::int64_t a) const {
  std::int64_t t = 0, new_t = 1, r = prime_, new_r = modp(a);
  if (new_r == 0) throw Error(ErrorKind::DivisionByZero, "inverse of 0 in GF(" + std::to_string(prime_) + ")");
  while (new_r != 0) {
    std::int64_t q = r / new_r;
    std::tie(t, new_t) = std::make_pair(new_t, t - q * new_t);
    std::tie(r, new_r) = std::make_pair(new_r, r - q * new_r);
  }
  return modp(t);
}

Value Field::zero_at(int level) const {
  if (level == 0) {
    if (base_ == BaseKind::Rationals) return Value{mpq_class(0)};
    return Value{ModInt{0}};
  }
  if (levels_[level - 1].kind == FieldLevel::Kind::RationalFunction) {
    return Value{RatFn{{}, {one_at(level - 1)}}};
  }
  return Value{AlgElem{}};
}

Value Field::one_at(int level) const {
  Value base = base_ == BaseKind::Rationals ? Value{mpq_class(1)} : Value{ModInt{1 % prime_}};
  return lift(base, 0, level);
}

Value Field::lift(const Value& a, int from_level, int to_level) const {
  Value v = a;
  for (int L = from_level + 1; L <= to_level; ++L) {
    if (levels_[L - 1].kind == FieldLevel::Kind::RationalFunction) {
      RatFn r;
      if (!is_zero_at(L - 1, v)) r.num.push_back(v);
      r.den.push_back(one_at(L - 1));
      v = Value{std::move(r)};
    } else {
      AlgElem e;
      if (!is_zero_at(L - 1, v)) e.coeffs.push_back(v);
      v = Value{std::move(e)};
    }
  }
  return v;
}

Value Field::from_int(long long n) const { return from_rational(mpq_class(static_cast<long>(n))); }

Value Field::from_rational(const mpq_class& q) const {
  Value base;
  if (base_ == BaseKind::Rationals) {
    base = Value{q};
  } else {
    mpz_class p(static_cast<long>(prime_));
    mpz_class num = q.get_num() % p;
    mpz_class den = q.get_den() % p;
    if (num < 0) num += p;
    if (den < 0) den += p;
    if (den == 0) throw Error(ErrorKind::DivisionByZero, "denominator vanishes in GF(" + std::to_string(prime_) + ")");
    std::int64_t n = num.get_si(), d = den.get_si();
    base = Value{ModInt{static_cast<std::int64_t>((static_cast<__int128>(n) * inv_mod(d)) % prime_)}};
  }
  return lift(base, 0, top());
}

Value Field::generator(const std::string& name) const {
  for (int L = 1; L <= top(); ++L) {
    if (levels_[L - 1].name != name) continue;
    Value g;
    if (levels_[L - 1].kind == FieldLevel::Kind::RationalFunction) {
      g = Value{RatFn{{zero_at(L - 1), one_at(L - 1)}, {one_at(L - 1)}}};
    } else {
      g = Value{AlgElem{{zero_at(L - 1), one_at(L - 1)}}};
    }
    return lift(g, L, top());
  }
  throw Error(ErrorKind::UnknownSymbol, "'" + name + "' is not a generator of " + signature_);
}

// ---------------------------------------------------------------- level arithmetic

bool Field::is_zero_at(int level, const Value& a) const {
  if (level == 0) {
    if (base_ == BaseKind::Rationals) return sgn(std::get<mpq_class>(a.rep)) == 0;
    return std::get<ModInt>(a.rep).v == 0;
  }
  if (levels_[level - 1].kind == FieldLevel::Kind::RationalFunction) return std::get<RatFn>(a.rep).num.empty();
  return std::get<AlgElem>(a.rep).coeffs.empty();
}

bool Field::equal_at(int level, const Value& a, const Value& b) const { return compare_at(level, a, b) == 0; }

int Field::compare_at(int level, const Value& a, const Value& b) const {
  auto cmp_poly = [&](const UPoly& x, const UPoly& y) {
    if (x.size() != y.size()) return x.size() < y.size() ? -1 : 1;
    for (std::size_t i = x.size(); i-- > 0;) {
      int c = compare_at(level - 1, x[i], y[i]);
      if (c != 0) return c;
    }
    return 0;
  };
  if (level == 0) {
    if (base_ == BaseKind::Rationals) {
      int c = cmp(std::get<mpq_class>(a.rep), std::get<mpq_class>(b.rep));
      return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    auto x = std::get<ModInt>(a.rep).v, y = std::get<ModInt>(b.rep).v;
    return x < y ? -1 : (x > y ? 1 : 0);
  }
  if (levels_[level - 1].kind == FieldLevel::Kind::RationalFunction) {
    const auto& x = std::get<RatFn>(a.rep);
    const auto& y = std::get<RatFn>(b.rep);
    int c = cmp_poly(x.num, y.num);
    return c != 0 ? c : cmp_poly(x.den, y.den);
  }
  return cmp_poly(std::get<AlgElem>(a.rep).coeffs, std::get<AlgElem>(b.rep).coeffs);
}

RatFn Field::canonical_ratfn(int level, UPoly num, UPoly den) const {
  // level is the coefficient level (one below the rational-function level)
  up_trim(level, num);
  up_trim(level, den);
  if (den.empty()) throw Error(ErrorKind::DivisionByZero, "zero denominator");
  if (num.empty()) return RatFn{{}, {one_at(level)}};
  if (den.size() > 1) {
    UPoly g = up_gcd(level, num, den);
    if (g.size() > 1) {
      UPoly q;
      up_divmod(level, num, g, &q, nullptr);
      num = std::move(q);
      up_divmod(level, den, g, &q, nullptr);
      den = std::move(q);
    }
  }
  if (!equal_at(level, den.back(), one_at(level))) {
    Value c = inv_at(level, den.back());
    num = up_scale(level, num, c);
    den = up_scale(level, den, c);
  }
  return RatFn{std::move(num), std::move(den)};
}

Value Field::add_at(int level, const Value& a, const Value& b) const {
  if (level == 0) {
    if (base_ == BaseKind::Rationals) return Value{mpq_class(std::get<mpq_class>(a.rep) + std::get<mpq_class>(b.rep))};
    return Value{ModInt{modp(std::get<ModInt>(a.rep).v + std::get<ModInt>(b.rep).v)}};
  }
  if (levels_[level - 1].kind == FieldLevel::Kind::RationalFunction) {
    const auto& x = std::get<RatFn>(a.rep);
    const auto& y = std::get<RatFn>(b.rep);
    if (x.num.empty()) return b;
    if (y.num.empty()) return a;
    if (up_equal(level - 1, x.den, y.den)) return Value{canonical_ratfn(level - 1, up_add(level - 1, x.num, y.num), x.den)};
    UPoly num = up_add(level - 1, up_mul(level - 1, x.num, y.den), up_mul(level - 1, y.num, x.den));
    return Value{canonical_ratfn(level - 1, std::move(num), up_mul(level - 1, x.den, y.den))};
  }
  return Value{AlgElem{up_add(level - 1, std::get<AlgElem>(a.rep).coeffs, std::get<AlgElem>(b.rep).coeffs)}};
}

Value Field::neg_at(int level, const Value& a) const {
  if (level == 0) {
    if (base_ == BaseKind::Rationals) return Value{mpq_class(-std::get<mpq_class>(a.rep))};
    return Value{ModInt{modp(-std::get<ModInt>(a.rep).v)}};
  }
  Value m1 = neg_at(level - 1, one_at(level - 1));
  if (levels_[level - 1].kind == FieldLevel::Kind::RationalFunction) {
    const auto& x = std::get<RatFn>(a.rep);
    return Value{RatFn{up_scale(level - 1, x.num, m1), x.den}};
  }
  return Value{AlgElem{up_scale(level - 1, std::get<AlgElem>(a.rep).coeffs, m1)}};
}

Value Field::sub_at(int level, const Value& a, const Value& b) const { return add_at(level, a, neg_at(level, b)); }

Value Field::mul_at(int level, const Value& a, const Value& b) const {
  if (level == 0) {
    if (base_ == BaseKind::Rationals) return Value{mpq_class(std::get<mpq_class>(a.rep) * std::get<mpq_class>(b.rep))};
    return Value{ModInt{static_cast<std::int64_t>(
        (static_cast<__int128>(std::get<ModInt>(a.rep).v) * std::get<ModInt>(b.rep).v) % prime_)}};
  }
  if (levels_[level - 1].kind == FieldLevel::Kind::RationalFunction) {
    const auto& x = std::get<RatFn>(a.rep);
    const auto& y = std::get<RatFn>(b.rep);
    if (x.num.empty() || y.num.empty()) return zero_at(level);
    return Value{canonical_ratfn(level - 1, up_mul(level - 1, x.num, y.num), up_mul(level - 1, x.den, y.den))};
  }
  UPoly prod = up_mul(level - 1, std::get<AlgElem>(a.rep).coeffs, std::get<AlgElem>(b.rep).coeffs);
  UPoly rem;
  up_divmod(level - 1, prod, levels_[level - 1].minpoly, nullptr, &rem);
  return Value{AlgElem{std::move(rem)}};
}

Value Field::inv_at(int level, const Value& a) const {
  if (is_zero_at(level, a)) throw Error(ErrorKind::DivisionByZero, "division by zero in " + signature_);
  if (level == 0) {
    if (base_ == BaseKind::Rationals) return Value{mpq_class(1 / std::get<mpq_class>(a.rep))};
    return Value{ModInt{inv_mod(std::get<ModInt>(a.rep).v)}};
  }
  if (levels_[level - 1].kind == FieldLevel::Kind::RationalFunction) {
    const auto& x = std::get<RatFn>(a.rep);
    return Value{canonical_ratfn(level - 1, x.den, x.num)};
  }
  const FieldLevel& lv = levels_[level - 1];
  UPoly g;
  UPoly s = up_inverse_cofactor(level - 1, std::get<AlgElem>(a.rep).coeffs, lv.minpoly, &g);
  if (g.size() != 1) {
    throw Error(ErrorKind::NotIrreducible, "minimal polynomial of '" + lv.name + "' is reducible (zero divisor found)");
  }
  return Value{AlgElem{std::move(s)}};
}

Value Field::pow(const Value& a, unsigned n) const {
  Value result = one();
  Value base = a;
  while (n > 0) {
    if (n & 1u) result = mul(result, base);
    n >>= 1u;
    if (n > 0) base = mul(base, base);
  }
  return result;
}

bool Field::is_base_constant(const Value& a) const {
  const Value* v = &a;
  for (int L = top(); L > 0; --L) {
    if (levels_[L - 1].kind == FieldLevel::Kind::RationalFunction) {
      const auto& r = std::get<RatFn>(v->rep);
      if (r.num.size() > 1 || r.den.size() > 1) return false;
      if (r.num.empty()) return true;
      v = &r.num[0];
    } else {
      const auto& e = std::get<AlgElem>(v->rep);
      if (e.coeffs.size() > 1) return false;
      if (e.coeffs.empty()) return true;
      v = &e.coeffs[0];
    }
  }
  return true;
}

// ---------------------------------------------------------------- univariate polynomials

void Field::up_trim(int level, UPoly& p) const {
  while (!p.empty() && is_zero_at(level, p.back())) p.pop_back();
}

UPoly Field::up_add(int level, const UPoly& a, const UPoly& b) const {
  UPoly r(std::max(a.size(), b.size()), zero_at(level));
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (i < a.size() && i < b.size()) {
      r[i] = add_at(level, a[i], b[i]);
    } else {
      r[i] = i < a.size() ? a[i] : b[i];
    }
  }
  up_trim(level, r);
  return r;
}

UPoly Field::up_sub(int level, const UPoly& a, const UPoly& b) const {
  UPoly nb;
  nb.reserve(b.size());
  for (const auto& c : b) nb.push_back(neg_at(level, c));
  return up_add(level, a, nb);
}

UPoly Field::up_mul(int level, const UPoly& a, const UPoly& b) const {
  if (a.empty() || b.empty()) return {};
  UPoly r(a.size() + b.size() - 1, zero_at(level));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (is_zero_at(level, a[i])) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (is_zero_at(level, b[j])) continue;
      r[i + j] = add_at(level, r[i + j], mul_at(level, a[i], b[j]));
    }
  }
  up_trim(level, r);
  return r;
}

UPoly Field::up_scale(int level, const UPoly& a, const Value& c) const {
  if (is_zero_at(level, c)) return {};
  UPoly r;
  r.reserve(a.size());
  for (const auto& x : a) r.push_back(mul_at(level, x, c));
  up_trim(level, r);
  return r;
}

void Field::up_divmod(int level, const UPoly& a, const UPoly& b, UPoly* quot, UPoly* rem) const {
  if (b.empty()) throw Error(ErrorKind::DivisionByZero, "polynomial division by zero");
  UPoly r = a;
  up_trim(level, r);
  UPoly q;
  if (r.size() >= b.size()) q.assign(r.size() - b.size() + 1, zero_at(level));
  const bool monic = equal_at(level, b.back(), one_at(level));
  Value lead_inv = monic ? one_at(level) : inv_at(level, b.back());
  while (!r.empty() && r.size() >= b.size()) {
    std::size_t shift = r.size() - b.size();
    Value c = monic ? r.back() : mul_at(level, r.back(), lead_inv);
    q[shift] = c;
    for (std::size_t i = 0; i + 1 < b.size(); ++i) {
      if (is_zero_at(level, b[i])) continue;
      r[i + shift] = sub_at(level, r[i + shift], mul_at(level, c, b[i]));
    }
    r.pop_back();
    up_trim(level, r);
  }
  if (quot) {
    up_trim(level, q);
    *quot = std::move(q);
  }
  if (rem) *rem = std::move(r);
}

UPoly Field::up_monic(int level, const UPoly& a) const {
  if (a.empty()) return a;
  if (equal_at(level, a.back(), one_at(level))) return a;
  return up_scale(level, a, inv_at(level, a.back()));
}

UPoly Field::up_gcd(int level, UPoly a, UPoly b) const {
  up_trim(level, a);
  up_trim(level, b);
  while (!b.empty()) {
    UPoly r;
    up_divmod(level, a, b, nullptr, &r);
    a = std::move(b);
    b = std::move(r);
  }
  return up_monic(level, a);
}

UPoly Field::up_inverse_cofactor(int level, const UPoly& a, const UPoly& b, UPoly* gcd) const {
  UPoly r0 = b, r1 = a, s0, s1{one_at(level)};
  up_trim(level, r1);
  while (!r1.empty()) {
    UPoly q, r;
    up_divmod(level, r0, r1, &q, &r);
    UPoly s = up_sub(level, s0, up_mul(level, q, s1));
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s);
  }
  if (r0.empty()) {
    if (gcd) gcd->clear();
    return {};
  }
  Value c = inv_at(level, r0.back());
  if (gcd) *gcd = up_scale(level, r0, c);
  UPoly s = up_scale(level, s0, c);
  UPoly rem;
  up_divmod(level, s, b, nullptr, &rem);
  return rem;
}

UPoly Field::up_derivative(int level, const UPoly& a) const {
  UPoly r;
  for (std::size_t i = 1; i < a.size(); ++i) {
    Value k = base_ == BaseKind::Rationals ? Value{mpq_class(static_cast<long>(i))}
                                           : Value{ModInt{modp(static_cast<std::int64_t>(i))}};
    r.push_back(mul_at(level, a[i], lift(k, 0, level)));
  }
  up_trim(level, r);
  return r;
}

Value Field::up_eval(int level, const UPoly& p, const Value& x) const {
  Value acc = zero_at(level);
  for (std::size_t i = p.size(); i-- > 0;) acc = add_at(level, mul_at(level, acc, x), p[i]);
  return acc;
}

bool Field::up_equal(int level, const UPoly& a, const UPoly& b) const {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!equal_at(level, a[i], b[i])) return false;
  }
  return true;
}

std::string Field::up_format(int level, const UPoly& p, const std::string& var) const {
  std::string out;
  for (std::size_t k = p.size(); k-- > 0;) {
    if (is_zero_at(level, p[k])) continue;
    std::string cs = format_at(level, p[k]);
    std::string mono = k == 0 ? "" : (k == 1 ? var : var + "^" + std::to_string(k));
    std::string term;
    if (mono.empty()) {
      term = cs;
    } else if (cs == "1") {
      term = mono;
    } else if (cs == "-1") {
      term = "-" + mono;
    } else if (atomic_text(cs)) {
      term = cs + "*" + mono;
    } else {
      term = "(" + cs + ")*" + mono;
    }
    out = join_term(out, term);
  }
  return out.empty() ? "0" : out;
}

std::string Field::format_at(int level, const Value& a) const {
  if (level == 0) {
    if (base_ == BaseKind::Rationals) return std::get<mpq_class>(a.rep).get_str();
    return std::to_string(std::get<ModInt>(a.rep).v);
  }
  const FieldLevel& lv = levels_[level - 1];
  if (lv.kind == FieldLevel::Kind::RationalFunction) {
    const auto& r = std::get<RatFn>(a.rep);
    std::string num = up_format(level - 1, r.num, lv.name);
    if (r.den.size() == 1) return num;
    return "(" + num + ")/(" + up_format(level - 1, r.den, lv.name) + ")";
  }
  return up_format(level - 1, std::get<AlgElem>(a.rep).coeffs, lv.name);
}

// ---------------------------------------------------------------- sampling

Value Field::sample_at(int level, std::mt19937_64& rng, int height) const {
  auto small = [&](int lo, int hi) { return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1)); };
  if (level == 0) {
    if (base_ == BaseKind::Rationals) {
      mpq_class q(small(-height, height), small(1, height));
      q.canonicalize();
      return Value{q};
    }
    return Value{ModInt{static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(prime_))}};
  }
  const FieldLevel& lv = levels_[level - 1];
  if (lv.kind == FieldLevel::Kind::RationalFunction) {
    UPoly num, den;
    int dn = small(0, 2);
    for (int i = 0; i <= dn; ++i) num.push_back(sample_at(level - 1, rng, height));
    int dd = small(0, 1);
    for (int i = 0; i < dd; ++i) den.push_back(sample_at(level - 1, rng, height));
    den.push_back(one_at(level - 1));
    return Value{canonical_ratfn(level - 1, std::move(num), std::move(den))};
  }
  UPoly c;
  for (std::size_t i = 0; i + 1 < lv.minpoly.size(); ++i) c.push_back(sample_at(level - 1, rng, height));
  up_trim(level - 1, c);
  return Value{AlgElem{std::move(c)}};
}

std::vector<Value> Field::enumerate_at(int level, int bound, std::size_t cap) const {
  std::vector<Value> out;
  if (level == 0) {
    if (base_ == BaseKind::Rationals) {
      out.push_back(Value{mpq_class(0)});
      for (int q = 1; q <= bound; ++q) {
        for (int p = 1; p <= bound; ++p) {
          mpq_class v(p, q);
          v.canonicalize();
          if (v.get_den() != q) continue;
          out.push_back(Value{v});
          out.push_back(Value{mpq_class(-v)});
        }
      }
    } else {
      std::int64_t n = std::min<std::int64_t>(prime_, std::max<std::int64_t>(bound * bound, 64));
      for (std::int64_t v = 0; v < n; ++v) out.push_back(Value{ModInt{v}});
    }
    if (out.size() > cap) out.resize(cap);
    return out;
  }
  std::vector<Value> lower = enumerate_at(level - 1, bound, std::max<std::size_t>(8, cap / 8));
  const FieldLevel& lv = levels_[level - 1];
  for (const Value& c0 : lower) {
    out.push_back(lift(c0, level - 1, level));
  }
  for (const Value& c1 : lower) {
    if (is_zero_at(level - 1, c1)) continue;
    for (const Value& c0 : lower) {
      if (out.size() >= cap) return out;
      UPoly p{c0, c1};
      up_trim(level - 1, p);
      if (lv.kind == FieldLevel::Kind::RationalFunction) {
        out.push_back(Value{RatFn{p, {one_at(level - 1)}}});
        // also the reciprocal, so that roots like 1/t are scanned
        out.push_back(Value{canonical_ratfn(level - 1, {one_at(level - 1)}, p)});
      } else {
        out.push_back(Value{AlgElem{p}});
      }
    }
  }
  if (out.size() > cap) out.resize(cap);
  return out;
}

// ---------------------------------------------------------------- embeddings

bool Field::embeds_into(const Field& other) const {
  if (base_ != other.base_ || prime_ != other.prime_) return false;
  for (int L = 1; L <= top(); ++L) {
    const FieldLevel& lv = levels_[L - 1];
    auto it = std::find_if(other.levels_.begin(), other.levels_.end(),
                           [&](const FieldLevel& o) { return o.name == lv.name && o.kind == lv.kind; });
    if (it == other.levels_.end()) return false;
    if (lv.kind == FieldLevel::Kind::Extension) {
      // the image of the generator must be a root of the mapped minimal polynomial
      Value acc = other.zero();
      Value g = other.generator(lv.name);
      for (std::size_t i = lv.minpoly.size(); i-- > 0;) {
        acc = other.add(other.mul(acc, g), embed_at(L - 1, lv.minpoly[i], other));
      }
      if (!other.is_zero(acc)) return false;
    }
  }
  return true;
}

Value Field::embed_at(int level, const Value& a, const Field& other) const {
  if (level == 0) {
    if (base_ == BaseKind::Rationals) return other.from_rational(std::get<mpq_class>(a.rep));
    return other.from_int(std::get<ModInt>(a.rep).v);
  }
  const FieldLevel& lv = levels_[level - 1];
  Value g = other.generator(lv.name);
  auto eval = [&](const UPoly& p) {
    Value acc = other.zero();
    for (std::size_t i = p.size(); i-- > 0;) acc = other.add(other.mul(acc, g), embed_at(level - 1, p[i], other));
    return acc;
  };
  if (lv.kind == FieldLevel::Kind::RationalFunction) {
    const auto& r = std::get<RatFn>(a.rep);
    return other.div(eval(r.num), eval(r.den));
  }
  return eval(std::get<AlgElem>(a.rep).coeffs);
}

Value Field::embed(const Value& a, const Field& other) const {
  if (same_as(other)) return a;
  return embed_at(top(), a, other);
}

FieldElem FieldElem::embed(const FieldPtr& target) const {
  if (field_->same_as(*target)) return {target, value_};
  if (!field_->embeds_into(*target)) {
    throw Error(ErrorKind::FieldMismatch, field_->describe() + " does not embed into " + target->describe());
  }
  return {target, field_->embed(value_, *target)};
}

void require_same_field(const Field& a, const Field& b) {
  if (!a.same_as(b)) throw Error(ErrorKind::FieldMismatch, a.describe() + " vs " + b.describe());
}

FieldElem operator+(const FieldElem& a, const FieldElem& b) {
  require_same_field(*a.field_, *b.field_);
  return {a.field_, a.field_->add(a.value_, b.value_)};
}
FieldElem operator-(const FieldElem& a, const FieldElem& b) {
  require_same_field(*a.field_, *b.field_);
  return {a.field_, a.field_->sub(a.value_, b.value_)};
}
FieldElem operator*(const FieldElem& a, const FieldElem& b) {
  require_same_field(*a.field_, *b.field_);
  return {a.field_, a.field_->mul(a.value_, b.value_)};
}
FieldElem operator/(const FieldElem& a, const FieldElem& b) {
  require_same_field(*a.field_, *b.field_);
  return {a.field_, a.field_->div(a.value_, b.value_)};
}
bool operator==(const FieldElem& a, const FieldElem& b) {
  return a.field_->same_as(*b.field_) && a.field_->equal(a.value_, b.value_);
}

// ---------------------------------------------------------------- squares in F_p(t)

std::optional<std::int64_t> sqrt_mod(std::int64_t a, std::int64_t p) {
  auto mulm = [p](std::int64_t x, std::int64_t y) {
    return static_cast<std::int64_t>((static_cast<__int128>(x) * y) % p);
  };
  auto powm = [&](std::int64_t b, std::int64_t e) {
    std::int64_t r = 1;
    b %= p;
    while (e > 0) {
      if (e & 1) r = mulm(r, b);
      b = mulm(b, b);
      e >>= 1;
    }
    return r;
  };
  a %= p;
  if (a < 0) a += p;
  if (a == 0 || p == 2) return a;
  if (powm(a, (p - 1) / 2) != 1) return std::nullopt;
  // Tonelli-Shanks
  std::int64_t q = p - 1, s = 0;
  while (q % 2 == 0) {
    q /= 2;
    ++s;
  }
  std::int64_t z = 2;
  while (powm(z, (p - 1) / 2) != p - 1) ++z;
  std::int64_t m = s, c = powm(z, q), t = powm(a, q), r = powm(a, (q + 1) / 2);
  while (t != 1) {
    std::int64_t i = 0, tt = t;
    while (tt != 1) {
      tt = mulm(tt, tt);
      ++i;
    }
    std::int64_t b = c;
    for (std::int64_t j = 0; j < m - i - 1; ++j) b = mulm(b, b);
    m = i;
    c = mulm(b, b);
    t = mulm(t, c);
    r = mulm(r, b);
  }
  return r;
}

std::vector<SquarefreeFactor> squarefree_decomposition(const Field& fp, const UPoly& f, Value* leading) {
  if (f.empty()) throw Error(ErrorKind::ZeroElement, "squarefree decomposition of zero");
  const std::int64_t p = fp.characteristic();
  if (leading) *leading = f.back();
  std::vector<SquarefreeFactor> out;
  UPoly c0 = fp.up_monic(0, f);
  int scale = 1;
  while (c0.size() > 1) {
    UPoly c = fp.up_gcd(0, c0, fp.up_derivative(0, c0));
    UPoly w;
    fp.up_divmod(0, c0, c, &w, nullptr);
    int i = 1;
    while (w.size() > 1) {
      UPoly y = fp.up_gcd(0, w, c);
      UPoly fac;
      fp.up_divmod(0, w, y, &fac, nullptr);
      if (fac.size() > 1) out.push_back({fac, i * scale});
      w = y;
      UPoly cq;
      fp.up_divmod(0, c, y, &cq, nullptr);
      c = cq;
      ++i;
    }
    if (c.size() <= 1) break;
    // c is a p-th power: its only nonzero coefficients sit at multiples of p
    UPoly root;
    for (std::size_t k = 0; k < c.size(); k += static_cast<std::size_t>(p)) root.push_back(c[k]);
    c0 = fp.up_monic(0, root);
    scale *= static_cast<int>(p);
  }
  return out;
}

bool is_square(const FieldElem& a, FieldElem* root) {
  const Field& f = *a.field();
  if (f.base() != BaseKind::PrimeField || f.top() != 1 ||
      f.levels()[0].kind != FieldLevel::Kind::RationalFunction) {
    throw Error(ErrorKind::UnsupportedField, "is_square requires GF(p)(t), got " + f.describe());
  }
  if (a.is_zero()) throw Error(ErrorKind::ZeroElement, "is_square of zero");
  const std::int64_t p = f.characteristic();
  const auto& r = std::get<RatFn>(a.value().rep);

  UPoly root_num{f.one_at(0)}, root_den{f.one_at(0)};
  Value lead_num, lead_den;
  for (int side = 0; side < 2; ++side) {
    const UPoly& poly = side == 0 ? r.num : r.den;
    auto factors = squarefree_decomposition(f, poly, side == 0 ? &lead_num : &lead_den);
    for (const auto& sf : factors) {
      if (sf.multiplicity % 2 != 0) return false;
      UPoly& acc = side == 0 ? root_num : root_den;
      for (int k = 0; k < sf.multiplicity / 2; ++k) acc = f.up_mul(0, acc, sf.factor);
    }
  }
  // den is monic, so the residual constant is the numerator's leading coefficient
  auto s = sqrt_mod(std::get<ModInt>(lead_num.rep).v, p);
  if (!s) return false;
  if (root) {
    root_num = f.up_scale(0, root_num, Value{ModInt{*s}});
    Value n{RatFn{root_num, {f.one_at(0)}}};
    Value d{RatFn{root_den, {f.one_at(0)}}};
    *root = FieldElem(a.field(), f.div(n, d));
  }
  return true;
}

}  // namespace lndkit
