#include "lndkit/poly.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

namespace lndkit {

namespace {

bool atomic_text(const std::string& s) {
  return s.find_first_of(" +()") == std::string::npos && s.find('-', 1) == std::string::npos;
}

struct GrevlexGreater {
  bool operator()(const Exponent& a, const Exponent& b) const { return grevlex_compare(a, b) > 0; }
};

// Sums terms keyed by exponent, in descending grevlex order.
class TermAccumulator {
 public:
  explicit TermAccumulator(const Field* field) : field_(field) {}

  void add(const Exponent& exp, const Value& coef) {
    auto it = terms_.find(exp);
    if (it == terms_.end()) {
      terms_.emplace(exp, coef);
    } else {
      it->second = field_->add(it->second, coef);
    }
  }

  std::vector<Term> take() {
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (auto& [e, c] : terms_) {
      if (!field_->is_zero(c)) out.push_back(Term{e, std::move(c)});
    }
    return out;
  }

 private:
  const Field* field_;
  std::map<Exponent, Value, GrevlexGreater> terms_;
};

}  // namespace

VarsPtr make_vars(VarList names) {
  std::set<std::string> seen;
  for (const auto& n : names) {
    if (!seen.insert(n).second) throw Error(ErrorKind::NameCollision, "duplicate variable '" + n + "'");
  }
  return std::make_shared<const VarList>(std::move(names));
}

bool same_vars(const VarsPtr& a, const VarsPtr& b) { return a == b || *a == *b; }

// ---------------------------------------------------------------- monomial orders

int grevlex_compare(const Exponent& a, const Exponent& b) {
  int da = std::accumulate(a.begin(), a.end(), 0);
  int db = std::accumulate(b.begin(), b.end(), 0);
  if (da != db) return da < db ? -1 : 1;
  for (std::size_t i = a.size(); i-- > 0;) {
    if (a[i] != b[i]) return a[i] < b[i] ? 1 : -1;
  }
  return 0;
}

MonomialOrder MonomialOrder::elimination(std::size_t nvars, const std::vector<int>& eliminated) {
  MonomialOrder o;
  o.kind = Kind::BlockGrevlex;
  std::vector<bool> taken(nvars, false);
  for (int v : eliminated) {
    o.priority.push_back(v);
    taken[static_cast<std::size_t>(v)] = true;
  }
  for (std::size_t v = 0; v < nvars; ++v) {
    if (!taken[v]) o.priority.push_back(static_cast<int>(v));
  }
  o.block = eliminated.size();
  return o;
}

int MonomialOrder::compare(const Exponent& a, const Exponent& b) const {
  const std::size_t n = a.size();
  auto at = [&](const Exponent& e, std::size_t pos) {
    return priority.empty() ? e[pos] : e[static_cast<std::size_t>(priority[pos])];
  };
  auto grevlex_range = [&](std::size_t lo, std::size_t hi) {
    int da = 0, db = 0;
    for (std::size_t p = lo; p < hi; ++p) {
      da += at(a, p);
      db += at(b, p);
    }
    if (da != db) return da < db ? -1 : 1;
    for (std::size_t p = hi; p-- > lo;) {
      if (at(a, p) != at(b, p)) return at(a, p) < at(b, p) ? 1 : -1;
    }
    return 0;
  };
  switch (kind) {
    case Kind::Lex:
      for (std::size_t p = 0; p < n; ++p) {
        if (at(a, p) != at(b, p)) return at(a, p) < at(b, p) ? -1 : 1;
      }
      return 0;
    case Kind::Grevlex:
      return grevlex_range(0, n);
    case Kind::BlockGrevlex: {
      int c = grevlex_range(0, std::min(block, n));
      return c != 0 ? c : grevlex_range(std::min(block, n), n);
    }
  }
  return 0;
}

std::string MonomialOrder::key() const {
  std::string k = kind == Kind::Lex ? "lex" : (kind == Kind::Grevlex ? "grevlex" : "block" + std::to_string(block));
  for (int p : priority) k += "," + std::to_string(p);
  return k;
}

// ---------------------------------------------------------------- construction

Poly Poly::constant(const FieldPtr& field, const VarsPtr& vars, const FieldElem& c) {
  require_same_field(*field, *c.field());
  Poly p(field, vars);
  if (!c.is_zero()) p.terms_.push_back(Term{Exponent(vars->size(), 0), c.value()});
  return p;
}

Poly Poly::from_int(const FieldPtr& field, const VarsPtr& vars, long long n) {
  return constant(field, vars, FieldElem::from_int(field, n));
}

Poly Poly::variable(const FieldPtr& field, const VarsPtr& vars, const std::string& name) {
  auto it = std::find(vars->begin(), vars->end(), name);
  if (it == vars->end()) throw Error(ErrorKind::UnknownVariable, "'" + name + "'");
  Exponent e(vars->size(), 0);
  e[static_cast<std::size_t>(it - vars->begin())] = 1;
  return monomial(field, vars, std::move(e), field->one());
}

Poly Poly::monomial(const FieldPtr& field, const VarsPtr& vars, Exponent exp, Value coef) {
  Poly p(field, vars);
  if (!field->is_zero(coef)) p.terms_.push_back(Term{std::move(exp), std::move(coef)});
  return p;
}

Poly Poly::from_terms(const FieldPtr& field, const VarsPtr& vars, std::vector<Term> terms) {
  TermAccumulator acc(field.get());
  for (auto& t : terms) acc.add(t.exp, t.coef);
  Poly p(field, vars);
  p.terms_ = acc.take();
  return p;
}

// ---------------------------------------------------------------- queries

bool Poly::is_constant() const {
  return terms_.empty() ||
         (terms_.size() == 1 && std::all_of(terms_[0].exp.begin(), terms_[0].exp.end(), [](int e) { return e == 0; }));
}

FieldElem Poly::constant_value() const {
  if (!is_constant()) throw Error(ErrorKind::InvalidInput, "expected a constant, got " + to_string());
  return terms_.empty() ? FieldElem::zero(field_) : FieldElem(field_, terms_[0].coef);
}

int Poly::total_degree() const {
  int d = -1;
  for (const auto& t : terms_) d = std::max(d, std::accumulate(t.exp.begin(), t.exp.end(), 0));
  return d;
}

int Poly::degree_in(std::size_t var) const {
  int d = -1;
  for (const auto& t : terms_) d = std::max(d, t.exp[var]);
  return d;
}

FieldElem Poly::coefficient(const Exponent& exp) const {
  for (const auto& t : terms_) {
    if (t.exp == exp) return {field_, t.coef};
  }
  return FieldElem::zero(field_);
}

const Term& Poly::leading(const MonomialOrder& order) const {
  if (terms_.empty()) throw Error(ErrorKind::ZeroElement, "leading term of zero polynomial");
  if (order.kind == MonomialOrder::Kind::Grevlex && order.priority.empty()) return terms_.front();
  const Term* best = &terms_.front();
  for (const auto& t : terms_) {
    if (order.compare(t.exp, best->exp) > 0) best = &t;
  }
  return *best;
}

std::vector<bool> Poly::support() const {
  std::vector<bool> s(nvars(), false);
  for (const auto& t : terms_) {
    for (std::size_t i = 0; i < t.exp.size(); ++i) {
      if (t.exp[i] != 0) s[i] = true;
    }
  }
  return s;
}

// ---------------------------------------------------------------- arithmetic

void Poly::check_compatible(const Poly& other) const {
  require_same_field(*field_, *other.field_);
  if (!same_vars(vars_, other.vars_)) throw Error(ErrorKind::UnknownVariable, "polynomials over different variable lists");
}

Poly Poly::operator-() const {
  Poly r(field_, vars_);
  r.terms_.reserve(terms_.size());
  for (const auto& t : terms_) r.terms_.push_back(Term{t.exp, field_->neg(t.coef)});
  return r;
}

Poly operator+(const Poly& a, const Poly& b) {
  a.check_compatible(b);
  Poly r(a.field_, a.vars_);
  r.terms_.reserve(a.terms_.size() + b.terms_.size());
  std::size_t i = 0, j = 0;
  while (i < a.terms_.size() || j < b.terms_.size()) {
    int c = i == a.terms_.size() ? -1 : (j == b.terms_.size() ? 1 : grevlex_compare(a.terms_[i].exp, b.terms_[j].exp));
    if (c > 0) {
      r.terms_.push_back(a.terms_[i++]);
    } else if (c < 0) {
      r.terms_.push_back(b.terms_[j++]);
    } else {
      Value s = a.field_->add(a.terms_[i].coef, b.terms_[j].coef);
      if (!a.field_->is_zero(s)) r.terms_.push_back(Term{a.terms_[i].exp, std::move(s)});
      ++i;
      ++j;
    }
  }
  return r;
}

Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

Poly operator*(const Poly& a, const Poly& b) {
  a.check_compatible(b);
  if (a.is_zero() || b.is_zero()) return Poly(a.field_, a.vars_);
  TermAccumulator acc(a.field_.get());
  Exponent e(a.nvars());
  for (const auto& s : a.terms_) {
    for (const auto& t : b.terms_) {
      for (std::size_t k = 0; k < e.size(); ++k) e[k] = s.exp[k] + t.exp[k];
      acc.add(e, a.field_->mul(s.coef, t.coef));
    }
  }
  Poly r(a.field_, a.vars_);
  r.terms_ = acc.take();
  return r;
}

bool operator==(const Poly& a, const Poly& b) {
  if (!a.field_->same_as(*b.field_) || !same_vars(a.vars_, b.vars_)) return false;
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    if (a.terms_[i].exp != b.terms_[i].exp || !a.field_->equal(a.terms_[i].coef, b.terms_[i].coef)) return false;
  }
  return true;
}

Poly Poly::scale(const FieldElem& c) const {
  require_same_field(*field_, *c.field());
  return scale_value(c.value());
}

Poly Poly::scale_value(const Value& c) const {
  Poly r(field_, vars_);
  if (field_->is_zero(c)) return r;
  r.terms_.reserve(terms_.size());
  for (const auto& t : terms_) r.terms_.push_back(Term{t.exp, field_->mul(t.coef, c)});
  return r;
}

Poly Poly::pow(unsigned n) const {
  Poly result = Poly::from_int(field_, vars_, 1);
  Poly base = *this;
  while (n > 0) {
    if (n & 1u) result = result * base;
    n >>= 1u;
    if (n > 0) base = base * base;
  }
  return result;
}

Poly Poly::partial(const std::string& var) const {
  auto it = std::find(vars_->begin(), vars_->end(), var);
  if (it == vars_->end()) throw Error(ErrorKind::UnknownVariable, "'" + var + "'");
  return partial(static_cast<std::size_t>(it - vars_->begin()));
}

Poly Poly::partial(std::size_t var) const {
  std::vector<Term> out;
  for (const auto& t : terms_) {
    if (t.exp[var] == 0) continue;
    Term d{t.exp, field_->mul(t.coef, field_->from_int(t.exp[var]))};
    d.exp[var] -= 1;
    if (!field_->is_zero(d.coef)) out.push_back(std::move(d));
  }
  return from_terms(field_, vars_, std::move(out));
}

Poly Poly::substitute(const std::map<std::string, Poly>& assignment, const VarsPtr& new_vars) const {
  std::vector<Poly> images;
  images.reserve(nvars());
  for (const auto& name : *vars_) {
    auto it = assignment.find(name);
    if (it != assignment.end()) {
      require_same_field(*field_, *it->second.field());
      if (!same_vars(it->second.vars(), new_vars)) {
        throw Error(ErrorKind::UnknownVariable, "image of '" + name + "' is over a different variable list");
      }
      images.push_back(it->second);
    } else if (std::find(new_vars->begin(), new_vars->end(), name) != new_vars->end()) {
      images.push_back(Poly::variable(field_, new_vars, name));
    } else {
      images.push_back(Poly());  // only valid if the variable never occurs
    }
  }
  std::vector<std::vector<Poly>> powers(nvars());
  auto power = [&](std::size_t v, int e) -> const Poly& {
    auto& cache = powers[v];
    if (cache.empty()) cache.push_back(Poly::from_int(field_, new_vars, 1));
    while (static_cast<int>(cache.size()) <= e) cache.push_back(cache.back() * images[v]);
    return cache[static_cast<std::size_t>(e)];
  };
  Poly result(field_, new_vars);
  for (const auto& t : terms_) {
    Poly term = Poly::monomial(field_, new_vars, Exponent(new_vars->size(), 0), t.coef);
    for (std::size_t v = 0; v < nvars(); ++v) {
      if (t.exp[v] == 0) continue;
      if (!images[v].field()) throw Error(ErrorKind::UnknownVariable, "'" + (*vars_)[v] + "' has no image");
      term = term * power(v, t.exp[v]);
    }
    result += term;
  }
  return result;
}

Poly Poly::with_vars(const VarsPtr& new_vars) const {
  if (same_vars(vars_, new_vars)) {
    Poly r = *this;
    r.vars_ = new_vars;
    return r;
  }
  std::vector<int> map(nvars(), -1);
  for (std::size_t v = 0; v < nvars(); ++v) {
    auto it = std::find(new_vars->begin(), new_vars->end(), (*vars_)[v]);
    if (it != new_vars->end()) map[v] = static_cast<int>(it - new_vars->begin());
  }
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) {
    Exponent e(new_vars->size(), 0);
    for (std::size_t v = 0; v < nvars(); ++v) {
      if (t.exp[v] == 0) continue;
      if (map[v] < 0) throw Error(ErrorKind::UnknownVariable, "'" + (*vars_)[v] + "' is not in the target variable list");
      e[static_cast<std::size_t>(map[v])] = t.exp[v];
    }
    out.push_back(Term{std::move(e), t.coef});
  }
  return from_terms(field_, new_vars, std::move(out));
}

Poly Poly::embed_field(const FieldPtr& target) const {
  if (field_->same_as(*target)) {
    Poly r = *this;
    r.field_ = target;
    return r;
  }
  if (!field_->embeds_into(*target)) {
    throw Error(ErrorKind::FieldMismatch, field_->describe() + " does not embed into " + target->describe());
  }
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) out.push_back(Term{t.exp, field_->embed(t.coef, *target)});
  return from_terms(target, vars_, std::move(out));
}

FieldElem Poly::evaluate(const std::vector<FieldElem>& point) const {
  if (point.size() != nvars()) throw Error(ErrorKind::InvalidInput, "point has the wrong number of coordinates");
  Value acc = field_->zero();
  for (const auto& t : terms_) {
    Value m = t.coef;
    for (std::size_t v = 0; v < nvars(); ++v) {
      if (t.exp[v] == 0) continue;
      require_same_field(*field_, *point[v].field());
      m = field_->mul(m, field_->pow(point[v].value(), static_cast<unsigned>(t.exp[v])));
    }
    acc = field_->add(acc, m);
  }
  return {field_, acc};
}

std::string Poly::to_string() const {
  std::string out;
  for (const auto& t : terms_) {
    std::string mono;
    for (std::size_t v = 0; v < nvars(); ++v) {
      if (t.exp[v] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += (*vars_)[v];
      if (t.exp[v] > 1) mono += "^" + std::to_string(t.exp[v]);
    }
    std::string cs = field_->format(t.coef);
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
    if (out.empty()) {
      out = term;
    } else if (term[0] == '-') {
      out += " - " + term.substr(1);
    } else {
      out += " + " + term;
    }
  }
  return out.empty() ? "0" : out;
}

// ---------------------------------------------------------------- parser

struct Expr::Node {
  enum class Kind { Number, Symbol, Neg, Add, Sub, Mul, Div, Pow };
  Kind kind;
  std::size_t pos;
  mpz_class number;
  std::string name;
  unsigned exponent = 0;
  std::shared_ptr<const Node> lhs, rhs;
};

namespace {

struct Token {
  enum class Kind { Number, Ident, Op, End };
  Kind kind;
  std::string text;
  std::size_t pos;  // 1-based column
};

std::vector<Token> tokenize(const std::string& s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      out.push_back({Token::Kind::Number, s.substr(i, j - i), i + 1});
      i = j;
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      out.push_back({Token::Kind::Ident, s.substr(i, j - i), i + 1});
      i = j;
    } else if (std::string("+-*/^()").find(c) != std::string::npos) {
      out.push_back({Token::Kind::Op, std::string(1, c), i + 1});
      ++i;
    } else {
      throw Error(ErrorKind::SyntaxError, "unexpected character '" + std::string(1, c) + "' at column " +
                                              std::to_string(i + 1) + " in \"" + s + "\"");
    }
  }
  out.push_back({Token::Kind::End, "", s.size() + 1});
  return out;
}

class Parser {
 public:
  using NodePtr = std::shared_ptr<const Expr::Node>;
  using Kind = Expr::Node::Kind;

  explicit Parser(const std::string& text) : text_(text), tokens_(tokenize(text)) {}

  NodePtr parse() {
    if (peek().kind == Token::Kind::End) fail("empty expression", peek().pos);
    NodePtr n = expr();
    const Token& t = peek();
    if (t.kind == Token::Kind::Number || t.kind == Token::Kind::Ident || is_op(t, "(")) {
      fail("implicit multiplication is not allowed", t.pos);
    }
    if (t.kind != Token::Kind::End) fail("unexpected '" + t.text + "'", t.pos);
    return n;
  }

 private:
  const Token& peek() const { return tokens_[idx_]; }
  static bool is_op(const Token& t, const char* op) { return t.kind == Token::Kind::Op && t.text == op; }

  [[noreturn]] void fail(const std::string& msg, std::size_t pos) const {
    throw Error(ErrorKind::SyntaxError, msg + " at column " + std::to_string(pos) + " in \"" + text_ + "\"");
  }

  static NodePtr make(Kind k, std::size_t pos, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
    auto n = std::make_shared<Expr::Node>();
    n->kind = k;
    n->pos = pos;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
  }

  NodePtr expr() {
    bool negate = false;
    std::size_t neg_pos = peek().pos;
    if (is_op(peek(), "-")) {
      negate = true;
      ++idx_;
      if (is_op(peek(), "-") || is_op(peek(), "+")) fail("chained unary operators", peek().pos);
    } else if (is_op(peek(), "+")) {
      fail("unary '+' is not allowed", peek().pos);
    }
    NodePtr n = term();
    if (negate) n = make(Kind::Neg, neg_pos, n);
    while (is_op(peek(), "+") || is_op(peek(), "-")) {
      Kind k = peek().text == "+" ? Kind::Add : Kind::Sub;
      std::size_t pos = peek().pos;
      ++idx_;
      n = make(k, pos, n, term());
    }
    return n;
  }

  NodePtr term() {
    NodePtr n = factor();
    while (is_op(peek(), "*") || is_op(peek(), "/")) {
      Kind k = peek().text == "*" ? Kind::Mul : Kind::Div;
      std::size_t pos = peek().pos;
      ++idx_;
      n = make(k, pos, n, factor());
    }
    return n;
  }

  NodePtr factor() {
    NodePtr base = atom();
    if (is_op(peek(), "^")) {
      std::size_t pos = peek().pos;
      ++idx_;
      const Token& t = peek();
      if (t.kind != Token::Kind::Number) fail("exponent must be a nonnegative integer literal", t.pos);
      if (t.text.size() > 6) fail("exponent too large", t.pos);
      auto n = std::make_shared<Expr::Node>();
      n->kind = Kind::Pow;
      n->pos = pos;
      n->lhs = base;
      n->exponent = static_cast<unsigned>(std::stoul(t.text));
      ++idx_;
      if (is_op(peek(), "^")) fail("chained exponents need parentheses", peek().pos);
      return n;
    }
    return base;
  }

  NodePtr atom() {
    const Token& t = peek();
    if (t.kind == Token::Kind::Number) {
      auto n = std::make_shared<Expr::Node>();
      n->kind = Kind::Number;
      n->pos = t.pos;
      n->number = mpz_class(t.text);
      ++idx_;
      return n;
    }
    if (t.kind == Token::Kind::Ident) {
      auto n = std::make_shared<Expr::Node>();
      n->kind = Kind::Symbol;
      n->pos = t.pos;
      n->name = t.text;
      ++idx_;
      return n;
    }
    if (is_op(t, "(")) {
      ++idx_;
      NodePtr n = expr();
      if (!is_op(peek(), ")")) fail("expected ')'", peek().pos);
      ++idx_;
      return n;
    }
    if (is_op(t, "-") || is_op(t, "+")) fail("unary operator not allowed here", t.pos);
    if (t.kind == Token::Kind::End) fail("unexpected end of input", t.pos);
    fail("unexpected '" + t.text + "'", t.pos);
  }

  std::string text_;
  std::vector<Token> tokens_;
  std::size_t idx_ = 0;
};

template <typename T, typename Leaf, typename Divide>
T eval_node(const Expr::Node& n, const Leaf& leaf, const Divide& divide) {
  using K = Expr::Node::Kind;
  switch (n.kind) {
    case K::Number:
    case K::Symbol:
      return leaf(n);
    case K::Neg:
      return -eval_node<T>(*n.lhs, leaf, divide);
    case K::Add:
      return eval_node<T>(*n.lhs, leaf, divide) + eval_node<T>(*n.rhs, leaf, divide);
    case K::Sub:
      return eval_node<T>(*n.lhs, leaf, divide) - eval_node<T>(*n.rhs, leaf, divide);
    case K::Mul:
      return eval_node<T>(*n.lhs, leaf, divide) * eval_node<T>(*n.rhs, leaf, divide);
    case K::Div:
      return divide(eval_node<T>(*n.lhs, leaf, divide), eval_node<T>(*n.rhs, leaf, divide), n.pos);
    case K::Pow:
      return eval_node<T>(*n.lhs, leaf, divide).pow(n.exponent);
  }
  throw Error(ErrorKind::InternalDisagreement, "bad expression node");
}

void collect_symbols(const Expr::Node& n, std::set<std::string>& out) {
  if (n.kind == Expr::Node::Kind::Symbol) out.insert(n.name);
  if (n.lhs) collect_symbols(*n.lhs, out);
  if (n.rhs) collect_symbols(*n.rhs, out);
}

}  // namespace

Expr Expr::parse(const std::string& text) {
  Expr e;
  e.text_ = text;
  e.root_ = Parser(text).parse();
  return e;
}

std::set<std::string> Expr::symbols() const {
  std::set<std::string> out;
  collect_symbols(*root_, out);
  return out;
}

Poly Expr::to_poly(const FieldPtr& field, const VarsPtr& vars, const std::map<std::string, FieldElem>& bindings) const {
  auto leaf = [&](const Node& n) -> Poly {
    if (n.kind == Node::Kind::Number) {
      return Poly::constant(field, vars, FieldElem(field, field->from_rational(mpq_class(n.number))));
    }
    if (auto it = bindings.find(n.name); it != bindings.end()) return Poly::constant(field, vars, it->second);
    if (std::find(vars->begin(), vars->end(), n.name) != vars->end()) return Poly::variable(field, vars, n.name);
    if (field->has_symbol(n.name)) return Poly::constant(field, vars, FieldElem::generator(field, n.name));
    throw Error(ErrorKind::UnknownSymbol,
                "'" + n.name + "' at column " + std::to_string(n.pos) + " in \"" + text_ + "\"");
  };
  auto divide = [&](const Poly& a, const Poly& b, std::size_t pos) -> Poly {
    if (!b.is_constant()) {
      throw Error(ErrorKind::SyntaxError, "division by a non-constant at column " + std::to_string(pos) + " in \"" +
                                              text_ + "\"");
    }
    if (b.is_zero()) throw Error(ErrorKind::DivisionByZero, "at column " + std::to_string(pos) + " in \"" + text_ + "\"");
    return a.scale(b.constant_value().inverse());
  };
  return eval_node<Poly>(*root_, leaf, divide);
}

FieldElem Expr::to_field(const FieldPtr& field, const std::map<std::string, FieldElem>& bindings) const {
  auto leaf = [&](const Node& n) -> FieldElem {
    if (n.kind == Node::Kind::Number) return FieldElem(field, field->from_rational(mpq_class(n.number)));
    if (auto it = bindings.find(n.name); it != bindings.end()) return it->second;
    if (field->has_symbol(n.name)) return FieldElem::generator(field, n.name);
    throw Error(ErrorKind::UnknownSymbol,
                "'" + n.name + "' at column " + std::to_string(n.pos) + " in \"" + text_ + "\"");
  };
  auto divide = [&](const FieldElem& a, const FieldElem& b, std::size_t pos) -> FieldElem {
    if (b.is_zero()) throw Error(ErrorKind::DivisionByZero, "at column " + std::to_string(pos) + " in \"" + text_ + "\"");
    return a / b;
  };
  return eval_node<FieldElem>(*root_, leaf, divide);
}

Poly parse_poly(const std::string& text, const VarsPtr& vars, const FieldPtr& field) {
  return Expr::parse(text).to_poly(field, vars);
}

FieldElem parse_field_elem(const std::string& text, const FieldPtr& field) { return Expr::parse(text).to_field(field); }

UPoly to_upoly(const Poly& p, std::size_t var) {
  const Field& f = *p.field();
  UPoly out;
  for (const auto& t : p.terms()) {
    for (std::size_t v = 0; v < t.exp.size(); ++v) {
      if (v != var && t.exp[v] != 0) throw Error(ErrorKind::InvalidInput, "not univariate: " + p.to_string());
    }
    auto k = static_cast<std::size_t>(t.exp[var]);
    if (out.size() <= k) out.resize(k + 1, f.zero());
    out[k] = t.coef;
  }
  return out;
}

FieldPtr extend_field(const FieldPtr& field, const std::string& name, const std::string& minpoly_text,
                      const std::string& var, int root_search_bound) {
  if (field->has_symbol(var)) throw Error(ErrorKind::NameCollision, "placeholder '" + var + "' clashes with the field");
  Poly m = parse_poly(minpoly_text, make_vars({var}), field);
  return field->extend(name, to_upoly(m, 0), root_search_bound);
}

// ---------------------------------------------------------------- division and rank

std::optional<Poly> divide_exact(const Poly& f, const Poly& g) {
  if (g.is_zero()) throw Error(ErrorKind::DivisionByZero, "exact division by zero polynomial");
  const Field& F = *f.field();
  const Term& lg = g.terms().front();
  Value lg_inv = F.inv(lg.coef);
  Poly rem = f;
  std::vector<Term> quot;
  while (!rem.is_zero()) {
    const Term& lt = rem.terms().front();
    Exponent e(lt.exp.size());
    for (std::size_t k = 0; k < e.size(); ++k) {
      e[k] = lt.exp[k] - lg.exp[k];
      if (e[k] < 0) return std::nullopt;
    }
    Value c = F.mul(lt.coef, lg_inv);
    Poly m = Poly::monomial(f.field(), f.vars(), e, c);
    quot.push_back(Term{std::move(e), std::move(c)});
    rem -= m * g;
  }
  return Poly::from_terms(f.field(), f.vars(), std::move(quot));
}

PolyMatrix jacobian_matrix(const std::vector<Poly>& fs, const std::vector<std::size_t>& wrt) {
  PolyMatrix m;
  for (const auto& f : fs) {
    std::vector<Poly> row;
    for (std::size_t v : wrt) row.push_back(f.partial(v));
    m.push_back(std::move(row));
  }
  return m;
}

int matrix_rank(PolyMatrix m) {
  if (m.empty()) return 0;
  const std::size_t rows = m.size(), cols = m[0].size();
  Poly prev = Poly::from_int(m[0][0].field(), m[0][0].vars(), 1);
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && m[piv][c].is_zero()) ++piv;
    if (piv == rows) continue;
    std::swap(m[piv], m[r]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) {
        Poly num = m[r][c] * m[i][j] - m[i][c] * m[r][j];
        auto q = divide_exact(num, prev);
        if (!q) throw Error(ErrorKind::InternalDisagreement, "fraction-free elimination produced an inexact division");
        m[i][j] = std::move(*q);
      }
      m[i][c] = Poly(m[i][c].field(), m[i][c].vars());
    }
    prev = m[r][c];
    ++r;
  }
  return static_cast<int>(r);
}

int jacobian_rank(const std::vector<Poly>& fs) {
  if (fs.empty()) return 0;
  if (fs[0].field()->characteristic() != 0) {
    throw Error(ErrorKind::PositiveCharacteristic, "the Jacobian criterion needs characteristic zero");
  }
  std::vector<std::size_t> wrt(fs[0].nvars());
  std::iota(wrt.begin(), wrt.end(), std::size_t{0});
  return matrix_rank(jacobian_matrix(fs, wrt));
}

Poly determinant(const PolyMatrix& m) {
  const std::size_t n = m.size();
  if (n == 1) return m[0][0];
  Poly det(m[0][0].field(), m[0][0].vars());
  for (std::size_t c = 0; c < n; ++c) {
    if (m[0][c].is_zero()) continue;
    PolyMatrix minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<Poly> row;
      for (std::size_t k = 0; k < n; ++k) {
        if (k != c) row.push_back(m[r][k]);
      }
      minor.push_back(std::move(row));
    }
    Poly term = m[0][c] * determinant(minor);
    det = (c % 2 == 0) ? det + term : det - term;
  }
  return det;
}

}  // namespace lndkit
