// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <unistd.h>

#include "cli.hpp"
#include "lndkit/conic.hpp"
#include "lndkit/fml.hpp"
#include "manifest.hpp"
#include "support.hpp"

using namespace lndkit;
using testsupport::AffinePlane;
using testsupport::Danielewski;
using testsupport::QuadricQi;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
  void expect(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt_seconds(double s) {
  std::ostringstream os;
  os.precision(2);
  os << std::fixed << s << " s";
  return os.str();
}

FieldElem scalar(const FieldPtr& K, std::mt19937_64& rng) { return FieldElem(K, K->sample(rng)); }

// Σ_i X^i (D_N^{i_N} ∘ ... ∘ D_1^{i_1})(b) / i!, evaluated at a point after
// the derivations are applied; iterates D.apply directly.
std::vector<Poly> brute_force_images(const RingPresentation& B, const std::vector<Derivation>& S,
                                     const std::vector<FieldElem>& point, const VarsPtr& xvars) {
  const FieldPtr& K = point.front().field();
  std::vector<Poly> out;
  for (std::size_t g = 0; g < B.ngens(); ++g) {
    Poly total(K, xvars);
    std::function<void(std::size_t, Poly, Exponent, mpq_class)> rec = [&](std::size_t k, Poly cur, Exponent e,
                                                                          mpq_class fact) {
      if (cur.is_zero()) return;
      if (k == S.size()) {
        FieldElem v = cur.embed_field(K).evaluate(point);
        FieldElem c = v * FieldElem(K, K->from_rational(1 / fact));
        total += Poly::monomial(K, xvars, e, c.value());
        return;
      }
      mpq_class f = fact;
      for (int i = 0; !cur.is_zero(); ++i) {
        if (i > 0) f *= i;
        e[k] = i;
        rec(k + 1, cur, e, f);
        cur = S[k].apply(cur);
      }
    };
    rec(0, B.variable(g), Exponent(S.size(), 0), 1);
    out.push_back(total);
  }
  return out;
}

PointFamily danielewski_family(const FieldPtr& Q) {
  return PointFamily{"curve", Q, {"c", "s"}, {Expr::parse("c"), Expr::parse("-(s^2 + 1)/c"), Expr::parse("s")}};
}

PointFamily quadric_family(const FieldPtr& K) {
  return PointFamily{"gauss",
                     K,
                     {"c", "s"},
                     {Expr::parse("(c - (s^2 + 1)/c)/2"), Expr::parse("-i*(c + (s^2 + 1)/c)/2"), Expr::parse("s")}};
}

// ---------------------------------------------------------------- criteria

Outcome psi_matches_exponentials() {
  Outcome o;
  auto t0 = Clock::now();
  Danielewski d;
  auto psi = build_psi(d.B, {d.D1, d.D2});
  std::mt19937_64 rng(2024);
  for (int round = 0; round < 10; ++round) {
    FieldElem l1 = scalar(d.Q, rng), l2 = scalar(d.Q, rng);
    auto e1 = exp_map(d.D1, l1);
    auto e2 = exp_map(d.D2, l2);
    std::map<std::string, Poly> at = {{psi.xvars[0], Poly::constant(d.Q, d.v, l1)},
                                      {psi.xvars[1], Poly::constant(d.Q, d.v, l2)}};
    for (std::size_t i = 0; i < 3; ++i) {
      Poly sub = d.B->reduce(psi.images[i].substitute(at, d.v));
      // exp(l1 D1) first, then exp(l2 D2)
      Poly composite = apply_homomorphism(e2, *d.B, *d.B, e1[i]);
      o.expect(sub == composite, "mismatch at (" + l1.to_string() + ", " + l2.to_string() + ")");
    }
  }
  double s = seconds_since(t0);
  o.expect(s < 5.0, "took " + fmt_seconds(s));
  if (o.ok) o.detail = "10 tuples, " + fmt_seconds(s);
  return o;
}

Outcome danielewski_embedding() {
  Outcome o;
  Danielewski d;
  auto delta = DerivationSet::make(d.B, {d.D1, d.D2});
  auto m = make_point(*d.B, "m", d.Q,
                      {FieldElem::from_int(d.Q, 1), FieldElem::from_int(d.Q, -1), FieldElem::from_int(d.Q, 0)});
  PipelineReport rep = fml_pipeline(delta, {m}, PipelineConfig{});
  o.expect(rep.success, "pipeline did not succeed");
  o.expect(rep.N == 2 && rep.n == 2, "N, n = " + std::to_string(rep.N) + ", " + std::to_string(rep.n));
  const Specialized& s = rep.samples.points.at(0).images;

  auto oracle = brute_force_images(*d.B, {d.D1, d.D2}, m.coords, s.vars);
  auto X = [&](const char* t) { return parse_poly(t, s.vars, d.Q); };
  std::vector<Poly> expected = {X("1 + X2^2"), X("-1 + 2*X1*X2 - X1^2 - X1^2*X2^2"), X("X1 - X2 + X1*X2^2")};
  for (std::size_t i = 0; i < 3; ++i) {
    o.expect(oracle[i] == expected[i], "oracle disagrees with the expected image of generator " + std::to_string(i));
    o.expect(s.images[i] == expected[i], "pipeline image " + s.images[i].to_string());
  }
  // 2x2 minor on (x, z), by hand
  const auto& x = s.images[0];
  const auto& z = s.images[2];
  Poly det = x.partial("X1") * z.partial("X2") - x.partial("X2") * z.partial("X1");
  o.expect(det == X("-2*X2*(1 + X2^2)"), "determinant " + det.to_string());
  Poly odet = oracle[0].partial("X1") * oracle[2].partial("X2") - oracle[0].partial("X2") * oracle[2].partial("X1");
  o.expect(odet == det, "oracle determinant " + odet.to_string());
  if (o.ok) o.detail = "N = 2, n = 2, det = " + det.to_string();
  return o;
}

Outcome oracle_agreement() {
  Outcome o;
  std::size_t points = 0, injective = 0;
  auto compare = [&](const RingPresentation& B, const std::vector<Poly>& images, const std::string& where) {
    auto j = injectivity_test(B, images, InjectivityMethod::Jacobian);
    auto e = injectivity_test(B, images, InjectivityMethod::Elimination);
    o.expect(j.injective == e.injective, "disagreement at " + where);
    ++points;
    if (j.injective) ++injective;
  };
  std::mt19937_64 rng(99);

  Danielewski d;
  auto psi = build_psi(d.B, {d.D1, d.D2});
  auto flat = build_psi(d.B, {d.D1, d.D1});
  for (const auto& p : family_points(*d.B, danielewski_family(d.Q), 10, rng)) {
    compare(*d.B, specialize(psi, p).images, p.name);
    compare(*d.B, specialize(flat, p).images, p.name + " (D1, D1)");
  }

  QuadricQi q;
  auto qpsi = build_psi(q.B, {q.E1, q.E2});
  for (const auto& p : family_points(*q.B, quadric_family(q.K), 5, rng)) compare(*q.B, specialize(qpsi, p).images, p.name);

  AffinePlane a;
  auto apsi = build_psi(a.B, {a.Dx, a.Dy});
  for (const auto& p : random_points(*a.B, 5, 20, rng)) compare(*a.B, specialize(apsi, p).images, p.name);

  o.expect(points >= 20, "only " + std::to_string(points) + " points");
  if (o.ok) {
    o.detail = std::to_string(points) + " points, " + std::to_string(injective) + " injective, " +
               std::to_string(points - injective) + " not, 0 disagreements";
  }
  return o;
}

Outcome certificate_soundness() {
  Outcome o;
  auto t0 = Clock::now();
  Danielewski d;
  auto delta = DerivationSet::make(d.B, {d.D1, d.D2});
  PipelineReport rep = fml_pipeline(delta, {}, PipelineConfig{});
  o.expect(rep.certificate.has_value(), "no certificate");
  if (!o.ok) return o;
  const LocusCertificate& c = *rep.certificate;
  for (const auto& Ij : c.ideals) {
    bool nonzero = std::any_of(Ij.begin(), Ij.end(), [&](const Poly& g) { return !d.B->is_zero(g); });
    o.expect(nonzero, "an I_j is zero");
  }
  std::mt19937_64 rng(4242);
  std::size_t tested = 0, draws = 0;
  while (tested < 20 && draws < 200) {
    auto pts = family_points(*d.B, danielewski_family(d.Q), 1, rng);
    ++draws;
    if (pts.empty() || !c.covers(pts[0])) continue;
    auto v = injectivity_test(*d.B, specialize(rep.reduced, pts[0]).images, InjectivityMethod::Both);
    o.expect(v.injective, pts[0].name + " " + pts[0].describe() + " is not injective");
    ++tested;
  }
  o.expect(tested == 20, "only " + std::to_string(tested) + " points outside V(product)");
  double s = seconds_since(t0);
  o.expect(s < 60.0, "took " + fmt_seconds(s));
  if (o.ok) o.detail = "20 points outside V(product) injective, " + fmt_seconds(s);
  return o;
}

Outcome degree_additivity() {
  Outcome o;
  std::mt19937_64 rng(5150);
  Danielewski d;
  QuadricQi q;
  AffinePlane a;
  struct Case {
    const RingPresentation* B;
    const Derivation* D;
    Poly kernel_gen;  // a nonconstant kernel element
  };
  std::vector<Case> cases = {{d.B.get(), &d.D1, d.P("x")}, {q.B.get(), &q.E1, q.P("x + i*y")}, {a.B.get(), &a.Dx, a.P("y")}};
  std::size_t pairs = 0;
  for (const auto& c : cases) {
    for (int round = 0; round < 50; ++round) {
      Poly b = testsupport::random_element(*c.B, rng, 3, 3);
      Poly e = testsupport::random_element(*c.B, rng, 3, 3);
      int lhs = c.D->degree(c.B->reduce(b * e));
      o.expect(lhs == c.D->degree(b) + c.D->degree(e), "additivity fails for " + b.to_string() + ", " + e.to_string());
      ++pairs;
    }
    // factorial closure: kernel products have kernel factors, and a non-kernel
    // factor spoils the product
    for (int round = 0; round < 10; ++round) {
      Poly k1 = c.B->reduce(c.kernel_gen.pow(1 + static_cast<unsigned>(rng() % 3)) +
                            c.B->constant(1 + static_cast<long long>(rng() % 5)));
      Poly k2 = c.B->reduce(c.kernel_gen * c.B->constant(1 + static_cast<long long>(rng() % 4)));
      Poly prod = c.B->reduce(k1 * k2);
      o.expect(c.D->apply(prod).is_zero(), "kernel product left the kernel");
      o.expect(c.D->apply(k1).is_zero() && c.D->apply(k2).is_zero(), "kernel factor check");
      Poly b = testsupport::random_element(*c.B, rng, 2, 3);
      if (!c.D->apply(b).is_zero()) {
        o.expect(!c.D->apply(c.B->reduce(k1 * b)).is_zero(), "k*b in the kernel with b outside");
      }
    }
  }
  if (o.ok) o.detail = std::to_string(pairs) + " pairs on 3 fixtures, closure spot checks";
  return o;
}

Outcome dixmier_projection() {
  Outcome o;
  std::mt19937_64 rng(777);
  Danielewski d;
  QuadricQi q;
  std::vector<std::pair<const RingPresentation*, const Derivation*>> cases = {{d.B.get(), &d.D1}, {q.B.get(), &q.E2}};
  for (const auto& [B, D] : cases) {
    LocalSlice s = find_local_slice(*D);
    for (int round = 0; round < 20; ++round) {
      Poly b = testsupport::random_element(*B, rng, 3, 3);
      Localized p = dixmier_project(*D, s, b);
      o.expect(D->apply(p.numerator).is_zero(), "D(pi(b)) != 0 for b = " + b.to_string());
    }
  }
  if (o.ok) o.detail = "20 elements on 2 fixtures";
  return o;
}

Outcome char2_conic() {
  Outcome o;
  auto k = Field::prime_field(2)->with_ratfunc("t");
  ConicSetup c = conic_setup(k, "t");
  const Poly& rel = c.ring->relations().generators()[0];
  std::size_t inside = 0, outside = 0;
  for (const char* lam : {"0", "1", "t", "t + 1"}) {
    ConicPoint p = conic_point_lambda(c, lam);
    o.expect(p.ideal_proper && p.membership, p.label + ": membership");
    o.expect(rel.embed_field(p.field).evaluate(p.coords).is_zero(), p.label + ": not on the conic");
    FieldElem w = p.coords[0] - parse_field_elem(lam, k).embed(p.field);
    o.expect(w * w == c.a.embed(p.field), p.label + ": no square root of t");
    if (p.in_locus) ++inside;
  }
  o.expect(!is_square(c.a), "t reported as a square");
  for (const char* s : {"0", "1", "t", "t^2 + 1"}) {
    ConicPoint p = conic_point_slope(c, s);
    o.expect(rel.evaluate(p.coords).is_zero(), p.label + ": not on the conic");
    o.expect(!p.in_locus, p.label + ": classified inside");
    if (!p.in_locus) ++outside;
  }
  o.expect(inside >= 3 && outside >= 3, "counts");
  if (o.ok) o.detail = std::to_string(inside) + " points inside, " + std::to_string(outside) + " rational points outside";
  return o;
}

Outcome negative_control() {
  Outcome o;
  Danielewski d;
  o.expect(generic_jacobian_rank(build_psi(d.B, {d.D1})) == 1, "generic rank of Psi_{D1} is not 1");
  auto delta = DerivationSet::make(d.B, {d.D1});
  try {
    fml_pipeline(delta, {}, PipelineConfig{});
    o.expect(false, "pipeline succeeded");
  } catch (const Error& e) {
    o.expect(e.kind() == ErrorKind::GenericNotInjective, std::string("raised ") + e.what());
  }
  if (o.ok) o.detail = "GenericNotInjective, rank 1 < 2";
  return o;
}

Outcome groebner_sanity() {
  Outcome o;
  auto Q = Field::rationals();
  auto xy = make_vars({"x", "y"});
  Ideal I(Q, xy, {parse_poly("x^2 + y^2", xy, Q), parse_poly("x*y", xy, Q)});
  auto gb = I.groebner();
  bool has_y3 = std::any_of(gb->polys.begin(), gb->polys.end(), [&](const Poly& p) { return p == parse_poly("y^3", xy, Q); });
  o.expect(has_y3, "y^3 missing from the basis");
  o.expect(I.member(parse_poly("y^3", xy, Q)), "y^3 not a member");
  o.expect(!I.member(parse_poly("y^2", xy, Q)), "y^2 reported a member");

  Danielewski d;
  auto k = Field::prime_field(2)->with_ratfunc("t");
  auto XY = make_vars({"X", "Y"});
  Ideal conic(k, XY, {parse_poly("Y^2 + t*X^2 + X", XY, k), parse_poly("X^2 + t", XY, k)});
  std::vector<const Ideal*> ideals = {&I, &d.B->relations(), &conic};
  std::mt19937_64 rng(31337);
  for (const Ideal* J : ideals) {
    for (int round = 0; round < 15; ++round) {
      Poly f = testsupport::random_poly(J->field(), J->vars(), rng, 4, 4);
      Poly nf = J->normal_form(f);
      o.expect(J->normal_form(nf) == nf, "normal form not idempotent");
      o.expect(J->member(f - nf), "f - NF(f) not a member");
      for (const auto& g : J->generators()) o.expect(J->member(g * f), "multiple of a generator not a member");
    }
  }
  if (o.ok) o.detail = "3 ideals, idempotence and membership";
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  Outcome o;
  fs::path dir = fs::temp_directory_path() / ("lndkit-acceptance-" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::vector<std::pair<std::string, std::vector<std::string>>> cases = {
      {"danielewski", {"check-lnd", "exp", "slice", "kernel", "psi", "inject", "certify", "pipeline"}},
      {"quadric-qi", {"check-lnd", "exp", "slice", "kernel", "psi", "inject", "certify", "pipeline"}},
      {"affine-plane", {"check-lnd", "exp", "slice", "kernel", "psi", "inject", "certify", "pipeline"}},
      {"char2-conic", {"check-lnd", "xk-conic"}},
  };
  std::size_t runs = 0;
  for (const auto& [ex, cmds] : cases) {
    fs::path manifest = dir / (ex + ".json");
    std::ostringstream sink, err;
    o.expect(cli::run_cli({"example", ex, "--out", manifest.string()}, sink, err) == 0, "example " + ex);
    for (const auto& c : cmds) {
      std::string reports[2][2];
      for (int k = 0; k < 2; ++k) {
        fs::path out = dir / (ex + "." + c + "." + std::to_string(k) + ".txt");
        std::ostringstream so, se;
        int code = cli::run_cli({c, "--manifest", manifest.string(), "--seed", "11", "--out", out.string()}, so, se);
        o.expect(code == 0, c + " on " + ex + " exited " + std::to_string(code) + ": " + se.str());
        reports[k][0] = slurp(out);
        reports[k][1] = slurp(out.string() + ".json");
      }
      o.expect(!reports[0][0].empty() && reports[0][0] == reports[1][0], c + " on " + ex + ": text differs");
      o.expect(reports[0][1] == reports[1][1], c + " on " + ex + ": dump differs");
      ++runs;
    }
  }
  fs::remove_all(dir);
  if (o.ok) o.detail = std::to_string(runs) + " commands, text and dump identical";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"Psi at scalars equals composed exponentials", psi_matches_exponentials},
      {"Danielewski embedding at (1, -1, 0)", danielewski_embedding},
      {"jacobian and elimination verdicts agree", oracle_agreement},
      {"open locus certificate is sound", certificate_soundness},
      {"degree additivity and factorial closure", degree_additivity},
      {"Dixmier projection lands in the kernel", dixmier_projection},
      {"char-2 conic points classified", char2_conic},
      {"single derivation is generically not injective", negative_control},
      {"Groebner normal forms and membership", groebner_sanity},
      {"reports are byte-identical", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.ok) ++failed;
    std::cout << (o.ok ? "PASS" : "FAIL") << " " << (i + 1) << ". " << criteria[i].first << " (" << o.detail << ")"
              << std::endl;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria passed"
            << std::endl;
  return failed == 0 ? 0 : 1;
}
