// Parallel kernels against their serial references.
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>

#include <omp.h>

#include "lndkit/embedding.hpp"

using namespace lndkit;

namespace {

double time_it(const std::function<void()>& fn, int reps) {
  auto t0 = std::chrono::steady_clock::now();
  for (int k = 0; k < reps; ++k) fn();
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count() / reps;
}

void row(const char* name, double serial, double parallel, bool same) {
  std::printf("%-34s serial %9.2f ms  parallel %9.2f ms  speedup %5.2fx  %s\n", name, serial, parallel,
              parallel > 0 ? serial / parallel : 0.0, same ? "same" : "DIFFERENT");
}

}  // namespace

int main(int argc, char** argv) {
  int reps = argc > 1 ? std::stoi(argv[1]) : 3;
  auto Q = Field::rationals();
  auto v = make_vars({"x", "y", "z"});
  auto B = RingPresentation::make(Q, v, {parse_poly("x*y + z^2 + 1", v, Q)}, true, 2);
  auto D1 = check_derivation(B, "D1", std::map<std::string, std::string>{{"x", "0"}, {"y", "-2*z"}, {"z", "x"}});
  auto D2 = check_derivation(B, "D2", std::map<std::string, std::string>{{"x", "-2*z"}, {"y", "0"}, {"z", "y"}});
  D1 = D1.with_status(certify_lnd(D1, 4));
  D2 = D2.with_status(certify_lnd(D2, 4));
  std::printf("threads: %d\n", omp_get_max_threads());

  for (int r : {1, 2, 3}) {
    std::vector<Derivation> S;
    for (int k = 0; k < r; ++k) S.insert(S.end(), {D1, D2});
    EmbeddingMap a, b;
    double ts = time_it([&] { a = build_psi_serial(B, S); }, reps);
    double tp = time_it([&] { b = build_psi(B, S); }, reps);
    bool same = true;
    for (std::size_t i = 0; i < a.images.size(); ++i) same = same && a.images[i] == b.images[i];
    std::string name = "build_psi, N = " + std::to_string(S.size());
    row(name.c_str(), ts, tp, same);
  }

  auto psi = build_psi(B, {D1, D2});
  auto cert = certify_open_locus(psi);
  PointFamily fam{"curve", Q, {"c", "s"}, {Expr::parse("c"), Expr::parse("-(s^2 + 1)/c"), Expr::parse("s")}};
  for (std::size_t count : {10, 40}) {
    std::mt19937_64 rng(1);
    auto pts = family_points(*B, fam, count, rng);
    SampleReport a, b;
    double ts = time_it([&] { a = sample_and_test_serial(psi, pts, InjectivityMethod::Both, &cert); }, reps);
    double tp = time_it([&] { b = sample_and_test(psi, pts, InjectivityMethod::Both, &cert); }, reps);
    bool same = a.points.size() == b.points.size();
    for (std::size_t i = 0; same && i < a.points.size(); ++i) {
      same = a.points[i].verdict.summary() == b.points[i].verdict.summary() && a.points[i].covered == b.points[i].covered;
    }
    std::string name = "sample_and_test, " + std::to_string(pts.size()) + " points";
    row(name.c_str(), ts, tp, same);
  }
  return 0;
}
