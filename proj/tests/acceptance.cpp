// Acceptance run: one PASS/FAIL line per criterion.
//
//   acceptance [--seed S] [--threads T] [--only N]... [--expect-fail N]...
//
// A criterion listed with --expect-fail is still computed and reported; its
// failure is shown as "FAIL (expected)" and does not change the exit code.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "valdist/valdist.hpp"

using namespace valdist;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

QPoly qp(std::initializer_list<long> c) {
  std::vector<GaussRational> v;
  for (long x : c) v.emplace_back(x);
  return QPoly(v);
}

template <typename F>
double mixed_fd(F&& f, Complex z, double h) {
  auto lap = [&](double s) {
    double c = f(z);
    return (f(z + s) + f(z - s) + f(z + Complex(0, s)) + f(z - Complex(0, s)) - 4.0 * c) / (4.0 * s * s);
  };
  return (4.0 * lap(h / 2) - lap(h)) / 3.0;
}

// Second Richardson level, error O(h^6). Small steps are not an option: the
// rounding error of log |F^k|^2 divided by h^2 swamps densities near 1e-5.
template <typename F>
double mixed_fd6(F&& f, Complex z, double h) {
  return (16.0 * mixed_fd(f, z, h / 2) - mixed_fd(f, z, h)) / 15.0;
}

std::string fmt(double v) { return format_number(v); }

// 1. FMT flatness for [1 : z : z^2] and {x_2 = 0}.
Outcome fmt_flatness(std::uint64_t) {
  auto t0 = std::chrono::steady_clock::now();
  auto f = ProjectiveCurve::reduce(std::vector<QPoly>{qp({1}), qp({0, 1}), qp({0, 0, 1})});
  auto rep = fmt_residual(f, SubschemeOnPn::hyperplane(std::vector<GaussRational>{0, 0, 1}), make_r_grid(2, 200, 40, true));
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  double sd = rep.residual_stats.stdev;
  return {sd <= 0.02 && secs < 5.0, "stdev " + fmt(sd) + " (tol 0.02), " + fmt(secs) + " s (limit 5)"};
}

// 2. (T(100) - T(50)) / log 2 against the degree. The same slope at ten times
// the radii is reported alongside: the gap is an O(r^-2) term of log ||f||.
Outcome degree_slope(std::uint64_t seed) {
  PhiloxStream rng(seed, 2);
  double worst = 0.0, worst_far = 0.0;
  for (int i = 0; i < 20; ++i) {
    int n = static_cast<int>(rng.uniform_int(1, 3));
    int d = static_cast<int>(rng.uniform_int(n, 5));
    auto f = random_curve(rng, n, d);
    auto slope = [&](double a) { return (characteristic(f, 1, 2 * a) - characteristic(f, 1, a)) / std::log(2.0); };
    worst = std::max(worst, std::abs(slope(50.0) - f.degree()));
    worst_far = std::max(worst_far, std::abs(slope(500.0) - f.degree()));
  }
  return {worst <= 1e-3, "max |slope - deg| " + fmt(worst) + " over 20 curves (tol 1e-3); at r=500 vs 1000: " +
                             fmt(worst_far)};
}

// 3. Cartan with fitted C and the defect relation.
Outcome cartan(std::uint64_t seed, int threads) {
  auto corpus = plane_corpus(seed);
  auto grid = make_r_grid(2, 200, 30, true);
  std::vector<CartanReport> reps(corpus.curves.size());
  parallel_for(reps.size(), threads, [&](std::size_t i) { reps[i] = run_cartan(corpus.curves[i], corpus.lines, grid, 5.0); });
  int violations = 0;
  double worst_defect = 0.0;
  for (const auto& r : reps) {
    violations += r.violations;
    worst_defect = std::max(worst_defect, r.defect_sum);
  }
  return {violations == 0 && worst_defect <= 3.0 + 0.05,
          std::to_string(violations) + " violations for r >= 5, max defect sum " + fmt(worst_defect) + " (bound 3.05)"};
}

// 4. Ahlfors: excess slope within +-0.02 for eps in {0.1, 0.5}.
Outcome ahlfors(std::uint64_t seed, int threads) {
  auto corpus = plane_corpus(seed);
  auto suite = run_ahlfors_suite(seed, corpus, {0.1, 0.5}, make_r_grid(10, 1000, 12, true), 0.02, threads);
  std::string d;
  long bad = 0, total = 0;
  for (const auto& c : suite.checks) {
    d += c.name + " " + c.detail + "; ";
    total += c.count;
    if (!c.passed) ++bad;
  }
  return {suite.passed(), std::to_string(total) + " runs; " + d};
}

// 5. Vanishing orders of normal-form curves.
Outcome vanishing(std::uint64_t seed) {
  PhiloxStream rng(seed, 5);
  int ok = 0;
  for (int t = 0; t < 100; ++t) {
    int n = static_cast<int>(rng.uniform_int(1, 3));
    std::vector<int> nu;
    for (int i = 0; i < n; ++i) nu.push_back(static_cast<int>(rng.uniform_int(0, 3)));
    GaussRational z0 = random_gauss(rng, 8, 4);
    auto f = normal_form_curve(rng, nu, z0);
    bool good = vanishing_orders(f, z0) == nu;
    auto o = derived_orders(f, z0);
    for (int k = 1; k <= n; ++k) {
      int expect = 0;
      for (int i = 1; i <= k; ++i) expect += (k - i + 1) * nu[static_cast<std::size_t>(i - 1)];
      good = good && o[static_cast<std::size_t>(k)] == expect;
    }
    ok += good ? 1 : 0;
  }
  return {ok == 100, std::to_string(ok) + "/100 curves exact"};
}

// 6. Plucker density against a finite-difference Laplacian.
Outcome plucker(std::uint64_t seed) {
  PhiloxStream rng(seed, 6);
  double worst = 0.0;
  long points = 0;
  for (int c = 0; c < 5; ++c) {
    int n = 2 + c % 2;
    auto f = random_curve(rng, n, n + 1 + c % 3);
    std::vector<RootMult> avoid;
    for (int j = 1; j <= n; ++j) {
      auto g = f.level_gcd(j);
      if (g.degree() > 0) {
        auto rs = roots_with_multiplicity(g);
        avoid.insert(avoid.end(), rs.begin(), rs.end());
      }
    }
    for (int k = 0; k < n; ++k) {
      int checked = 0;
      while (checked < 100) {
        Complex z(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5));
        bool near = false;
        for (const auto& r : avoid) near = near || std::abs(z - r.root) < 0.05;
        if (near) continue;
        double fd = mixed_fd6([&](Complex w) { return std::log(f.derived_norm2(k, w)); }, z, 2e-2);
        double hk = plucker_density(f, k, z);
        worst = std::max(worst, std::abs(fd - hk) / hk);
        ++checked;
        ++points;
      }
    }
  }
  return {worst <= 1e-4, "max relative error " + fmt(worst) + " over " + std::to_string(points) + " points (tol 1e-4)"};
}

Outcome from_suite(const SuiteResult& s) {
  std::string d;
  for (const auto& c : s.checks) {
    d += c.name + (c.passed ? " ok" : " FAILED") + "(" + std::to_string(c.count) + ")";
    if (!c.detail.empty()) d += "[" + c.detail + "]";
    d += " ";
  }
  return {s.passed(), d};
}

// 7. Crofton constants.
Outcome crofton(std::uint64_t seed, int threads) { return from_suite(run_crofton_suite(seed, 100000, threads)); }

// 8. Symbolic suite.
Outcome symbolic(std::uint64_t seed) {
  auto t0 = std::chrono::steady_clock::now();
  auto s = run_symbolic_suite(seed);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  auto o = from_suite(s);
  o.pass = o.pass && secs < 60.0;
  o.detail += "| " + fmt(secs) + " s (limit 60)";
  return o;
}

// 9. Jet-ideal suite.
Outcome ideals(std::uint64_t seed, int threads) { return from_suite(run_ideal_suite(seed, threads)); }

// 10. AALD residual bounded.
Outcome aald(std::uint64_t seed, int threads) {
  return from_suite(run_aald_suite(seed, 10, make_r_grid(2, 200, 20, true), 0.02, threads));
}

// 11. Green-Jensen on wide root annuli.
Outcome green_jensen(std::uint64_t seed) {
  PhiloxStream rng(seed, 11);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    int deg = static_cast<int>(rng.uniform_int(1, 8));
    QPoly p = random_poly_from_roots(rng, deg, 0.1, 50.0);
    double rmax = 0.0;
    for (const auto& r : roots_with_multiplicity(p)) rmax = std::max(rmax, std::abs(r.root));
    auto g = green_jensen_check(p, 2.0 * rmax);
    worst = std::max(worst, std::abs(g.lhs - g.rhs));
  }
  return {worst <= 1e-6, "max |lhs - rhs| " + fmt(worst) + " over 50 polynomials (tol 1e-6)"};
}

// 12. Byte-identical CSV at 1 and 8 threads.
Outcome determinism(std::uint64_t seed) {
  auto csv = [&](int threads) {
    std::vector<std::pair<std::string, std::string>> echo{{"seed", std::to_string(seed)}, {"samples", "20000"}};
    std::string out = to_csv(crofton_table(run_crofton_constants({1, 2, 3}, 20000, seed, threads)), echo);
    auto f = ProjectiveCurve::reduce(std::vector<QPoly>{qp({1}), qp({0, 1}), qp({0, 0, 1})});
    Table t;
    t.columns = {"r", "mean", "std_error"};
    for (double r : {2.0, 20.0}) {
      auto m = average_proximity(f, r, 5000, seed, threads);
      t.add({r, m.mean, m.std_error});
    }
    return out + to_csv(t, echo);
  };
  std::string a = csv(1), b = csv(8), c = csv(1);
  bool same = a == b && a == c;
  return {same, same ? std::to_string(a.size()) + " bytes identical across 1/8/1 threads" : "CSV bytes differ"};
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"valdist acceptance criteria"};
  std::uint64_t seed = 20240611;
  int threads = 1;
  std::vector<int> only, expect_fail;
  app.add_option("--seed", seed, "base seed");
  app.add_option("--threads", threads, "worker threads (results do not depend on it)");
  app.add_option("--only", only, "run only these criteria");
  app.add_option("--expect-fail", expect_fail, "criteria whose failure is known and documented");
  CLI11_PARSE(app, argc, argv);

  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"FMT flatness", [&] { return fmt_flatness(seed); }},
      {"degree slope", [&] { return degree_slope(seed); }},
      {"Cartan SMT", [&] { return cartan(seed, threads); }},
      {"Ahlfors LLD", [&] { return ahlfors(seed, threads); }},
      {"vanishing orders", [&] { return vanishing(seed); }},
      {"Plucker density", [&] { return plucker(seed); }},
      {"Crofton constants", [&] { return crofton(seed, threads); }},
      {"symbolic suite", [&] { return symbolic(seed); }},
      {"jet-ideal suite", [&] { return ideals(seed, threads); }},
      {"AALD residual", [&] { return aald(seed, threads); }},
      {"Green-Jensen", [&] { return green_jensen(seed); }},
      {"determinism", [&] { return determinism(seed); }},
  };
  std::set<int> run(only.begin(), only.end()), expected(expect_fail.begin(), expect_fail.end());
  int unexpected = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!run.empty() && !run.count(id)) continue;
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::string status = o.pass ? "PASS" : (expected.count(id) ? "FAIL (expected)" : "FAIL");
    if (!o.pass && !expected.count(id)) ++unexpected;
    std::printf("criterion %2d %-18s %s  %s  [%.1fs]\n", id, criteria[i].first.c_str(), status.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return unexpected == 0 ? 0 : 1;
}
