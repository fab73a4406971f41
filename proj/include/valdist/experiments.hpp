#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "valdist/corpus.hpp"
#include "valdist/crofton.hpp"
#include "valdist/curves.hpp"
#include "valdist/jet_algebra.hpp"
#include "valdist/jet_ideals.hpp"
#include "valdist/nevanlinna.hpp"
#include "valdist/rng.hpp"

#ifndef VALDIST_VERSION
#define VALDIST_VERSION "0.1.0"
#endif

namespace valdist {

inline const char* library_version() { return VALDIST_VERSION; }

// ---------------------------------------------------------------------------
// Tables and CSV
// ---------------------------------------------------------------------------

struct Table {
  std::string title;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add(std::vector<double> row) {
    if (row.size() != columns.size()) throw DomainError("row does not match the table columns");
    rows.push_back(std::move(row));
  }
};

/// Shortest round-trip decimal form; non-finite values print as nan / inf / -inf.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  if (v == std::floor(v) && std::abs(v) < 1e15) {
    std::snprintf(buf, sizeof buf, "%.0f", v);
    return buf;
  }
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

/// A leading comment line fixes the column order, then "# key: value" lines
/// echo the configuration, then a header row and the data.
inline std::string to_csv(const Table& t, const std::vector<std::pair<std::string, std::string>>& echo = {}) {
  std::ostringstream os;
  os << "# columns:";
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : " ") << t.columns[i];
  os << "\n";
  if (!t.title.empty()) os << "# table: " << t.title << "\n";
  os << "# valdist-version: " << library_version() << "\n";
  for (const auto& [k, v] : echo) os << "# " << k << ": " << v << "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_number(row[i]);
    os << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Corpora shared by the experiments and the acceptance run
// ---------------------------------------------------------------------------

/// Unit representative of a complex vector, rounded to an exact binary rational.
inline std::vector<Complex> unit_vector(const std::vector<Complex>& a) {
  std::vector<Complex> out;
  for (const auto& c : detail::exact_normal(a)) out.push_back(c.to_complex());
  return out;
}

struct PlaneCorpus {
  std::vector<ProjectiveCurve> curves;
  std::vector<std::vector<Complex>> lines;
};

/// Random non-degenerate curves in P^2 of degree 2..max_degree plus lines in general position.
inline PlaneCorpus plane_corpus(std::uint64_t seed, int curves = 10, int lines = 5, int max_degree = 4) {
  PhiloxStream rng(seed, 0);
  PlaneCorpus c;
  for (int i = 0; i < curves; ++i) c.curves.push_back(random_curve(rng, 2, static_cast<int>(rng.uniform_int(2, max_degree))));
  for (auto& a : random_general_lines(rng, 2, lines)) c.lines.push_back(unit_vector(a));
  return c;
}

// ---------------------------------------------------------------------------
// Cartan's second main theorem
// ---------------------------------------------------------------------------

/// Every min(q, n+1) of the normals must be linearly independent.
inline void check_general_position(const std::vector<std::vector<Complex>>& normals, int n) {
  if (normals.empty()) throw DomainError("no hyperplanes given");
  const int q = static_cast<int>(normals.size());
  const int size = std::min(q, n + 1);
  for (const auto& a : normals) {
    if (static_cast<int>(a.size()) != n + 1) throw DomainError("hyperplane normal has the wrong length");
  }
  for (const auto& sub : sorted_subsets(q, size)) {
    Eigen::MatrixXcd m(size, n + 1);
    for (int r = 0; r < size; ++r) {
      for (int c = 0; c <= n; ++c) m(r, c) = normals[static_cast<std::size_t>(sub[static_cast<std::size_t>(r)])][static_cast<std::size_t>(c)];
    }
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(m);
    lu.setThreshold(1e-12);
    if (lu.rank() < size) throw DomainError("hyperplanes are not in general position");
  }
}

struct CartanReport {
  Table table;              // r, sum_m, N_W, lhs, rhs, excess
  std::vector<double> defects;
  double defect_sum = 0.0;
  double calibration_r = 5.0;
  double fitted_c = 0.0;
  int violations = 0;
  ExcessStats stats;
  int n = 0;

  bool passed(double defect_tol = 0.05) const {
    return violations == 0 && defect_sum <= n + 1 + defect_tol;
  }
};

/// sum_i m_f(r, H_i) + N(Z_W, r) against T_f(r, O(n+1)). The constant C is the
/// largest excess on r <= calibration_r; a violation is a later radius whose
/// excess exceeds it. Defects are m(r, H_i) / T_f(r, O(1)) at the last radius.
inline CartanReport run_cartan(const ProjectiveCurve& f, const std::vector<std::vector<Complex>>& normals,
                               const std::vector<double>& r_grid, double calibration_r = 5.0) {
  check_grid(r_grid);
  const int n = f.n();
  check_general_position(normals, n);
  if (!f.linearly_nondegenerate()) throw DegenerateError("curve lies in a hyperplane");
  std::vector<PulledBack> pbs;
  std::vector<SubschemeOnPn> zs;
  for (const auto& a : normals) zs.push_back(SubschemeOnPn::hyperplane(detail::exact_normal(a)));
  for (const auto& z : zs) pbs.emplace_back(f, z);
  const auto w_zeros = roots_with_multiplicity(wronskian_poly(f));

  CartanReport rep;
  rep.n = n;
  rep.calibration_r = calibration_r;
  rep.table.title = "cartan";
  rep.table.columns = {"r", "sum_m", "N_W", "lhs", "rhs", "excess"};
  std::vector<double> excess;
  std::vector<double> last_m;
  for (double r : r_grid) {
    double sum_m = 0.0;
    last_m.clear();
    for (const auto& pb : pbs) {
      double m = proximity(pb, r).value;
      last_m.push_back(m);
      sum_m += m;
    }
    double nw = counting_from_zeros(w_zeros, r);
    double rhs = characteristic(f, n + 1, r);
    rep.table.add({r, sum_m, nw, sum_m + nw, rhs, sum_m + nw - rhs});
    excess.push_back(sum_m + nw - rhs);
  }
  rep.stats = excess_stats(r_grid, excess);
  rep.fitted_c = excess.front();
  for (std::size_t i = 0; i < r_grid.size(); ++i) {
    if (r_grid[i] <= calibration_r) rep.fitted_c = std::max(rep.fitted_c, excess[i]);
  }
  for (std::size_t i = 0; i < r_grid.size(); ++i) {
    if (r_grid[i] >= calibration_r && excess[i] > rep.fitted_c + 1e-9) ++rep.violations;
  }
  const double t1 = characteristic(f, 1, r_grid.back());
  for (double m : last_m) {
    rep.defects.push_back(t1 > 0.0 ? m / t1 : 0.0);
    rep.defect_sum += rep.defects.back();
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Second main theorem for points
// ---------------------------------------------------------------------------

struct PointsReport {
  Table table;  // r, sum_m, N_W, jet_term, corollary_lhs, theorem_lhs, theorem_rhs, theorem_excess
  ExcessStats corollary_stats;
  ExcessStats theorem_stats;

  bool passed(double slope_tol = 0.02) const {
    return corollary_stats.slope <= slope_tol && theorem_stats.slope <= slope_tol;
  }
};

inline void check_distinct_points(const std::vector<std::vector<Complex>>& pts) {
  for (std::size_t a = 0; a < pts.size(); ++a) {
    for (std::size_t b = a + 1; b < pts.size(); ++b) {
      const auto& p = pts[a];
      const auto& q = pts[b];
      double wedge = 0.0, scale = 0.0;
      for (std::size_t i = 0; i < p.size(); ++i) {
        scale += std::norm(p[i]);
        for (std::size_t j = i + 1; j < p.size(); ++j) wedge = std::max(wedge, std::abs(p[i] * q[j] - p[j] * q[i]));
      }
      double qn = 0.0;
      for (auto c : q) qn += std::norm(c);
      if (wedge <= 1e-12 * std::sqrt(scale * qn)) throw DomainError("repeated points");
    }
  }
}

/// Corollary form sum m_f(r, P_i) + N(dd^c[log h_0], r) and theorem form
/// n sum m_f(r, P_i) + 2/(n+1) N(Z_W, r) against T_f(r, O(2)).
inline PointsReport run_points_smt(const ProjectiveCurve& f, const std::vector<std::vector<Complex>>& points,
                                   const std::vector<double>& r_grid) {
  check_grid(r_grid);
  if (points.empty()) throw DomainError("no points given");
  const int n = f.n();
  for (const auto& p : points) {
    if (static_cast<int>(p.size()) != n + 1) throw DomainError("point has the wrong number of coordinates");
  }
  check_distinct_points(points);
  if (!f.linearly_nondegenerate()) throw DegenerateError("curve lies in a hyperplane");
  std::vector<SubschemeOnPn> zs;
  for (const auto& p : points) zs.push_back(SubschemeOnPn::point(detail::exact_normal(p)));
  std::vector<PulledBack> pbs;
  for (const auto& z : zs) pbs.emplace_back(f, z);
  JetMetricTerm jet(f);
  const auto w_zeros = roots_with_multiplicity(wronskian_poly(f));

  PointsReport rep;
  rep.table.title = "points-smt";
  rep.table.columns = {"r", "sum_m", "N_W", "jet_term", "corollary_lhs", "theorem_lhs", "theorem_rhs", "theorem_excess"};
  std::vector<double> cor, thm;
  for (double r : r_grid) {
    double sum_m = 0.0;
    for (const auto& pb : pbs) sum_m += proximity(pb, r).value;
    double nw = counting_from_zeros(w_zeros, r);
    double jt = jet.value(r);
    double lhs = n * sum_m + 2.0 / (n + 1) * nw;
    double rhs = characteristic(f, 2, r);
    rep.table.add({r, sum_m, nw, jt, sum_m + jt, lhs, rhs, lhs - rhs});
    cor.push_back(sum_m + jt);
    thm.push_back(lhs - rhs);
  }
  rep.corollary_stats = excess_stats(r_grid, cor);
  rep.theorem_stats = excess_stats(r_grid, thm);
  return rep;
}

// ---------------------------------------------------------------------------
// T_{f[1]}(r, O_{X_1}(1)) + N(Z_{f'}, r) via Green-Jensen of log h_0
// ---------------------------------------------------------------------------

struct OXk1Report {
  Table table;  // r, N_ddc_log_gamma
  ExcessStats stats;
  bool passed(double slope_tol = 0.02) const { return stats.slope <= slope_tol; }
};

inline OXk1Report run_theorem_OXk1(const ProjectiveCurve& f, const std::vector<double>& r_grid) {
  check_grid(r_grid);
  if (f.is_constant()) throw DegenerateError("the theorem needs a non-constant curve");
  JetMetricTerm jet(f);
  OXk1Report rep;
  rep.table.title = "theorem-oxk1";
  rep.table.columns = {"r", "N_ddc_log_gamma"};
  std::vector<double> v;
  for (double r : r_grid) {
    v.push_back(jet.value(r));
    rep.table.add({r, v.back()});
  }
  rep.stats = excess_stats(r_grid, v);
  return rep;
}

// ---------------------------------------------------------------------------
// Tables for the remaining experiments
// ---------------------------------------------------------------------------

inline Table fmt_table(const FmtReport& rep) {
  Table t;
  t.title = "fmt";
  t.columns = {"r", "m", "N", "T", "residual"};
  const auto& p = rep.profile;
  for (std::size_t i = 0; i < p.r.size(); ++i) t.add({p.r[i], p.m[i], p.N[i], p.T[i], p.residual[i]});
  return t;
}

inline Table ahlfors_table(const std::vector<AhlforsReport>& reps) {
  Table t;
  t.title = "ahlfors";
  t.columns = {"epsilon", "r", "lhs", "rhs", "excess"};
  for (const auto& rep : reps) {
    for (const auto& row : rep.rows) t.add({rep.epsilon, row.r, row.lhs, row.rhs, row.excess});
  }
  return t;
}

inline Table aald_table(const AaldReport& rep) {
  Table t;
  t.title = "aald";
  t.columns = {"r", "m_Z", "jet_metric", "m_jet", "residual"};
  for (const auto& row : rep.rows) t.add({row.r, row.m_z, row.jet_metric, row.m_jet, row.residual});
  return t;
}

struct CroftonRow {
  int n;
  MonteCarloResult result;
  double exact;
  double z() const { return result.std_error > 0.0 ? (result.mean - exact) / result.std_error : 0.0; }
};

/// Monte Carlo means of the hyperplane Weil function at x = (1, 1, ..., 1) for each n.
inline std::vector<CroftonRow> run_crofton_constants(const std::vector<int>& dims, long samples, std::uint64_t seed,
                                                     int threads = 1) {
  std::vector<CroftonRow> rows;
  for (int n : dims) {
    if (n < 1) throw DomainError("dimension must be at least 1");
    std::vector<Complex> x(static_cast<std::size_t>(n + 1), Complex(1.0, 0.0));
    rows.push_back({n, average_weil_hyperplane(n, x, samples, seed, threads), 0.5 * harmonic_number(n)});
  }
  return rows;
}

inline Table crofton_table(const std::vector<CroftonRow>& rows) {
  Table t;
  t.title = "crofton";
  t.columns = {"n", "samples", "mean", "std_error", "exact", "z"};
  for (const auto& r : rows) {
    t.add({static_cast<double>(r.n), static_cast<double>(r.result.samples), r.result.mean, r.result.std_error, r.exact, r.z()});
  }
  return t;
}

// ---------------------------------------------------------------------------
// Suites
// ---------------------------------------------------------------------------

struct Check {
  std::string name;
  bool passed = true;
  long count = 0;
  std::string detail;
};

struct SuiteResult {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<Check> checks;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
  }
  const Check& find(const std::string& name) const {
    for (const auto& c : checks) {
      if (c.name == name) return c;
    }
    throw DomainError("no check named " + name);
  }
};

inline Table suite_table(const SuiteResult& s) {
  Table t;
  t.title = s.suite + " (check order: ";
  for (std::size_t i = 0; i < s.checks.size(); ++i) t.title += (i ? " " : "") + s.checks[i].name;
  t.title += ")";
  t.columns = {"check", "passed", "count"};
  for (std::size_t i = 0; i < s.checks.size(); ++i) {
    t.add({static_cast<double>(i), s.checks[i].passed ? 1.0 : 0.0, static_cast<double>(s.checks[i].count)});
  }
  return t;
}

namespace detail {

inline JetPoly random_section(PhiloxStream& rng, const RegistryPtr& reg, int deg, int terms = 3) {
  for (;;) {
    JetPoly p(reg);
    for (int t = 0; t < terms; ++t) {
      Monomial m(static_cast<std::size_t>(reg->size()), 0);
      int d = static_cast<int>(rng.uniform_int(0, deg));
      for (int e = 0; e < d; ++e) m[static_cast<std::size_t>(rng.uniform_int(0, reg->nbase() - 1))] += 1;
      p += JetPoly::term(reg, m, Rational(rng.uniform_int(-3, 3)));
    }
    if (!p.is_zero()) return p;
  }
}

inline std::vector<JetPoly> independent_sections(PhiloxStream& rng, const RegistryPtr& reg, int count, int deg,
                                                 const std::vector<JetPoly>& lead = {}) {
  for (;;) {
    std::vector<JetPoly> s;
    for (int i = 0; i < count; ++i) s.push_back(random_section(rng, reg, deg));
    auto all = lead;
    all.insert(all.end(), s.begin(), s.end());
    if (!wronskian_jet(all).is_zero()) return s;
  }
}

inline ReparamJet random_reparam(PhiloxStream& rng, int k) {
  std::vector<Rational> a;
  for (int i = 1; i <= k; ++i) {
    long v = i == 1 ? random_unit(rng, 3) : rng.uniform_int(-3, 3);
    a.push_back(make_rational(v, rng.uniform_int(1, 3)));
  }
  return ReparamJet(a);
}

inline void tally(Check& c, bool ok) {
  ++c.count;
  if (!ok) c.passed = false;
}

} // namespace detail

/// Exact identities of the jet algebra on random sections with small integer coefficients.
inline SuiteResult run_symbolic_suite(std::uint64_t seed) {
  SuiteResult s{"symbolic", seed, {}};
  auto reg = jet_registry(3, 6);
  PhiloxStream rng(seed, 0);

  Check alt{"wronskian_alternating_multilinear"};
  for (int k = 1; k <= 4; ++k) {
    for (int t = 0; t < 3; ++t) {
      auto sec = detail::independent_sections(rng, reg, k + 1, 2);
      JetPoly w = wronskian_jet(sec);
      auto sw = sec;
      std::swap(sw.front(), sw.back());
      detail::tally(alt, wronskian_jet(sw) == -w);
      JetPoly extra = detail::random_section(rng, reg, 2);
      Rational c = make_rational(rng.uniform_int(-5, 5), 2);
      auto lin = sec, other = sec;
      lin[0] = c * sec[0] + extra;
      other[0] = extra;
      detail::tally(alt, wronskian_jet(lin) == c * w + wronskian_jet(other));
    }
  }
  s.checks.push_back(alt);

  Check iso{"isobaric_weight_kprime"}, filt{"filtration_membership"}, rep{"reparametrization_factor"};
  for (int k = 1; k <= 4; ++k) {
    JetGrading g(k);
    for (int t = 0; t < 3; ++t) {
      JetPoly w = wronskian_jet(detail::independent_sections(rng, reg, k + 1, 2));
      auto wd = weighted_degree(w);
      detail::tally(iso, wd && *wd == g.kprime);
      detail::tally(filt, filtration_check(w, g.a));
    }
    JetPoly w = wronskian_jet(detail::independent_sections(rng, reg, k + 1, 2));
    for (int t = 0; t < 20; ++t) {
      auto phi = detail::random_reparam(rng, k);
      Rational f(1);
      for (int i = 0; i < g.kprime; ++i) f *= phi.coeff(1);
      detail::tally(rep, reparametrize(w, phi) == f * w);
    }
  }
  s.checks.push_back(iso);
  s.checks.push_back(filt);
  s.checks.push_back(rep);

  Check sl{"determinant_transformation"};
  for (int k = 1; k <= 3; ++k) {
    for (int t = 0; t < 3; ++t) {
      auto sec = detail::independent_sections(rng, reg, k + 1, 2);
      std::vector<std::vector<Rational>> a(static_cast<std::size_t>(k + 1), std::vector<Rational>(static_cast<std::size_t>(k + 1)));
      for (auto& row : a) {
        for (auto& v : row) v = Rational(rng.uniform_int(-3, 3));
      }
      detail::tally(sl, sl_action_check(a, sec));
    }
  }
  s.checks.push_back(sl);

  Check lw{"log_wronskian_identity"}, tw{"tower_wronskian_identity"};
  auto reg2 = jet_registry(2, 6);
  for (int k = 1; k <= 3; ++k) {
    for (int t = 0; t < (k == 3 ? 2 : 4); ++t) {
      JetPoly sd = detail::random_section(rng, reg2, 2);
      auto sec = detail::independent_sections(rng, reg2, k + 1, 2);
      detail::tally(lw, log_wronskian_identity_check(sd, sec[0], std::vector<JetPoly>(sec.begin() + 1, sec.end())));
      JetPoly sigma = detail::random_section(rng, reg2, 2);
      detail::tally(tw, tower_wronskian_identity_check(sigma, detail::independent_sections(rng, reg2, k + 1, 2, {sigma})));
    }
  }
  s.checks.push_back(lw);
  s.checks.push_back(tw);
  return s;
}

/// Generator-level identities of jet ideals plus the numeric Wronskian base-locus sweep.
inline SuiteResult run_ideal_suite(std::uint64_t seed, int threads = 1) {
  SuiteResult s{"ideal", seed, {}};
  PhiloxStream rng(seed, 0);
  auto reg = jet_registry(3, 4);

  Check inter{"intersection_generators"};
  for (int t = 0; t < 10; ++t) {
    std::vector<IdealModel> parts;
    int q = static_cast<int>(rng.uniform_int(1, 3));
    for (int i = 0; i < q; ++i) parts.emplace_back(std::vector<JetPoly>{detail::random_section(rng, reg, 3, 3)});
    detail::tally(inter, intersection_jets_check(parts, 2));
  }
  s.checks.push_back(inter);

  Check pw{"power_formula"};
  for (int t = 0; t < 10; ++t) {
    JetPoly z = detail::random_section(rng, reg, 2, 3);
    for (int l = 1; l <= 4; ++l) detail::tally(pw, power_formula_check(z, l));
  }
  s.checks.push_back(pw);

  Check mem{"wronskian_membership"}, tri{"three_term_syzygy"};
  auto reg1 = jet_registry(3, 2);
  auto var = [&](int j) { return JetPoly::variable(reg1, j); };
  for (int t = 0; t < 5; ++t) {
    JetPoly l(reg1);
    while (l.is_zero()) {
      for (int j = 0; j < 3; ++j) l += Rational(rng.uniform_int(-3, 3)) * var(j);
    }
    // quadrics: l * x_j first, then a complement, each block mixed by a unitriangular matrix
    std::vector<JetPoly> prefix{l * var(0), l * var(1), l * var(2)};
    // quadrics in the two variables other than a pivot of l span a complement
    int pivot = 0;
    while (divide_by(l, {var(pivot)}).remainder == l) ++pivot;
    const int a = (pivot + 1) % 3, b = (pivot + 2) % 3;
    std::vector<JetPoly> tail{var(a) * var(a), var(a) * var(b), var(b) * var(b)};
    std::vector<JetPoly> basis;
    for (auto* block : {&prefix, &tail}) {
      for (std::size_t i = 0; i < block->size(); ++i) {
        JetPoly v = (*block)[i];
        for (std::size_t j = 0; j < i; ++j) v += Rational(rng.uniform_int(-2, 2)) * (*block)[j];
        basis.push_back(v);
      }
    }
    auto r = wronskian_sandwich_check(IdealModel({l}), basis, 2);
    mem.count += r.memberships;
    tri.count += r.triples;
    if (r.membership_failures) mem.passed = false;
    if (r.triple_failures) tri.passed = false;
  }
  s.checks.push_back(mem);
  s.checks.push_back(tri);

  auto sep = separation_base_locus_check(2, 2, 2, 100, seed, threads);
  Check reg_ok{"separation_regular", sep.regular_pass == sep.regular_total, sep.regular_total,
               std::to_string(sep.regular_pass) + "/" + std::to_string(sep.regular_total)};
  Check sing_ok{"separation_singular", sep.singular_pass == sep.singular_total, sep.singular_total,
                std::to_string(sep.singular_pass) + "/" + std::to_string(sep.singular_total)};
  s.checks.push_back(reg_ok);
  s.checks.push_back(sing_ok);

  // a second separating system (cubics) must have the same base locus
  auto cubic = separation_base_locus_check(monomial_basis(jet_registry(3, 2), 3), 2, 100, seed + 1, threads);
  s.checks.push_back({"separation_second_system", cubic.passed(), cubic.regular_total + cubic.singular_total, ""});
  return s;
}

/// Crofton constants H_n/2 within 3 sigma, agreement at two points, and
/// r-independence of the averaged proximity.
inline SuiteResult run_crofton_suite(std::uint64_t seed, long samples, int threads = 1) {
  SuiteResult s{"crofton", seed, {}};
  Check constants{"weil_constants"};
  for (const auto& row : run_crofton_constants({1, 2, 3}, samples, seed, threads)) {
    detail::tally(constants, std::abs(row.z()) <= 3.0);
    constants.detail += "n=" + std::to_string(row.n) + " z=" + format_number(row.z()) + " ";
  }
  s.checks.push_back(constants);

  Check two{"two_point_agreement"};
  for (int n = 1; n <= 3; ++n) {
    std::vector<Complex> x(static_cast<std::size_t>(n + 1), Complex(0.0, 0.0)), y = x;
    x[0] = 1.0;
    for (int i = 0; i <= n; ++i) y[static_cast<std::size_t>(i)] = Complex(0.5 + i, -0.25 * i);
    auto a = average_weil_hyperplane(n, x, samples, seed + 101, threads);
    auto b = average_weil_hyperplane(n, y, samples, seed + 202, threads);
    detail::tally(two, std::abs(a.mean - b.mean) <= 3.0 * std::hypot(a.std_error, b.std_error));
  }
  s.checks.push_back(two);

  Check prox{"proximity_r_independent"};
  std::vector<QPoly> comps{QPoly::constant(GaussRational(1)), QPoly({GaussRational(0), GaussRational(1)}),
                           QPoly({GaussRational(0), GaussRational(0), GaussRational(1)})};
  ProjectiveCurve conic = ProjectiveCurve::reduce(comps);
  const long ps = std::max(1L, samples / 10);
  auto a = average_proximity(conic, 5.0, ps, seed + 303, threads);
  auto b = average_proximity(conic, 50.0, ps, seed + 404, threads);
  detail::tally(prox, std::abs(a.mean - b.mean) <= 3.0 * std::hypot(a.std_error, b.std_error));
  s.checks.push_back(prox);
  return s;
}

/// T - m - N flat for random curves and divisors.
inline SuiteResult run_fmt_suite(std::uint64_t seed, int curves, const std::vector<double>& r_grid, double tol = 0.02) {
  SuiteResult s{"fmt", seed, {}};
  PhiloxStream rng(seed, 0);
  Check flat{"residual_flat"};
  double worst = 0.0;
  for (int i = 0; i < curves; ++i) {
    int n = static_cast<int>(rng.uniform_int(1, 3));
    ProjectiveCurve f = random_curve(rng, n, static_cast<int>(rng.uniform_int(n, 4)));
    std::vector<GaussRational> a;
    for (int j = 0; j <= n; ++j) a.push_back(random_gauss(rng, 4, 1));
    if (std::all_of(a.begin(), a.end(), [](const GaussRational& c) { return c.is_zero(); })) a[0] = GaussRational(1);
    auto rep = fmt_residual(f, SubschemeOnPn::hyperplane(a), r_grid);
    worst = std::max(worst, rep.residual_stats.stdev);
    detail::tally(flat, rep.residual_stats.stdev <= tol);
  }
  flat.detail = "max stdev " + format_number(worst);
  s.checks.push_back(flat);
  return s;
}

/// Ahlfors' lemma over a plane corpus: the least-squares slope of the excess must lie in +-slope_tol.
inline SuiteResult run_ahlfors_suite(std::uint64_t seed, const PlaneCorpus& corpus, const std::vector<double>& eps,
                                     const std::vector<double>& r_grid, double slope_tol = 0.02, int threads = 1) {
  SuiteResult s{"ahlfors", seed, {}};
  struct Job {
    std::size_t curve, line;
    double eps;
  };
  std::vector<Job> jobs;
  for (std::size_t c = 0; c < corpus.curves.size(); ++c) {
    for (std::size_t l = 0; l < corpus.lines.size(); ++l) {
      for (double e : eps) jobs.push_back({c, l, e});
    }
  }
  std::vector<double> slopes(jobs.size());
  parallel_for(jobs.size(), threads, [&](std::size_t i) {
    const auto& j = jobs[i];
    slopes[i] = ahlfors_lld_check(corpus.curves[j.curve], corpus.lines[j.line], j.eps, r_grid).stats.slope;
  });
  for (double e : eps) {
    Check c{"slope_eps_" + format_number(e)};
    double lo = INFINITY, hi = -INFINITY;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      if (jobs[i].eps != e) continue;
      detail::tally(c, std::abs(slopes[i]) <= slope_tol);
      lo = std::min(lo, slopes[i]);
      hi = std::max(hi, slopes[i]);
    }
    c.detail = "slope range [" + format_number(lo) + ", " + format_number(hi) + "]";
    s.checks.push_back(c);
  }
  return s;
}

/// AALD residual for a random hyperplane over random curves: no positive log r slope beyond slope_tol.
inline SuiteResult run_aald_suite(std::uint64_t seed, int curves, const std::vector<double>& r_grid,
                                  double slope_tol = 0.02, int threads = 1) {
  SuiteResult s{"aald", seed, {}};
  PhiloxStream rng(seed, 0);
  std::vector<ProjectiveCurve> fs;
  std::vector<std::vector<Complex>> hs;
  for (int i = 0; i < curves; ++i) {
    int n = static_cast<int>(rng.uniform_int(1, 3));
    fs.push_back(random_curve(rng, n, static_cast<int>(rng.uniform_int(n, 4))));
    hs.push_back(random_general_lines(rng, n, 1).front());
  }
  std::vector<double> slopes(fs.size());
  parallel_for(fs.size(), threads, [&](std::size_t i) { slopes[i] = aald_check(fs[i], {hs[i]}, r_grid).stats.slope; });
  Check c{"residual_bounded"};
  double hi = -INFINITY;
  for (double sl : slopes) {
    detail::tally(c, sl <= slope_tol);
    hi = std::max(hi, sl);
  }
  c.detail = "max slope " + format_number(hi);
  s.checks.push_back(c);
  return s;
}

} // namespace valdist
