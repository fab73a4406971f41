// valdist: command-line driver for the value-distribution experiments.
//
// Every subcommand writes a CSV table (stdout or --out) with the configuration
// echoed in leading comment lines, and optionally a JSON mirror (--json).
// Exit status: 0 when every check passes, 1 when a check fails, 2 on bad input.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "valdist/valdist.hpp"

using json = nlohmann::json;
using namespace valdist;

namespace {

class InputError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string config_path;
  std::uint64_t seed = 42;
  bool seed_given = false;
  std::string out;
  std::string json_out;
  double r_min = 2.0, r_max = 200.0;
  int r_count = 40;
  bool r_log = true;
  long samples = 100000;
  std::vector<double> epsilon;
  int threads = 1;
  bool suite = false;
  int curves = 10;
  json config = json::object();
};

// ---------------------------------------------------------------------------
// Config parsing
// ---------------------------------------------------------------------------

long as_long(const json& j, const char* what) {
  if (!j.is_number_integer()) throw InputError(std::string(what) + ": expected an integer");
  return j.get<long>();
}

Rational exact_rational(const json& j) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (!j.is_array() || j.size() != 2) throw InputError("exact coefficient parts must be integers or [num, den]");
  long den = as_long(j[1], "denominator");
  if (den == 0) throw InputError("zero denominator");
  return make_rational(as_long(j[0], "numerator"), den);
}

// Exact mode: [num, den] for a real rational, [[num, den], [num, den]] for a
// Gaussian rational, or a bare integer.
GaussRational exact_coeff(const json& j) {
  if (j.is_array() && j.size() == 2 && j[0].is_array()) return GaussRational(exact_rational(j[0]), exact_rational(j[1]));
  return GaussRational(exact_rational(j));
}

// Floating mode: a number or an [re, im] pair.
Complex float_coeff(const json& j) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return Complex(j[0].get<double>(), j[1].get<double>());
  }
  throw InputError("coefficient must be a number or an [re, im] pair");
}

std::vector<Complex> complex_vector(const json& j, const char* what) {
  if (!j.is_array() || j.empty()) throw InputError(std::string(what) + ": expected a non-empty list");
  std::vector<Complex> v;
  for (const auto& c : j) v.push_back(float_coeff(c));
  return v;
}

ProjectiveCurve parse_curve(const json& j) {
  if (!j.is_object() || !j.contains("components")) throw InputError("curve needs a \"components\" list");
  const auto& comps = j.at("components");
  if (!comps.is_array() || comps.size() < 2) throw InputError("a curve needs at least two components");
  if (j.contains("n") && as_long(j.at("n"), "n") + 1 != static_cast<long>(comps.size())) {
    throw InputError("curve has n = " + std::to_string(j.at("n").get<long>()) + " but " +
                     std::to_string(comps.size()) + " components");
  }
  const bool exact = j.value("exact", false);
  if (exact) {
    std::vector<QPoly> ps;
    for (const auto& c : comps) {
      std::vector<GaussRational> v;
      for (const auto& x : c) v.push_back(exact_coeff(x));
      ps.emplace_back(v);
    }
    return ProjectiveCurve::reduce(ps);
  }
  std::vector<CPoly> ps;
  for (const auto& c : comps) ps.emplace_back(complex_vector(c, "component"));
  return ProjectiveCurve::reduce(ps);
}

// Subscheme generators: lists of terms {"coeff": c, "exp": [e_0, ..., e_n]}.
SubschemeOnPn parse_subscheme(const json& j, int n) {
  if (!j.is_object() || !j.contains("generators")) throw InputError("subscheme needs a \"generators\" list");
  auto reg = VarRegistry::indexed(n + 1);
  std::vector<GMPoly> gens;
  for (const auto& g : j.at("generators")) {
    GMPoly p(reg);
    for (const auto& t : g) {
      const auto& e = t.at("exp");
      if (!e.is_array() || static_cast<int>(e.size()) != n + 1) throw InputError("exponent vector has the wrong length");
      Monomial m;
      for (const auto& x : e) {
        long v = as_long(x, "exponent");
        if (v < 0) throw InputError("negative exponent");
        m.push_back(static_cast<int>(v));
      }
      GaussRational c = t.value("exact", false) ? exact_coeff(t.at("coeff")) : GaussRational::from_complex(float_coeff(t.at("coeff")));
      p += GMPoly::term(reg, m, c);
    }
    gens.push_back(std::move(p));
  }
  return SubschemeOnPn(n, std::move(gens));
}

std::vector<std::vector<Complex>> parse_vectors(const json& cfg, const char* key) {
  std::vector<std::vector<Complex>> out;
  if (!cfg.contains(key)) return out;
  for (const auto& v : cfg.at(key)) out.push_back(complex_vector(v, key));
  return out;
}

std::optional<ProjectiveCurve> config_curve(const Options& o) {
  if (!o.config.contains("curve")) return std::nullopt;
  return parse_curve(o.config.at("curve"));
}

ProjectiveCurve monomial_curve(int n) {
  std::vector<QPoly> ps;
  for (int i = 0; i <= n; ++i) {
    std::vector<GaussRational> c(static_cast<std::size_t>(i + 1), GaussRational(0));
    c.back() = GaussRational(1);
    ps.emplace_back(c);
  }
  return ProjectiveCurve::reduce(ps);
}

std::vector<double> grid(const Options& o) {
  if (!(o.r_min > 0.0) || !(o.r_max > o.r_min) || o.r_count < 2) throw InputError("r-grid must satisfy 0 < r-min < r-max and r-count >= 2");
  return make_r_grid(o.r_min, o.r_max, o.r_count, o.r_log);
}

// ---------------------------------------------------------------------------
// Output
// ---------------------------------------------------------------------------

std::vector<std::pair<std::string, std::string>> echo(const Options& o, const std::string& cmd) {
  std::vector<std::pair<std::string, std::string>> e{{"command", cmd}};
  if (!o.config_path.empty()) e.emplace_back("config", o.config.dump());
  e.emplace_back("seed", std::to_string(o.seed));
  std::ostringstream g;
  g << format_number(o.r_min) << ".." << format_number(o.r_max) << " count " << o.r_count << (o.r_log ? " log" : " linear");
  e.emplace_back("r-grid", g.str());
  e.emplace_back("samples", std::to_string(o.samples));
  std::string eps;
  for (double x : o.epsilon) eps += (eps.empty() ? "" : ",") + format_number(x);
  if (!eps.empty()) e.emplace_back("epsilon", eps);
  return e;
}

json table_json(const Table& t) {
  json rows = json::array();
  for (const auto& r : t.rows) {
    json row = json::object();
    for (std::size_t i = 0; i < r.size(); ++i) row[t.columns[i]] = r[i];
    rows.push_back(row);
  }
  return {{"title", t.title}, {"columns", t.columns}, {"rows", rows}};
}

json suite_json(const SuiteResult& s) {
  json checks = json::array();
  for (const auto& c : s.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"count", c.count}, {"detail", c.detail}});
  return {{"suite", s.suite}, {"seed", s.seed}, {"passed", s.passed()}, {"checks", checks}};
}

struct Emission {
  std::vector<Table> tables;
  json extra = json::object();
  bool passed = true;
};

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot open " + path + " for writing");
  f << text;
}

int emit(const Options& o, const std::string& cmd, const Emission& em) {
  std::string csv;
  auto e = echo(o, cmd);
  e.emplace_back("passed", em.passed ? "true" : "false");
  for (const auto& t : em.tables) csv += to_csv(t, e);
  write_text(o.out, csv);
  if (!o.json_out.empty()) {
    json j{{"command", cmd}, {"version", library_version()}, {"passed", em.passed}, {"echo", json::object()}};
    for (const auto& [k, v] : e) j["echo"][k] = v;
    j["tables"] = json::array();
    for (const auto& t : em.tables) j["tables"].push_back(table_json(t));
    j.update(em.extra);
    write_text(o.json_out, j.dump(2) + "\n");
  }
  return em.passed ? 0 : 1;
}

Emission from_suite(const SuiteResult& s) {
  Emission em;
  em.tables.push_back(suite_table(s));
  em.extra["suite"] = suite_json(s);
  em.passed = s.passed();
  for (const auto& c : s.checks) {
    std::fprintf(stderr, "%-36s %s  (%ld)%s%s\n", c.name.c_str(), c.passed ? "PASS" : "FAIL", c.count,
                 c.detail.empty() ? "" : "  ", c.detail.c_str());
  }
  return em;
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

Emission cmd_fmt(const Options& o) {
  auto g = grid(o);
  if (o.suite) return from_suite(run_fmt_suite(o.seed, o.curves, g));
  auto f = config_curve(o).value_or(monomial_curve(2));
  std::optional<SubschemeOnPn> z;
  if (o.config.contains("subscheme")) z = parse_subscheme(o.config.at("subscheme"), f.n());
  auto hs = parse_vectors(o.config, "hyperplanes");
  if (!z && !hs.empty()) z = SubschemeOnPn::hyperplane(hs.front());
  if (!z) {
    std::vector<GaussRational> a(static_cast<std::size_t>(f.n() + 1), GaussRational(0));
    a.back() = GaussRational(1);
    z = SubschemeOnPn::hyperplane(a);
  }
  auto rep = fmt_residual(f, *z, g);
  Emission em;
  em.tables.push_back(fmt_table(rep));
  const double tol = o.config.value("tolerance", 0.02);
  em.passed = rep.residual_stats.stdev <= tol;
  em.extra["stdev"] = rep.residual_stats.stdev;
  return em;
}

Emission cmd_cartan(const Options& o) {
  auto f = config_curve(o).value_or(monomial_curve(1));
  auto hs = parse_vectors(o.config, "hyperplanes");
  if (hs.empty()) {
    if (f.n() != 1) throw InputError("cartan needs \"hyperplanes\" for curves in P^n with n > 1");
    hs = {{Complex(1), Complex(0)}, {Complex(0), Complex(1)}, {Complex(-1), Complex(1)}};
  }
  auto rep = run_cartan(f, hs, grid(o), o.config.value("calibration_r", 5.0));
  Emission em;
  em.tables.push_back(rep.table);
  Table d;
  d.title = "defects";
  d.columns = {"target", "defect"};
  for (std::size_t i = 0; i < rep.defects.size(); ++i) d.add({static_cast<double>(i), rep.defects[i]});
  em.tables.push_back(d);
  em.passed = rep.passed();
  em.extra["fitted_c"] = rep.fitted_c;
  em.extra["violations"] = rep.violations;
  em.extra["defect_sum"] = rep.defect_sum;
  return em;
}

Emission cmd_points(const Options& o) {
  auto f = config_curve(o).value_or(monomial_curve(1));
  auto ps = parse_vectors(o.config, "points");
  if (ps.empty()) {
    if (f.n() != 1) throw InputError("points-smt needs \"points\" for curves in P^n with n > 1");
    ps = {{Complex(1), Complex(0)}, {Complex(0), Complex(1)}};
  }
  auto rep = run_points_smt(f, ps, grid(o));
  Emission em;
  em.tables.push_back(rep.table);
  em.passed = rep.passed();
  em.extra["corollary_slope"] = rep.corollary_stats.slope;
  em.extra["theorem_slope"] = rep.theorem_stats.slope;
  return em;
}

Emission cmd_oxk1(const Options& o) {
  auto rep = run_theorem_OXk1(config_curve(o).value_or(monomial_curve(1)), grid(o));
  Emission em;
  em.tables.push_back(rep.table);
  em.passed = rep.passed();
  em.extra["slope"] = rep.stats.slope;
  return em;
}

std::vector<double> eps_list(const Options& o) {
  std::vector<double> e = o.epsilon.empty() ? std::vector<double>{0.1, 0.5} : o.epsilon;
  for (double x : e) {
    if (!(x > 0.0 && x < 1.0)) throw InputError("epsilon must lie in (0, 1)");
  }
  return e;
}

Emission cmd_ahlfors(const Options& o) {
  auto g = grid(o);
  auto eps = eps_list(o);
  if (o.suite) return from_suite(run_ahlfors_suite(o.seed, plane_corpus(o.seed, o.curves), eps, g, 0.02, o.threads));
  auto f = config_curve(o).value_or(monomial_curve(2));
  auto hs = parse_vectors(o.config, "hyperplanes");
  if (hs.empty()) hs.push_back(std::vector<Complex>(static_cast<std::size_t>(f.n() + 1), Complex(1)));
  std::vector<AhlforsReport> reps;
  for (double e : eps) reps.push_back(ahlfors_lld_check(f, hs.front(), e, g));
  Emission em;
  em.tables.push_back(ahlfors_table(reps));
  for (const auto& r : reps) {
    em.extra["slopes"].push_back(r.stats.slope);
    em.passed = em.passed && std::abs(r.stats.slope) <= 0.02;
  }
  return em;
}

Emission cmd_aald(const Options& o) {
  auto g = grid(o);
  if (o.suite) return from_suite(run_aald_suite(o.seed, o.curves, g, 0.02, o.threads));
  auto f = config_curve(o).value_or(monomial_curve(2));
  auto hs = parse_vectors(o.config, "hyperplanes");
  if (hs.empty()) hs.push_back(std::vector<Complex>(static_cast<std::size_t>(f.n() + 1), Complex(1)));
  auto rep = aald_check(f, hs, g);
  Emission em;
  em.tables.push_back(aald_table(rep));
  em.passed = rep.stats.slope <= 0.02;
  em.extra["slope"] = rep.stats.slope;
  return em;
}

Emission cmd_crofton(const Options& o) {
  if (o.samples < 2) throw InputError("samples must be at least 2");
  std::vector<int> dims{1, 2, 3};
  if (o.config.contains("dims")) {
    dims.clear();
    for (const auto& d : o.config.at("dims")) dims.push_back(static_cast<int>(as_long(d, "dims")));
  }
  auto rows = run_crofton_constants(dims, o.samples, o.seed, o.threads);
  auto suite = run_crofton_suite(o.seed, o.samples, o.threads);
  Emission em = from_suite(suite);
  em.tables.insert(em.tables.begin(), crofton_table(rows));
  return em;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Value distribution experiments for rational curves"};
  app.set_version_flag("--version", std::string(library_version()));
  app.require_subcommand(1);
  Options o;
  app.add_option("--config", o.config_path, "JSON config (curve, hyperplanes, points, subscheme, ...)");
  app.add_option("--seed", o.seed, "seed for every random draw")->each([&](const std::string&) { o.seed_given = true; });
  app.add_option("--out", o.out, "CSV output path (default stdout)");
  app.add_option("--json", o.json_out, "optional JSON mirror of the report");
  app.add_option("--r-min", o.r_min, "smallest radius");
  app.add_option("--r-max", o.r_max, "largest radius");
  app.add_option("--r-count", o.r_count, "number of radii");
  app.add_option("--r-log", o.r_log, "log-spaced radii (true/false)");
  app.add_option("--samples", o.samples, "Monte Carlo samples");
  app.add_option("--epsilon", o.epsilon, "Ahlfors exponent, repeatable");
  app.add_option("--threads", o.threads, "worker threads; results do not depend on it")->check(CLI::PositiveNumber);

  struct Sub {
    const char* name;
    const char* help;
    Emission (*run)(const Options&);
    bool has_suite;
  };
  const std::vector<Sub> subs{
      {"fmt", "first main theorem residual T - m - N", cmd_fmt, true},
      {"cartan", "Cartan's second main theorem for hyperplanes", cmd_cartan, false},
      {"points-smt", "second main theorem for points", cmd_points, false},
      {"theorem-oxk1", "N(dd^c log h_0) for the first jet lift", cmd_oxk1, false},
      {"ahlfors", "Ahlfors' lemma in logarithmic-derivative form", cmd_ahlfors, true},
      {"aald", "AALD residual for 1-jets", cmd_aald, true},
      {"crofton", "Crofton constants by Monte Carlo over U(n+1)", cmd_crofton, false},
      {"jet-suite", "exact jet-differential identities",
       [](const Options& opt) { return from_suite(run_symbolic_suite(opt.seed)); }, false},
      {"ideal-suite", "jet ideals, Wronskian membership and base-locus separation",
       [](const Options& opt) { return from_suite(run_ideal_suite(opt.seed, opt.threads)); }, false},
  };
  std::vector<CLI::App*> handles;
  for (const auto& s : subs) {
    auto* sc = app.add_subcommand(s.name, s.help);
    sc->fallthrough();
    if (s.has_suite) {
      sc->add_flag("--suite", o.suite, "run over a random corpus instead of the configured curve");
      sc->add_option("--curves", o.curves, "corpus size for --suite")->check(CLI::PositiveNumber);
    }
    handles.push_back(sc);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (!o.config_path.empty()) {
      std::ifstream in(o.config_path);
      if (!in) throw InputError("cannot read " + o.config_path);
      try {
        o.config = json::parse(in);
      } catch (const json::exception& e) {
        throw InputError(std::string("config is not valid JSON: ") + e.what());
      }
      if (!o.config.is_object()) throw InputError("config must be a JSON object");
      // command-line flags win over the file
      if (!o.seed_given && o.config.contains("seed")) o.seed = o.config.at("seed").get<std::uint64_t>();
      if (o.config.contains("r_grid")) {
        const auto& g = o.config.at("r_grid");
        if (app.count("--r-min") == 0) o.r_min = g.value("min", o.r_min);
        if (app.count("--r-max") == 0) o.r_max = g.value("max", o.r_max);
        if (app.count("--r-count") == 0) o.r_count = g.value("count", o.r_count);
        if (app.count("--r-log") == 0) o.r_log = g.value("log", o.r_log);
      }
      if (app.count("--samples") == 0) o.samples = o.config.value("samples", o.samples);
      if (o.epsilon.empty() && o.config.contains("epsilon")) o.epsilon = o.config.at("epsilon").get<std::vector<double>>();
    }
    for (std::size_t i = 0; i < subs.size(); ++i) {
      if (handles[i]->parsed()) return emit(o, subs[i].name, subs[i].run(o));
    }
  } catch (const InputError& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return 2;
  } catch (const json::exception& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return 2;
  } catch (const Error& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return 2;
  }
  return 2;
}
