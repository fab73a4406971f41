#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "valdist/det.hpp"
#include "valdist/errors.hpp"
#include "valdist/exterior.hpp"
#include "valdist/jet_algebra.hpp"
#include "valdist/parallel.hpp"
#include "valdist/rng.hpp"

namespace valdist {

/// Ideal of a closed subscheme, given by generators in the base variables.
struct IdealModel {
  std::vector<JetPoly> generators;

  IdealModel() = default;
  explicit IdealModel(std::vector<JetPoly> gens) {
    for (auto& g : gens) {
      if (!g.is_zero()) generators.push_back(std::move(g));
    }
    if (generators.empty()) throw DomainError("ideal needs at least one nonzero generator");
  }
};

/// Generators of the ideal of the k-th jet scheme.
struct JetIdealModel {
  std::vector<JetPoly> generators;
  int k = 0;
};

/// {D^j zeta_i : 0 <= j <= k}, ordered by j and then by i; zero derivatives are dropped.
inline JetIdealModel jet_ideal(const IdealModel& z, int k) {
  if (k < 1) throw DomainError("jet ideal order must be at least 1");
  JetIdealModel out;
  out.k = k;
  std::vector<JetPoly> cur = z.generators;
  for (int j = 0; j <= k; ++j) {
    for (auto& g : cur) {
      if (!g.is_zero()) out.generators.push_back(g);
    }
    if (j < k) {
      for (auto& g : cur) g = total_derivative(g);
    }
  }
  return out;
}

/// Multiset equality up to nonzero scalars on each element.
inline bool same_generators_up_to_scalar(const std::vector<JetPoly>& a, const std::vector<JetPoly>& b) {
  if (a.size() != b.size()) return false;
  auto keys = [](const std::vector<JetPoly>& v) {
    std::vector<std::string> k;
    for (const auto& p : v) k.push_back(p.normalized().str());
    std::sort(k.begin(), k.end());
    return k;
  };
  return keys(a) == keys(b);
}

/// (Z_1 cap ... cap Z_q)^(k) against the union of the Z_i^(k), at generator level.
inline bool intersection_jets_check(const std::vector<IdealModel>& parts, int k) {
  if (parts.empty()) throw DomainError("intersection of no subschemes");
  std::vector<JetPoly> all;
  std::vector<JetPoly> unioned;
  for (const auto& z : parts) {
    all.insert(all.end(), z.generators.begin(), z.generators.end());
    auto j = jet_ideal(z, k);
    unioned.insert(unioned.end(), j.generators.begin(), j.generators.end());
  }
  return same_generators_up_to_scalar(jet_ideal(IdealModel(all), k).generators, unioned);
}

/// (l Z)^(1) for Z = (zeta): generators zeta^l, l zeta^{l-1} D zeta, which are
/// zeta^{l-1} times the generators of Z^(1) up to the scalar l.
inline bool power_formula_check(const JetPoly& zeta, int ell) {
  if (ell < 1) throw DomainError("power must be at least 1");
  if (zeta.is_zero()) throw DomainError("power formula needs a nonzero generator");
  JetPoly dz = total_derivative(zeta);
  JetPoly lower = zeta.pow(ell - 1);
  auto gens = jet_ideal(IdealModel({zeta.pow(ell)}), 1).generators;

  std::vector<JetPoly> expected{zeta.pow(ell)};
  JetPoly second = Rational(ell) * (lower * dz);
  if (!second.is_zero()) expected.push_back(second);
  if (gens != expected) return false;

  std::vector<JetPoly> factored;
  for (const auto& g : jet_ideal(IdealModel({zeta}), 1).generators) factored.push_back(lower * g);
  if (!same_generators_up_to_scalar(gens, factored)) return false;
  if (gens.size() == 2 && gens[1] != Rational(ell) * factored[1]) return false;
  return true;
}

struct Division {
  std::vector<JetPoly> quotients;
  JetPoly remainder;
};

/// Multivariate division in grlex order: p = sum q_t g_t + r with no term of
/// r divisible by a leading monomial of the g_t.
inline Division divide_by(const JetPoly& p, const std::vector<JetPoly>& gens) {
  const auto& reg = p.registry();
  Division d{std::vector<JetPoly>(gens.size(), JetPoly(reg)), JetPoly(reg)};
  JetPoly rest = p;
  while (!rest.is_zero()) {
    const auto [lm, lc] = rest.leading_term();
    bool divided = false;
    for (std::size_t t = 0; t < gens.size() && !divided; ++t) {
      const auto& [gm, gc] = gens[t].leading_term();
      Monomial q = lm;
      bool ok = true;
      for (std::size_t v = 0; v < q.size(); ++v) {
        q[v] -= gm[v];
        if (q[v] < 0) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      JetPoly term = JetPoly::term(reg, q, lc / gc);
      d.quotients[t] += term;
      rest -= term * gens[t];
      divided = true;
    }
    if (!divided) {
      JetPoly lead = JetPoly::term(reg, lm, lc);
      d.remainder += lead;
      rest -= lead;
    }
  }
  return d;
}

struct SandwichReport {
  int memberships = 0;      // W(s_i', s_i) certified in Z^(1)
  int membership_failures = 0;
  int triples = 0;          // three-term identities checked
  int triple_failures = 0;
  bool passed() const { return membership_failures == 0 && triple_failures == 0; }
};

/// basis[0..nprime] must lie in I_Z. Checks that each W(s_i', s_i), i' <= nprime,
/// is the explicit combination sum (D s_i q_t - s_i D q_t) zeta_t - (s_i q_t) D zeta_t
/// obtained from s_i' = sum q_t zeta_t, and that
/// s_i' W(s_i, s_j) = s_i W(s_i', s_j) - s_j W(s_i', s_i) for every index triple.
inline SandwichReport wronskian_sandwich_check(const IdealModel& z, const std::vector<JetPoly>& basis, int nprime) {
  if (basis.empty() || nprime < 0 || nprime >= static_cast<int>(basis.size())) {
    throw DomainError("malformed section basis");
  }
  std::vector<std::vector<JetPoly>> coeffs;
  for (int ip = 0; ip <= nprime; ++ip) {
    auto d = divide_by(basis[static_cast<std::size_t>(ip)], z.generators);
    if (!d.remainder.is_zero()) throw DomainError("basis prefix is not in the ideal of Z");
    coeffs.push_back(std::move(d.quotients));
  }
  std::vector<JetPoly> dzeta;
  for (const auto& g : z.generators) dzeta.push_back(total_derivative(g));

  SandwichReport rep;
  const auto& reg = basis.front().registry();
  for (int ip = 0; ip <= nprime; ++ip) {
    const auto& q = coeffs[static_cast<std::size_t>(ip)];
    for (std::size_t i = 0; i < basis.size(); ++i) {
      const JetPoly& s = basis[i];
      JetPoly ds = total_derivative(s);
      JetPoly combo(reg);
      for (std::size_t t = 0; t < q.size(); ++t) {
        combo += (ds * q[t] - s * total_derivative(q[t])) * z.generators[t];
        combo -= (s * q[t]) * dzeta[t];
      }
      ++rep.memberships;
      if (combo != wronskian_jet({basis[static_cast<std::size_t>(ip)], s})) ++rep.membership_failures;
    }
  }
  const std::size_t m = basis.size();
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        JetPoly lhs = basis[a] * wronskian_jet({basis[i], basis[j]});
        JetPoly rhs = basis[i] * wronskian_jet({basis[a], basis[j]}) - basis[j] * wronskian_jet({basis[a], basis[i]});
        ++rep.triples;
        if (lhs != rhs) ++rep.triple_failures;
      }
    }
  }
  return rep;
}

/// All monomials of degree d in the base variables of reg.
inline std::vector<JetPoly> monomial_basis(const RegistryPtr& reg, int d) {
  if (d < 0) throw DomainError("negative degree");
  std::vector<JetPoly> out;
  const int nb = reg->nbase();
  std::vector<int> e(static_cast<std::size_t>(nb), 0);
  std::function<void(int, int)> rec = [&](int var, int left) {
    if (var == nb - 1) {
      e[static_cast<std::size_t>(var)] = left;
      Monomial m(static_cast<std::size_t>(reg->size()), 0);
      for (int j = 0; j < nb; ++j) m[static_cast<std::size_t>(reg->id(j, 0))] = e[static_cast<std::size_t>(j)];
      out.push_back(JetPoly::term(reg, m, Rational(1)));
      return;
    }
    for (int a = left; a >= 0; --a) {
      e[static_cast<std::size_t>(var)] = a;
      rec(var + 1, left - a);
    }
  };
  rec(0, d);
  return out;
}

struct SeparationReport {
  int regular_pass = 0;
  int regular_total = 0;
  int singular_pass = 0;
  int singular_total = 0;
  double min_regular_ratio = INFINITY;   // max_S |W_S| / scale over regular jets, minimised
  double max_singular_ratio = 0.0;       // max_S |W_S| / scale over singular jets, maximised
  bool passed() const { return regular_pass == regular_total && singular_pass == singular_total; }
};

namespace detail {

// Random numeric k-jet of a curve in C^{n+1}; singular jets have f'(0) = lambda f(0).
inline std::vector<std::vector<Complex>> random_jet(PhiloxStream& rng, int nbase, int k, bool singular) {
  std::vector<std::vector<Complex>> jet(static_cast<std::size_t>(nbase), std::vector<Complex>(static_cast<std::size_t>(k + 1)));
  for (auto& col : jet) {
    for (auto& v : col) {
      double re = rng.normal(), im = rng.normal();
      v = Complex(re, im);
    }
  }
  if (singular && k >= 1) {
    double re = rng.normal(), im = rng.normal();
    Complex lambda = rng.uniform() < 0.25 ? Complex(0.0, 0.0) : Complex(re, im);
    for (auto& col : jet) col[1] = lambda * col[0];
  }
  return jet;
}

} // namespace detail

/// Base locus of the Wronskians of a separating system. At random regular
/// jets some W(s_{i_0}, ..., s_{i_k}) is nonzero; at jets with f' parallel to f
/// all of them vanish. The scale is the Hadamard bound (max column norm)^{k+1}.
inline SeparationReport separation_base_locus_check(const std::vector<JetPoly>& basis, int k, int trials,
                                                    std::uint64_t seed, int threads = 1) {
  if (k < 1) throw DomainError("separation check needs k >= 1");
  if (static_cast<int>(basis.size()) < k + 1) throw DomainError("system too small to separate k-jets");
  const auto& reg = basis.front().registry();
  if (reg->max_order() < k) throw DomainError("registry jet order below k");
  std::vector<std::vector<JetPoly>> ders(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    ders[i].push_back(basis[i]);
    for (int l = 1; l <= k; ++l) ders[i].push_back(total_derivative(ders[i].back()));
  }
  std::vector<JetPoly> wr;
  for (const auto& sub : sorted_subsets(static_cast<int>(basis.size()), k + 1)) {
    std::vector<JetPoly> s;
    for (int idx : sub) s.push_back(basis[static_cast<std::size_t>(idx)]);
    wr.push_back(wronskian_jet(s));
  }

  const int nbase = reg->nbase();
  std::vector<double> ratio(static_cast<std::size_t>(2 * trials));
  parallel_for(ratio.size(), threads, [&](std::size_t t) {
    const bool singular = t >= static_cast<std::size_t>(trials);
    PhiloxStream rng(seed, t);
    auto jet = detail::random_jet(rng, nbase, k, singular);
    double col = 0.0;
    for (const auto& d : ders) {
      double s = 0.0;
      for (const auto& p : d) s += std::norm(jet_evaluate(p, jet));
      col = std::max(col, std::sqrt(s));
    }
    const double scale = std::pow(col, k + 1);
    double best = 0.0;
    for (const auto& w : wr) best = std::max(best, std::abs(jet_evaluate(w, jet)));
    ratio[t] = scale > 0.0 ? best / scale : 0.0;
  });

  SeparationReport rep;
  for (int t = 0; t < 2 * trials; ++t) {
    const double r = ratio[static_cast<std::size_t>(t)];
    if (t < trials) {
      ++rep.regular_total;
      if (r > 1e-9) ++rep.regular_pass;
      rep.min_regular_ratio = std::min(rep.min_regular_ratio, r);
    } else {
      ++rep.singular_total;
      if (r <= 1e-12) ++rep.singular_pass;
      rep.max_singular_ratio = std::max(rep.max_singular_ratio, r);
    }
  }
  return rep;
}

/// The complete degree-d system on P^n; it separates k-jets once d >= k.
inline SeparationReport separation_base_locus_check(int n, int d, int k, int trials, std::uint64_t seed,
                                                    int threads = 1) {
  if (d < k) throw DomainError("degree too small to separate k-jets");
  auto reg = jet_registry(n + 1, k);
  return separation_base_locus_check(monomial_basis(reg, d), k, trials, seed, threads);
}

} // namespace valdist
