#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <utility>
#include <vector>

#include "valdist/errors.hpp"
#include "valdist/upoly.hpp"

namespace valdist {

struct RootMult {
  Complex root;
  int mult = 1;
};

struct RootOptions {
  double tol = 1e-10;
  int max_sweeps = 200;
};

namespace detail {

// Horner for p and p' together, plus the running bound sum |c_k| |z|^k used
// as the backward-error scale.
struct HornerOut {
  Complex p, dp;
  double scale;
};

inline HornerOut horner2(const std::vector<Complex>& c, Complex z) {
  Complex p(0.0, 0.0), dp(0.0, 0.0);
  double s = 0.0;
  const double az = std::abs(z);
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    dp = dp * z + p;
    p = p * z + *it;
    s = s * az + std::abs(*it);
  }
  return {p, dp, s};
}

// Simultaneous Aberth-Ehrlich iteration. Intended for square-free input.
inline std::vector<Complex> aberth(const CPoly& poly, int max_sweeps) {
  const int n = poly.degree();
  std::vector<Complex> roots;
  if (n <= 0) return roots;
  const auto& c = poly.coeffs();
  if (n == 1) {
    roots.push_back(-c[0] / c[1]);
    return roots;
  }
  // start on a circle whose radius is the geometric mean of the root moduli
  double radius = std::pow(std::abs(c[0]) / std::abs(c[static_cast<std::size_t>(n)]), 1.0 / n);
  if (!(radius > 0.0) || !std::isfinite(radius)) radius = 1.0;
  roots.resize(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    double theta = 2.0 * std::numbers::pi * k / n + 0.4;
    roots[static_cast<std::size_t>(k)] = std::polar(radius, theta);
  }
  const double eps = std::numeric_limits<double>::epsilon();
  std::vector<char> done(static_cast<std::size_t>(n), 0);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool all_done = true;
    for (int i = 0; i < n; ++i) {
      auto ui = static_cast<std::size_t>(i);
      if (done[ui]) continue;
      Complex zi = roots[ui];
      HornerOut h = horner2(c, zi);
      if (std::abs(h.p) <= 4.0 * eps * h.scale) {
        done[ui] = 1;
        continue;
      }
      all_done = false;
      Complex newton = h.p / h.dp;
      Complex sum(0.0, 0.0);
      for (int j = 0; j < n; ++j) {
        if (j != i) sum += 1.0 / (zi - roots[static_cast<std::size_t>(j)]);
      }
      Complex w = newton / (1.0 - newton * sum);
      if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) w = newton;
      roots[ui] = zi - w;
      if (std::abs(w) <= 2.0 * eps * std::abs(roots[ui])) done[ui] = 1;
    }
    if (all_done) return roots;
  }
  bool ok = std::all_of(done.begin(), done.end(), [](char d) { return d != 0; });
  if (!ok) throw ConvergenceError("Aberth-Ehrlich iteration did not converge within the sweep budget");
  return roots;
}

inline void polish(const CPoly& poly, std::vector<Complex>& roots) {
  for (auto& z : roots) {
    for (int it = 0; it < 3; ++it) {
      HornerOut h = horner2(poly.coeffs(), z);
      if (h.dp == Complex(0.0, 0.0)) break;
      Complex step = h.p / h.dp;
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
      z -= step;
    }
  }
}

inline std::vector<RootMult> merge_clusters(std::vector<RootMult> rs, double radius) {
  std::vector<RootMult> out;
  for (const auto& r : rs) {
    bool merged = false;
    for (auto& o : out) {
      if (std::abs(o.root - r.root) <= radius * std::max(1.0, std::abs(o.root))) {
        int m = o.mult + r.mult;
        o.root = (static_cast<double>(o.mult) * o.root + static_cast<double>(r.mult) * r.root) /
                 static_cast<double>(m);
        o.mult = m;
        merged = true;
        break;
      }
    }
    if (!merged) out.push_back(r);
  }
  return out;
}

inline CPoly expand_roots(const std::vector<RootMult>& rs, Complex lead) {
  CPoly acc = CPoly::constant(lead);
  for (const auto& r : rs) {
    for (int k = 0; k < r.mult; ++k) acc *= CPoly::linear_root(r.root);
  }
  return acc;
}

inline double relative_coeff_error(const CPoly& a, const CPoly& b) {
  double scale = std::max(a.max_abs_coeff(), b.max_abs_coeff());
  if (scale == 0.0) return 0.0;
  return (a - b).max_abs_coeff() / scale;
}

inline void sort_roots(std::vector<RootMult>& rs) {
  std::sort(rs.begin(), rs.end(), [](const RootMult& a, const RootMult& b) {
    if (a.root.real() != b.root.real()) return a.root.real() < b.root.real();
    return a.root.imag() < b.root.imag();
  });
}

} // namespace detail

/// Roots of a floating polynomial with multiplicities. Multiplicities come
/// from an approximate square-free decomposition; if the recombined product
/// does not reproduce p the decomposition is discarded and plain Aberth plus
/// cluster merging is used instead.
inline std::vector<RootMult> roots_with_multiplicity(const CPoly& p, RootOptions opt = {}) {
  if (p.is_zero()) throw DomainError("roots of the zero polynomial");
  std::vector<RootMult> out;
  if (p.degree() == 0) return out;

  int zeros = p.order_at_zero();
  std::vector<Complex> rest(p.coeffs().begin() + zeros, p.coeffs().end());
  CPoly q(std::move(rest));
  if (zeros > 0) out.push_back({Complex(0.0, 0.0), zeros});
  if (q.degree() == 0) return out;

  std::vector<RootMult> found;
  for (const auto& [factor, mult] : square_free_factors(q, opt.tol)) {
    auto rs = detail::aberth(factor, opt.max_sweeps);
    detail::polish(factor, rs);
    for (auto z : rs) found.push_back({z, mult});
  }
  found = detail::merge_clusters(std::move(found), opt.tol);
  if (detail::relative_coeff_error(detail::expand_roots(found, q.leading()), q) > std::sqrt(opt.tol)) {
    found.clear();
    auto rs = detail::aberth(q, opt.max_sweeps);
    detail::polish(q, rs);
    for (auto z : rs) found.push_back({z, 1});
    found = detail::merge_clusters(std::move(found), opt.tol);
  }
  out.insert(out.end(), found.begin(), found.end());
  detail::sort_roots(out);
  return out;
}

/// Roots of an exact polynomial. The square-free split and the multiplicities
/// are exact; only the root locations of each square-free factor are numeric.
inline std::vector<RootMult> roots_with_multiplicity(const QPoly& p, RootOptions opt = {}) {
  if (p.is_zero()) throw DomainError("roots of the zero polynomial");
  std::vector<RootMult> out;
  if (p.degree() == 0) return out;
  int zeros = p.order_at_zero();
  if (zeros > 0) out.push_back({Complex(0.0, 0.0), zeros});
  std::vector<GaussRational> rest(p.coeffs().begin() + zeros, p.coeffs().end());
  QPoly q(std::move(rest));
  for (const auto& [factor, mult] : square_free_factors(q)) {
    CPoly f = to_cpoly(factor);
    auto rs = detail::aberth(f, opt.max_sweeps);
    detail::polish(f, rs);
    for (auto z : rs) out.push_back({z, mult});
  }
  detail::sort_roots(out);
  return out;
}

/// Exact order of vanishing of p at the exact point a.
inline int order_at(const QPoly& p, const GaussRational& a) {
  if (p.is_zero()) throw DomainError("order of vanishing of the zero polynomial");
  return p.shift(a).order_at_zero();
}

} // namespace valdist
