#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "valdist/det.hpp"
#include "valdist/errors.hpp"
#include "valdist/exterior.hpp"
#include "valdist/roots.hpp"
#include "valdist/upoly.hpp"

namespace valdist {

/// Plucker coordinates of one derived curve F^k as polynomials in z.
struct DerivedLevel {
  int k = 0;
  std::vector<IndexSet> subsets;   // sorted (k+1)-subsets of {0..n}
  std::vector<QPoly> exact;        // Wronskian minors
  std::vector<CPoly> numeric;      // the same, rounded

  bool identically_zero() const {
    return std::all_of(exact.begin(), exact.end(), [](const QPoly& p) { return p.is_zero(); });
  }
};

/// The (k+1)x(k+1) Wronskian determinant det[p_j^(l)].
inline QPoly wronskian(const std::vector<QPoly>& ps) {
  const std::size_t m = ps.size();
  if (m == 0) throw DomainError("Wronskian of no functions");
  std::vector<std::vector<QPoly>> mat(m, std::vector<QPoly>(m));
  for (std::size_t j = 0; j < m; ++j) {
    QPoly d = ps[j];
    for (std::size_t l = 0; l < m; ++l) {
      mat[l][j] = d;
      d = d.derivative();
    }
  }
  return determinant(mat, QPoly{});
}

/// Rational curve in P^n given by a reduced representation.
class ProjectiveCurve {
public:
  /// Divide out the common gcd; the components are kept exactly.
  static ProjectiveCurve reduce(std::vector<QPoly> polys) {
    if (polys.size() < 2) throw DomainError("a curve in P^n needs at least two components");
    bool all_zero = std::all_of(polys.begin(), polys.end(), [](const QPoly& p) { return p.is_zero(); });
    if (all_zero) throw DomainError("all components are identically zero");
    QPoly g;
    for (const auto& p : polys) {
      if (p.is_zero()) continue;
      g = g.is_zero() ? p.monic() : poly_gcd(g, p);
    }
    if (g.degree() > 0) {
      for (auto& p : polys) p = exact_quotient(p, g);
    }
    return ProjectiveCurve(std::move(polys));
  }

  /// Double coefficients are taken at their exact binary value.
  static ProjectiveCurve reduce(const std::vector<CPoly>& polys) {
    std::vector<QPoly> q;
    q.reserve(polys.size());
    for (const auto& p : polys) q.push_back(to_qpoly(p));
    return reduce(std::move(q));
  }

  int n() const { return static_cast<int>(exact_.size()) - 1; }
  int degree() const { return degree_; }
  bool is_constant() const { return level(1).identically_zero(); }
  bool linearly_nondegenerate() const { return !level(n()).identically_zero(); }

  const std::vector<QPoly>& exact() const { return exact_; }
  const std::vector<CPoly>& components() const { return numeric_; }

  /// Derived level k = 0..n.
  const DerivedLevel& level(int k) const {
    if (k < 0 || k > n()) throw DomainError("derived curve level out of range");
    return levels_[static_cast<std::size_t>(k)];
  }

  std::vector<Complex> eval(Complex z) const {
    std::vector<Complex> v;
    v.reserve(numeric_.size());
    for (const auto& p : numeric_) v.push_back(p.eval(z));
    return v;
  }

  double norm2(Complex z) const {
    double s = 0.0;
    for (const auto& p : numeric_) s += std::norm(p.eval(z));
    return s;
  }

  ExteriorVector derived_vector(int k, Complex z) const {
    const auto& lv = level(k);
    ExteriorVector v(n() + 1, k + 1);
    for (std::size_t i = 0; i < lv.numeric.size(); ++i) v.coeffs()[i] = lv.numeric[i].eval(z);
    return v;
  }

  /// |F^k(z)|^2 with F^{-1} = 1 and F^{k} = 0 past the top level.
  double derived_norm2(int k, Complex z) const {
    if (k < 0) return 1.0;
    if (k > n()) return 0.0;
    double s = 0.0;
    for (const auto& p : level(k).numeric) s += std::norm(p.eval(z));
    return s;
  }

  /// Monic gcd of the level-k minors; its zeros are the zeros of F^k.
  QPoly level_gcd(int k) const {
    const auto& lv = level(k);
    if (lv.identically_zero()) throw DegenerateError("derived curve vanishes identically");
    QPoly g;
    for (const auto& p : lv.exact) {
      if (p.is_zero()) continue;
      g = g.is_zero() ? p.monic() : poly_gcd(g, p);
    }
    return g;
  }

private:
  explicit ProjectiveCurve(std::vector<QPoly> polys) : exact_(std::move(polys)) {
    degree_ = 0;
    for (const auto& p : exact_) {
      degree_ = std::max(degree_, p.degree());
      numeric_.push_back(to_cpoly(p));
    }
    const int dim = n();
    for (int k = 0; k <= dim; ++k) {
      DerivedLevel lv;
      lv.k = k;
      lv.subsets = sorted_subsets(dim + 1, k + 1);
      for (const auto& s : lv.subsets) {
        std::vector<QPoly> cols;
        for (int i : s) cols.push_back(exact_[static_cast<std::size_t>(i)]);
        QPoly w = wronskian(cols);
        lv.numeric.push_back(to_cpoly(w));
        lv.exact.push_back(std::move(w));
      }
      levels_.push_back(std::move(lv));
    }
  }

  std::vector<QPoly> exact_;
  std::vector<CPoly> numeric_;
  std::vector<DerivedLevel> levels_;
  int degree_ = 0;
};

/// Plucker coordinates of F^k as polynomials.
inline const std::vector<QPoly>& derived_polys(const ProjectiveCurve& f, int k) { return f.level(k).exact; }

inline ExteriorVector derived_vector(const ProjectiveCurve& f, int k, Complex z) { return f.derived_vector(k, z); }

/// The top Wronskian W(f_0, ..., f_n).
inline QPoly wronskian_poly(const ProjectiveCurve& f) { return f.level(f.n()).exact.front(); }

/// phi_k(H) = |F^k -| alpha|^2 / |F^k|^2.
inline double contact_function(const ProjectiveCurve& f, const LinearTarget& h, int k, Complex z) {
  if (h.ambient() != f.n() + 1) throw DomainError("target and curve live in different projective spaces");
  if (k < h.codim() - 1 || k > f.n()) throw DomainError("contact order out of range for this target");
  ExteriorVector fk = f.derived_vector(k, z);
  double den = fk.norm2();
  if (den == 0.0) throw DegenerateError("derived curve vanishes at the evaluation point");
  ExteriorVector c = interior_product(fk, h.normal());
  return c.norm2() / den;
}

/// ord_{z0} F^k for k = 0..n (exact point).
inline std::vector<int> derived_orders(const ProjectiveCurve& f, const GaussRational& z0) {
  std::vector<int> o;
  for (int k = 0; k <= f.n(); ++k) {
    const auto& lv = f.level(k);
    if (lv.identically_zero()) throw DegenerateError("curve is linearly degenerate");
    int best = -1;
    for (const auto& p : lv.exact) {
      if (p.is_zero()) continue;
      int ord = order_at(p, z0);
      best = best < 0 ? ord : std::min(best, ord);
    }
    o.push_back(best);
  }
  return o;
}

/// ord_{z0} F^k for a floating point z0: multiplicity of the zero of the
/// level gcd within `radius` of z0.
inline std::vector<int> derived_orders(const ProjectiveCurve& f, Complex z0, double radius = 1e-6) {
  std::vector<int> o;
  for (int k = 0; k <= f.n(); ++k) {
    QPoly g = f.level_gcd(k);
    int ord = 0;
    for (const auto& r : roots_with_multiplicity(g)) {
      if (std::abs(r.root - z0) <= radius * std::max(1.0, std::abs(z0))) ord += r.mult;
    }
    o.push_back(ord);
  }
  return o;
}

namespace detail {
inline std::vector<int> nu_from_orders(const std::vector<int>& o) {
  // o[0] = ord F = 0 for a reduced representation, o_{-1} = 0
  std::vector<int> nu;
  for (std::size_t k = 1; k < o.size(); ++k) {
    int prev2 = k >= 2 ? o[k - 2] : 0;
    nu.push_back(o[k] - 2 * o[k - 1] + prev2);
  }
  return nu;
}
} // namespace detail

/// Stationarity indices (nu_1, ..., nu_n) at z0.
inline std::vector<int> vanishing_orders(const ProjectiveCurve& f, const GaussRational& z0) {
  return detail::nu_from_orders(derived_orders(f, z0));
}

inline std::vector<int> vanishing_orders(const ProjectiveCurve& f, Complex z0, double radius = 1e-6) {
  return detail::nu_from_orders(derived_orders(f, z0, radius));
}

/// h_k = |F^{k-1}|^2 |F^{k+1}|^2 / |F^k|^4.
inline double plucker_density(const ProjectiveCurve& f, int k, Complex z) {
  if (k < 0 || k > f.n()) throw DomainError("Plucker density level out of range");
  if (k < f.n() && f.level(k + 1).identically_zero()) {
    throw DegenerateError("next derived curve vanishes identically");
  }
  double mid = f.derived_norm2(k, z);
  if (mid == 0.0) throw DegenerateError("derived curve vanishes at the evaluation point");
  return f.derived_norm2(k - 1, z) * f.derived_norm2(k + 1, z) / (mid * mid);
}

} // namespace valdist
