#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "valdist/curves.hpp"
#include "valdist/det.hpp"
#include "valdist/rng.hpp"

namespace valdist {

/// Gaussian rational with components k/den, |k| <= span.
inline GaussRational random_gauss(PhiloxStream& rng, long span, long den) {
  long re = rng.uniform_int(-span, span), im = rng.uniform_int(-span, span);
  return GaussRational(make_rational(re, den), make_rational(im, den));
}

/// Gaussian rational with small denominator and modulus in [lo, hi].
inline GaussRational random_root(PhiloxStream& rng, double lo = 0.3, double hi = 3.0, long den = 8) {
  const long span = static_cast<long>(std::ceil(hi * den));
  for (;;) {
    GaussRational a = random_gauss(rng, span, den);
    double m = std::abs(a.to_complex());
    if (m >= lo && m <= hi) return a;
  }
}

/// Nonzero small integer.
inline long random_unit(PhiloxStream& rng, long span = 3) {
  for (;;) {
    long v = rng.uniform_int(-span, span);
    if (v != 0) return v;
  }
}

inline QPoly random_poly_from_roots(PhiloxStream& rng, int degree, double lo = 0.3, double hi = 3.0) {
  QPoly p = QPoly::constant(GaussRational(random_unit(rng)));
  for (int i = 0; i < degree; ++i) p *= QPoly::linear_root(random_root(rng, lo, hi));
  return p;
}

/// Random linearly non-degenerate rational curve in P^n of degree exactly `degree`.
/// Each component is a product of linear factors with roots in the annulus
/// 0.3 <= |a| <= 3; draws are repeated until the reduced curve has the
/// requested degree and a nonvanishing Wronskian.
inline ProjectiveCurve random_curve(PhiloxStream& rng, int n, int degree) {
  if (degree < n) throw DomainError("a non-degenerate curve in P^n has degree at least n");
  for (;;) {
    std::vector<QPoly> comps;
    for (int i = 0; i <= n; ++i) {
      int d = i == 0 ? degree : static_cast<int>(rng.uniform_int(0, degree));
      comps.push_back(random_poly_from_roots(rng, d));
    }
    ProjectiveCurve f = ProjectiveCurve::reduce(comps);
    if (f.degree() == degree && f.linearly_nondegenerate()) return f;
  }
}

/// Random invertible (n+1)x(n+1) matrix with small Gaussian integer entries.
inline std::vector<std::vector<GaussRational>> random_invertible(PhiloxStream& rng, int size) {
  for (;;) {
    std::vector<std::vector<GaussRational>> a(static_cast<std::size_t>(size),
                                              std::vector<GaussRational>(static_cast<std::size_t>(size)));
    for (auto& row : a) {
      for (auto& v : row) v = random_gauss(rng, 3, 1);
    }
    if (!determinant(a, GaussRational()).is_zero()) return a;
  }
}

/// A curve with prescribed stationarity indices (nu_1..nu_n) at z0.
/// In normal form f_i = w^{s_i}(1 + tail), w = z - z0, s_i = nu_1 + ... + nu_i + i,
/// then mixed by a random invertible matrix.
inline ProjectiveCurve normal_form_curve(PhiloxStream& rng, const std::vector<int>& nu, const GaussRational& z0,
                                         int tail_degree = 2) {
  const int n = static_cast<int>(nu.size());
  if (n < 1) throw DomainError("need at least one stationarity index");
  const QPoly w = QPoly::linear_root(z0);
  std::vector<QPoly> base;
  int s = 0;
  for (int i = 0; i <= n; ++i) {
    if (i > 0) {
      if (nu[static_cast<std::size_t>(i - 1)] < 0) throw DomainError("stationarity indices must be nonnegative");
      s += nu[static_cast<std::size_t>(i - 1)] + 1;
    }
    QPoly tail = QPoly::constant(GaussRational(1));
    for (int t = 1; t <= tail_degree; ++t) tail += random_gauss(rng, 4, 4) * w.pow(t);
    base.push_back(w.pow(s) * tail);
  }
  auto a = random_invertible(rng, n + 1);
  std::vector<QPoly> mixed(static_cast<std::size_t>(n + 1));
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      mixed[static_cast<std::size_t>(i)] += a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *
                                            base[static_cast<std::size_t>(j)];
    }
  }
  return ProjectiveCurve::reduce(mixed);
}

/// Random hyperplane normals in general position in P^n: every n+1 of them
/// are linearly independent.
inline std::vector<std::vector<Complex>> random_general_lines(PhiloxStream& rng, int n, int count) {
  for (;;) {
    std::vector<std::vector<GaussRational>> normals;
    for (int j = 0; j < count; ++j) {
      std::vector<GaussRational> a;
      for (int i = 0; i <= n; ++i) a.push_back(random_gauss(rng, 4, 1));
      normals.push_back(std::move(a));
    }
    bool ok = true;
    for (const auto& sub : sorted_subsets(count, n + 1)) {
      std::vector<std::vector<GaussRational>> m;
      for (int idx : sub) m.push_back(normals[static_cast<std::size_t>(idx)]);
      if (determinant(m, GaussRational()).is_zero()) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    std::vector<std::vector<Complex>> out;
    for (const auto& a : normals) {
      std::vector<Complex> c;
      for (const auto& v : a) c.push_back(v.to_complex());
      out.push_back(std::move(c));
    }
    return out;
  }
}

} // namespace valdist
