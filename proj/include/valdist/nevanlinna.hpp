#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <vector>

#include "valdist/curves.hpp"
#include "valdist/errors.hpp"
#include "valdist/exterior.hpp"
#include "valdist/mpoly.hpp"
#include "valdist/quadrature.hpp"
#include "valdist/roots.hpp"

namespace valdist {

// ---------------------------------------------------------------------------
// Subschemes and Weil functions
// ---------------------------------------------------------------------------

/// Closed subscheme of P^n cut out by homogeneous generators.
class SubschemeOnPn {
public:
  SubschemeOnPn(int n, std::vector<GMPoly> gens) : n_(n), reg_(VarRegistry::indexed(n + 1)) {
    for (auto& g : gens) {
      if (g.is_zero()) continue;
      if (!g.registry() || g.registry()->nbase() != n + 1 || g.registry()->max_order() != 0) {
        throw RegistryMismatch("generator does not live on the coordinate ring of P^n");
      }
      if (!g.is_homogeneous()) throw DomainError("subscheme generators must be homogeneous");
      if (g.degree() == 0) throw DomainError("a nonzero constant generator defines the empty subscheme");
      degrees_.push_back(g.degree());
      gens_.push_back(std::move(g));
    }
    if (gens_.empty()) throw DomainError("subscheme needs at least one nonzero generator");
  }

  /// Intersection of the hyperplanes {sum a_i x_i = 0}.
  static SubschemeOnPn hyperplanes(const std::vector<std::vector<GaussRational>>& normals) {
    if (normals.empty()) throw DomainError("no hyperplanes given");
    int n = static_cast<int>(normals.front().size()) - 1;
    auto reg = VarRegistry::indexed(n + 1);
    std::vector<GMPoly> gens;
    for (const auto& a : normals) {
      if (static_cast<int>(a.size()) != n + 1) throw DomainError("hyperplane normals of different lengths");
      GMPoly g(reg);
      for (int i = 0; i <= n; ++i) g += a[static_cast<std::size_t>(i)] * GMPoly::variable(reg, i);
      gens.push_back(std::move(g));
    }
    return SubschemeOnPn(n, std::move(gens));
  }
  static SubschemeOnPn hyperplane(const std::vector<GaussRational>& a) { return hyperplanes({a}); }
  static SubschemeOnPn hyperplane(const std::vector<Complex>& a) {
    std::vector<GaussRational> q;
    for (auto c : a) q.push_back(GaussRational::from_complex(c));
    return hyperplane(q);
  }

  /// The reduced point p, generated by the 2x2 minors x_i p_j - x_j p_i.
  static SubschemeOnPn point(const std::vector<GaussRational>& p) {
    int n = static_cast<int>(p.size()) - 1;
    if (n < 1) throw DomainError("point needs at least two homogeneous coordinates");
    if (std::all_of(p.begin(), p.end(), [](const GaussRational& c) { return c.is_zero(); })) {
      throw DomainError("zero vector does not represent a point");
    }
    auto reg = VarRegistry::indexed(n + 1);
    std::vector<GMPoly> gens;
    for (int i = 0; i <= n; ++i) {
      for (int j = i + 1; j <= n; ++j) {
        gens.push_back(p[static_cast<std::size_t>(j)] * GMPoly::variable(reg, i) -
                       p[static_cast<std::size_t>(i)] * GMPoly::variable(reg, j));
      }
    }
    return SubschemeOnPn(n, std::move(gens));
  }

  int n() const { return n_; }
  const std::vector<GMPoly>& generators() const { return gens_; }
  const std::vector<int>& degrees() const { return degrees_; }

private:
  int n_;
  RegistryPtr reg_;
  std::vector<GMPoly> gens_;
  std::vector<int> degrees_;
};

/// lambda_Z(x) = -log max_i |g_i(x)| / |x|^{d_i}; +infinity on Supp Z.
inline double weil_value(const SubschemeOnPn& z, const std::vector<Complex>& x) {
  if (static_cast<int>(x.size()) != z.n() + 1) throw DomainError("representative has the wrong length");
  double nn = 0.0;
  for (auto c : x) nn += std::norm(c);
  if (nn == 0.0) throw DomainError("zero vector is not a point of P^n");
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < z.generators().size(); ++i) {
    double a = std::abs(z.generators()[i].eval(x));
    if (a == 0.0) continue;
    best = std::max(best, std::log(a) - 0.5 * z.degrees()[i] * std::log(nn));
  }
  return -best;
}

/// Generators of Z pulled back along a curve, kept exactly.
class PulledBack {
public:
  PulledBack(const ProjectiveCurve& f, const SubschemeOnPn& z) : f_(&f) {
    if (z.n() != f.n()) throw DomainError("curve and subscheme live in different projective spaces");
    auto one = QPoly::constant(GaussRational(1));
    for (std::size_t i = 0; i < z.generators().size(); ++i) {
      QPoly g = z.generators()[i].evaluate<QPoly>(f.exact(), one,
                                                  [](const GaussRational& c) { return QPoly::constant(c); });
      if (g.is_zero()) continue;
      degrees_.push_back(z.degrees()[i]);
      numeric_.push_back(to_cpoly(g));
      gcd_ = gcd_.is_zero() ? g.monic() : poly_gcd(gcd_, g);
      exact_.push_back(std::move(g));
    }
    if (exact_.empty()) throw DegenerateError("the curve lies inside the support of the subscheme");
    zeros_ = roots_with_multiplicity(gcd_);
  }

  /// lambda_Z(f(z)).
  double lambda(Complex z) const {
    double ln = std::log(f_->norm2(z));
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < numeric_.size(); ++i) {
      double a = std::abs(numeric_[i].eval(z));
      if (a == 0.0) continue;
      best = std::max(best, std::log(a) - 0.5 * degrees_[i] * ln);
    }
    return -best;
  }

  /// Zeros of f^*Z: m_a = min_i ord_a(g_i o F).
  const std::vector<RootMult>& zeros() const { return zeros_; }
  const QPoly& gcd() const { return gcd_; }

private:
  const ProjectiveCurve* f_;
  std::vector<QPoly> exact_;
  std::vector<CPoly> numeric_;
  std::vector<int> degrees_;
  QPoly gcd_;
  std::vector<RootMult> zeros_;
};

// ---------------------------------------------------------------------------
// m, N, T
// ---------------------------------------------------------------------------

/// N(r) = m_0 log r + sum_{0<|a|<=r} m_a log(r/|a|).
inline double counting_from_zeros(const std::vector<RootMult>& zeros, double r) {
  if (!(r > 0.0)) throw DomainError("radius must be positive");
  double s = 0.0;
  for (const auto& z : zeros) {
    double a = std::abs(z.root);
    if (a == 0.0) {
      s += z.mult * std::log(r);
    } else if (a <= r) {
      s += z.mult * std::log(r / a);
    }
  }
  return s;
}

/// Circle average of log|p| from the roots (Jensen), exact up to root accuracy.
inline double jensen_log_mean(const QPoly& p, double r) {
  if (p.is_zero()) throw DomainError("log of the zero polynomial");
  double s = std::log(std::abs(p.leading().to_complex()));
  for (const auto& z : roots_with_multiplicity(p)) s += z.mult * std::log(std::max(r, std::abs(z.root)));
  return s;
}

inline QuadResult proximity(const PulledBack& pb, double r, const QuadratureSpec& spec = proximity_spec()) {
  if (!(r > 0.0)) throw DomainError("radius must be positive");
  return circle_average([&](double t) { return pb.lambda(std::polar(r, t)); }, spec);
}

inline QuadResult proximity(const ProjectiveCurve& f, const SubschemeOnPn& z, double r,
                            const QuadratureSpec& spec = proximity_spec()) {
  PulledBack pb(f, z);
  return proximity(pb, r, spec);
}

inline double counting(const ProjectiveCurve& f, const SubschemeOnPn& z, double r) {
  PulledBack pb(f, z);
  return counting_from_zeros(pb.zeros(), r);
}

/// Circle average of log |F|^2.
inline QuadResult mean_log_norm2(const ProjectiveCurve& f, double r, const QuadratureSpec& spec = {}) {
  return circle_average([&](double t) { return std::log(f.norm2(std::polar(r, t))); }, spec);
}

/// T_f(r, O(d)) = d (mean log|F| - log|F(0)|).
inline double characteristic(const ProjectiveCurve& f, int d, double r, const QuadratureSpec& spec = {}) {
  if (!(r > 0.0)) throw DomainError("radius must be positive");
  double avg = mean_log_norm2(f, r, spec).value;
  return 0.5 * d * (avg - std::log(f.norm2(Complex(0.0, 0.0))));
}

// ---------------------------------------------------------------------------
// Profiles and excess statistics
// ---------------------------------------------------------------------------

struct NevanlinnaProfile {
  std::vector<double> r, m, m_err, N, T, residual;
};

/// Summary of an excess (or residual) curve over an r-grid.
struct ExcessStats {
  double fitted_c = 0.0;   // max over the grid
  double mean = 0.0;
  double stdev = 0.0;
  double max_dev = 0.0;    // max |value - mean|
  double slope = 0.0;      // least squares against log r
  double intercept = 0.0;
};

inline ExcessStats excess_stats(const std::vector<double>& r, const std::vector<double>& v) {
  if (r.size() != v.size() || r.empty()) throw DomainError("excess table is empty or ragged");
  ExcessStats s;
  const double n = static_cast<double>(v.size());
  s.fitted_c = *std::max_element(v.begin(), v.end());
  s.mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double var = 0.0;
  for (double x : v) {
    var += (x - s.mean) * (x - s.mean);
    s.max_dev = std::max(s.max_dev, std::abs(x - s.mean));
  }
  s.stdev = std::sqrt(var / n);
  double mx = 0.0;
  for (double x : r) mx += std::log(x);
  mx /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    double dx = std::log(r[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (v[i] - s.mean);
  }
  s.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  s.intercept = s.mean - s.slope * mx;
  return s;
}

inline std::vector<double> make_r_grid(double r_min, double r_max, int count, bool log_spacing) {
  if (!(r_min > 0.0) || !(r_max > r_min) || count < 2) {
    if (count == 1 && r_min > 0.0) return {r_min};
    throw DomainError("r-grid must be positive and strictly increasing");
  }
  std::vector<double> g(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    double t = static_cast<double>(i) / (count - 1);
    g[static_cast<std::size_t>(i)] =
        log_spacing ? std::exp(std::log(r_min) + t * (std::log(r_max) - std::log(r_min))) : r_min + t * (r_max - r_min);
  }
  g.back() = r_max;
  return g;
}

inline void check_grid(const std::vector<double>& r) {
  if (r.empty()) throw DomainError("empty r-grid");
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!(r[i] > 0.0) || (i > 0 && !(r[i] > r[i - 1]))) throw DomainError("r-grid must be positive and strictly increasing");
  }
}

struct FmtReport {
  NevanlinnaProfile profile;
  ExcessStats residual_stats;
  double max_quad_error = 0.0;
};

/// Tabulate T - m - N for a divisor, which the first main theorem says is constant.
inline FmtReport fmt_residual(const ProjectiveCurve& f, const SubschemeOnPn& z, const std::vector<double>& r_grid,
                              const QuadratureSpec& spec = proximity_spec()) {
  check_grid(r_grid);
  if (z.generators().size() != 1) throw DomainError("first main theorem check needs a divisor (one generator)");
  PulledBack pb(f, z);
  const int d = z.degrees().front();
  FmtReport rep;
  auto& p = rep.profile;
  const double log_norm0 = std::log(f.norm2(Complex(0.0, 0.0)));
  for (double r : r_grid) {
    QuadResult m = proximity(pb, r, spec);
    QuadResult t = mean_log_norm2(f, r);
    double T = 0.5 * d * (t.value - log_norm0);
    double N = counting_from_zeros(pb.zeros(), r);
    p.r.push_back(r);
    p.m.push_back(m.value);
    p.m_err.push_back(m.error + 0.5 * d * t.error);
    p.N.push_back(N);
    p.T.push_back(T);
    p.residual.push_back(T - m.value - N);
    rep.max_quad_error = std::max(rep.max_quad_error, m.error + 0.5 * d * t.error);
  }
  rep.residual_stats = excess_stats(p.r, p.residual);
  return rep;
}

// ---------------------------------------------------------------------------
// Green-Jensen
// ---------------------------------------------------------------------------

struct GreenJensen {
  double lhs = 0.0, rhs = 0.0, diff = 0.0, error = 0.0;
};

/// Zero side sum m_a log(r/|a|) against (1/2)(mean log|p|^2 - log|p(0)|^2).
/// A zero of order m at the origin contributes m log r on the left and is
/// factored out of p(0) on the right.
inline GreenJensen green_jensen_check(const QPoly& p, double r, const QuadratureSpec& spec = proximity_spec()) {
  if (p.is_zero()) throw DomainError("Green-Jensen check of the zero polynomial");
  if (!(r > 0.0)) throw DomainError("radius must be positive");
  GreenJensen g;
  g.lhs = counting_from_zeros(roots_with_multiplicity(p), r);
  int m0 = p.order_at_zero();
  double at0 = std::norm(p.coeff(m0).to_complex());
  CPoly pc = to_cpoly(p);
  QuadResult avg = circle_average([&](double t) { return std::log(std::norm(pc.eval(std::polar(r, t)))); }, spec);
  g.rhs = 0.5 * (avg.value - std::log(at0));
  g.diff = g.lhs - g.rhs;
  g.error = 0.5 * avg.error;
  return g;
}

inline GreenJensen green_jensen_check(const CPoly& p, double r, const QuadratureSpec& spec = proximity_spec()) {
  return green_jensen_check(to_qpoly(p), r, spec);
}

// ---------------------------------------------------------------------------
// N(psi dd^c|z|^2, r)
// ---------------------------------------------------------------------------

/// An integrable singularity of a density: psi ~ |z - z0|^{-beta}, beta < 2.
struct SingularPoint {
  Complex z;
  double beta = 0.0;
};

namespace detail {

// C-infinity cutoff: 1 on [0, 1/2], 0 on [1, inf).
inline double bump(double t) {
  if (t <= 0.5) return 1.0;
  if (t >= 1.0) return 0.0;
  double x = (1.0 - t) / 0.5;   // 1 at t=1/2, 0 at t=1
  double a = std::exp(-1.0 / x), b = std::exp(-1.0 / (1.0 - x));
  return a / (a + b);
}

struct Bump {
  Complex z;
  double delta;
  double beta;
  double power;   // radial substitution s = delta * u^power
};

} // namespace detail

/// N(psi dd^c|z|^2, r) = (1/pi) int_{|z|<r} psi(z) log(r/|z|) dA for every r
/// in the grid.
///
/// Each listed singular point gets a smooth cutoff disk integrated in local
/// polar coordinates, with a radial substitution s = delta u^{1/(2-beta)} that
/// turns |z-a|^{-beta} s ds into a bounded integrand. What is left of psi is
/// integrated over annuli between consecutive grid radii. Using
/// log(r/|z|) = log r - log|z|, every piece is integrated once against 1 and
/// against log|z| and recombined for all radii. A cutoff disk that straddles
/// a grid circle is integrated against log+(r/|z|) directly, splitting each
/// ray where it leaves the disk |z| < r.
inline std::vector<double> nphi_profile(const std::function<double(Complex)>& psi, const std::vector<double>& r_grid,
                                        const std::vector<SingularPoint>& singular = {},
                                        const QuadratureSpec& spec = disk_spec()) {
  check_grid(r_grid);
  const double rmax = r_grid.back();
  std::vector<detail::Bump> bumps;
  for (std::size_t j = 0; j < singular.size(); ++j) {
    const auto& sp = singular[j];
    if (sp.beta >= 2.0) throw DomainError("density singularity is not integrable");
    double az = std::abs(sp.z);
    double delta = 0.5;
    for (std::size_t i = 0; i < singular.size(); ++i) {
      if (i != j) delta = std::min(delta, 0.4 * std::abs(sp.z - singular[i].z));
    }
    if (az > 0.0) delta = std::min(delta, 0.45 * az);
    if (az - delta >= rmax) continue;
    if (delta < 1e-9) throw ConvergenceError("singular points too close to separate");
    double beta = std::max(0.0, sp.beta);
    bumps.push_back({sp.z, delta, beta, 1.0 / (2.0 - beta)});
  }

  auto cutoff_sum = [&](Complex z) {
    double s = 0.0;
    for (const auto& b : bumps) {
      double d = std::abs(z - b.z);
      if (d < b.delta) s += detail::bump(d / b.delta);
    }
    return s;
  };
  auto outer = [&](Complex z) {
    double c = cutoff_sum(z);
    if (c >= 1.0) return 0.0;
    double v = psi(z);
    if (!std::isfinite(v)) throw ConvergenceError("density is not finite away from the listed singular points");
    return (1.0 - c) * v;
  };

  // annulus pieces: A_i = 2 int rho A(rho) drho, B_i = 2 int rho log(rho) A(rho) drho
  std::vector<double> piece_a, piece_b;
  double lo = 0.0;
  for (double hi : r_grid) {
    std::map<double, double> cache;
    auto circle_mean = [&](double rho) {
      auto it = cache.find(rho);
      if (it != cache.end()) return it->second;
      double v = rho == 0.0 ? outer(Complex(0.0, 0.0))
                            : periodic_mean([&](double t) { return outer(std::polar(rho, t)); }, 64, 1e-11).value;
      cache.emplace(rho, v);
      return v;
    };
    QuadResult a = integrate_adaptive([&](double rho) { return 2.0 * rho * circle_mean(rho); }, lo, hi, spec);
    QuadResult b = integrate_adaptive(
        [&](double rho) { return rho == 0.0 ? 0.0 : 2.0 * rho * std::log(rho) * circle_mean(rho); }, lo, hi, spec);
    if (!std::isfinite(a.value) || !std::isfinite(b.value)) throw ConvergenceError("divergent density integral");
    piece_a.push_back(a.value);
    piece_b.push_back(b.value);
    lo = hi;
  }

  std::vector<double> out(r_grid.size(), 0.0);
  double cum_a = 0.0, cum_b = 0.0;
  for (std::size_t k = 0; k < r_grid.size(); ++k) {
    cum_a += piece_a[k];
    cum_b += piece_b[k];
    out[k] = std::log(r_grid[k]) * cum_a - cum_b;
  }

  // local pieces around the singular points
  for (const auto& b : bumps) {
    const double s_floor = 1e-7 * b.delta;
    const double s_cut = 0.5 * b.delta;   // the cutoff is identically 1 below this
    const double az = std::abs(b.z);
    // psi with the singular point's own power law continued below s_floor, where
    // z cannot be told apart from the singular point in floating point
    auto psi_at = [&](double s, Complex dir) {
      double se = std::max(s, s_floor);
      double v = psi(b.z + se * dir) * std::pow(se / s, b.beta);
      return std::isfinite(v) ? v : 0.0;
    };
    auto gl_s = [&](double s0, double s1, Complex dir, auto&& weight) {
      const GaussRule& rule = gauss_legendre(12);
      double mx = -INFINITY, acc = 0.0;
      long ev = 0;
      auto f = [&](double s) {
        return detail::bump(s / b.delta) * psi_at(s, dir) * s * weight(b.z + s * dir);
      };
      const double w = (s1 - s0) / 8;
      for (int i = 0; i < 8; ++i) acc += detail::gl_panel(f, s0 + i * w, s0 + (i + 1) * w, rule, mx, ev);
      return acc;
    };
    // int_{s0}^{s1} chi psi weight s ds along the ray a + s dir
    auto radial = [&](Complex dir, double s0, double s1, auto&& weight) {
      if (s1 <= s0) return 0.0;
      double acc = 0.0;
      if (s0 < s_cut) {
        double hi = std::min(s1, s_cut);
        if (s0 == 0.0) {
          // s = delta u^power makes |z-a|^{-beta} s ds/du bounded
          double u1 = std::pow(hi / b.delta, 1.0 / b.power);
          acc += u1 * integrate_graded01(
                          [&](double v) {
                            double u = u1 * v;
                            double s = b.delta * std::pow(u, b.power);
                            if (s == 0.0) return 0.0;
                            double ds = b.delta * b.power * std::pow(u, b.power - 1.0);
                            return psi_at(s, dir) * s * ds * weight(b.z + s * dir);
                          },
                          40, 4, 12);
        } else {
          acc += gl_s(s0, hi, dir, weight);
        }
      }
      if (s1 > s_cut) acc += gl_s(std::max(s0, s_cut), s1, dir, weight);
      return acc;
    };
    auto one = [](Complex) { return 1.0; };
    auto logabs = [](Complex z) { return std::log(std::abs(z)); };

    bool full_needed = false;
    for (double r : r_grid) full_needed = full_needed || r >= az + b.delta;
    double ma = 0.0, mb = 0.0;
    if (full_needed) {
      ma = 2.0 * periodic_mean([&](double t) { return radial(std::polar(1.0, t), 0.0, b.delta, one); }, 32, 1e-10).value;
      mb = 2.0 * periodic_mean([&](double t) { return radial(std::polar(1.0, t), 0.0, b.delta, logabs); }, 32, 1e-10).value;
      if (!std::isfinite(ma) || !std::isfinite(mb)) throw ConvergenceError("divergent density integral");
    }
    for (std::size_t k = 0; k < r_grid.size(); ++k) {
      const double r = r_grid[k];
      if (r >= az + b.delta) {
        out[k] += std::log(r) * ma - mb;
      } else if (r > az - b.delta) {
        // |a + s e^{it}| < r  <=>  s^2 + 2 s Re(conj(a) e^{it}) + |a|^2 - r^2 < 0
        auto weight = [&](Complex z) { return std::log(r / std::abs(z)); };
        auto ray = [&](double t) {
          Complex dir = std::polar(1.0, t);
          double bb = std::real(std::conj(b.z) * dir), cc = az * az - r * r;
          double disc = bb * bb - cc;
          if (disc <= 0.0) return 0.0;
          double sq = std::sqrt(disc);
          double s0 = std::max(0.0, -bb - sq), s1 = std::min(b.delta, -bb + sq);
          return radial(dir, s0, s1, weight);
        };
        QuadResult q = circle_average(ray, spec);
        if (!std::isfinite(q.value)) throw ConvergenceError("divergent density integral");
        out[k] += 2.0 * q.value;
      }
    }
  }
  return out;
}

inline double nphi(const std::function<double(Complex)>& psi, double r, const std::vector<SingularPoint>& singular = {},
                   const QuadratureSpec& spec = disk_spec()) {
  return nphi_profile(psi, {r}, singular, spec).front();
}

// ---------------------------------------------------------------------------
// Ahlfors' lemma on the logarithmic derivative
// ---------------------------------------------------------------------------

struct AhlforsRow {
  double r, lhs, rhs, excess;
};

struct AhlforsReport {
  double epsilon = 0.0;
  std::vector<AhlforsRow> rows;
  ExcessStats stats;
};

namespace detail {

// Components of (F^1 -| a) as exact polynomials.
inline std::vector<QPoly> contracted_first_derived(const ProjectiveCurve& f, const std::vector<GaussRational>& a) {
  const int n1 = f.n() + 1;
  const auto& lv = f.level(1);
  std::vector<QPoly> out(static_cast<std::size_t>(n1));
  for (int c = 0; c < n1; ++c) {
    for (int b = 0; b < n1; ++b) {
      if (b == c) continue;
      IndexSet s = b < c ? IndexSet{b, c} : IndexSet{c, b};
      int sg = merge_sign({b}, {c});
      auto it = std::find(lv.subsets.begin(), lv.subsets.end(), s);
      const QPoly& minor = lv.exact[static_cast<std::size_t>(it - lv.subsets.begin())];
      out[static_cast<std::size_t>(c)] += GaussRational(sg) * a[static_cast<std::size_t>(b)] * minor;
    }
  }
  return out;
}

inline std::vector<GaussRational> exact_normal(const std::vector<Complex>& a) {
  double nn = 0.0;
  for (auto c : a) nn += std::norm(c);
  if (nn == 0.0) throw DomainError("hyperplane with zero normal");
  std::vector<GaussRational> q;
  for (auto c : a) q.push_back(GaussRational::from_complex(c / std::sqrt(nn)));
  return q;
}

} // namespace detail

/// Both sides of Ahlfors' lemma for the hyperplane with normal a:
/// lhs = eps N((phi_1/phi_0^{1-eps}) Omega_0, r), rhs = (1+eps) T_f(r, O(1)).
/// The density simplifies to |F^1 -| a|^2 |F|^{-2-2eps} |<a,F>|^{-2(1-eps)}.
inline AhlforsReport ahlfors_lld_check(const ProjectiveCurve& f, const std::vector<Complex>& normal, double eps,
                                       const std::vector<double>& r_grid) {
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("epsilon must lie in (0, 1)");
  if (static_cast<int>(normal.size()) != f.n() + 1) throw DomainError("hyperplane normal has the wrong length");
  if (f.is_constant()) throw DegenerateError("Ahlfors' lemma needs a non-constant curve");
  check_grid(r_grid);
  auto a = detail::exact_normal(normal);
  QPoly g;
  for (int i = 0; i <= f.n(); ++i) g += QPoly::constant(a[static_cast<std::size_t>(i)]) * f.exact()[static_cast<std::size_t>(i)];
  if (g.is_zero()) throw DegenerateError("the curve lies in the hyperplane");
  std::vector<CPoly> contracted;
  for (const auto& q : detail::contracted_first_derived(f, a)) contracted.push_back(to_cpoly(q));
  CPoly gc = to_cpoly(g);

  auto psi = [&](Complex z) {
    double c2 = 0.0;
    for (const auto& q : contracted) c2 += std::norm(q.eval(z));
    double nf = f.norm2(z);
    double gz = std::norm(gc.eval(z));
    return c2 * std::pow(nf, -1.0 - eps) * std::pow(gz, -(1.0 - eps));
  };
  std::vector<SingularPoint> sing;
  for (const auto& rt : roots_with_multiplicity(g)) sing.push_back({rt.root, 2.0 - 2.0 * rt.mult * eps});

  auto n_vals = nphi_profile(psi, r_grid, sing);
  AhlforsReport rep;
  rep.epsilon = eps;
  std::vector<double> ex;
  for (std::size_t k = 0; k < r_grid.size(); ++k) {
    double lhs = eps * n_vals[k];
    double rhs = (1.0 + eps) * characteristic(f, 1, r_grid[k]);
    rep.rows.push_back({r_grid[k], lhs, rhs, lhs - rhs});
    ex.push_back(lhs - rhs);
  }
  rep.stats = excess_stats(r_grid, ex);
  return rep;
}

// ---------------------------------------------------------------------------
// Green-Jensen of log h_0 and the 1-jet proximity term
// ---------------------------------------------------------------------------

/// N(dd^c[log h_0], r) = (1/2)(mean log h_0 - log h~_0(0)), where h~_0(0)
/// drops the |z|^{2m} factor of a stationary point at the origin. The zero
/// part of |F^1|^2 is taken from Jensen's formula on the gcd of the minors.
class JetMetricTerm {
public:
  explicit JetMetricTerm(const ProjectiveCurve& f) : f_(&f) {
    if (f.is_constant()) throw DegenerateError("constant curve has no first derived curve");
    g1_ = f.level_gcd(1);
    zeros_ = roots_with_multiplicity(g1_);
    for (const auto& m : f.level(1).exact) reduced_.push_back(to_cpoly(exact_quotient(m, g1_)));
    int m0 = g1_.order_at_zero();
    log_g1_at0_ = std::log(std::norm(g1_.coeff(m0).to_complex()));
    log_q_at0_ = std::log(reduced_norm2(Complex(0.0, 0.0)));
  }

  double reduced_norm2(Complex z) const {
    double s = 0.0;
    for (const auto& q : reduced_) s += std::norm(q.eval(z));
    return s;
  }
  const std::vector<CPoly>& reduced_minors() const { return reduced_; }

  double value(double r) const {
    double zero_part = counting_from_zeros(zeros_, r);
    double q_part = 0.5 * (circle_average([&](double t) { return std::log(reduced_norm2(std::polar(r, t))); }).value -
                           log_q_at0_);
    double f_part = mean_log_norm2(*f_, r).value - std::log(f_->norm2(Complex(0.0, 0.0)));
    return zero_part + q_part - f_part;
  }

private:
  const ProjectiveCurve* f_;
  QPoly g1_;
  std::vector<RootMult> zeros_;
  std::vector<CPoly> reduced_;
  double log_g1_at0_ = 0.0, log_q_at0_ = 0.0;
};

struct AaldRow {
  double r, m_z, jet_metric, m_jet, residual;
};

struct AaldReport {
  std::vector<AaldRow> rows;
  ExcessStats stats;
};

/// AALD for 1-jets with Z the intersection of the given hyperplanes:
/// residual = m_f(r,Z) + N(dd^c[log h_0], r) - m_{f[1]}(r, Z^(1)), with the
/// jet proximity realized as the mean of min_j -(1/2) log phi_1(H_j).
inline AaldReport aald_check(const ProjectiveCurve& f, const std::vector<std::vector<Complex>>& normals,
                             const std::vector<double>& r_grid) {
  check_grid(r_grid);
  if (normals.empty()) throw DomainError("no hyperplanes given");
  std::vector<std::vector<GaussRational>> exact;
  for (const auto& a : normals) {
    if (static_cast<int>(a.size()) != f.n() + 1) throw DomainError("hyperplane normal has the wrong length");
    exact.push_back(detail::exact_normal(a));
  }
  SubschemeOnPn z = SubschemeOnPn::hyperplanes(exact);
  PulledBack pb(f, z);
  JetMetricTerm jet(f);
  std::vector<std::vector<CPoly>> contracted;
  for (const auto& a : exact) {
    std::vector<CPoly> c;
    for (const auto& q : detail::contracted_first_derived(f, a)) c.push_back(to_cpoly(exact_quotient(q, f.level_gcd(1))));
    contracted.push_back(std::move(c));
  }
  // a point of P^1 has empty first jet; min_j over one hyperplane is then identically 0
  const bool empty_jet = (f.n() == 1);
  auto jet_lambda = [&](Complex z) {
    double q2 = jet.reduced_norm2(z);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& c : contracted) {
      double c2 = 0.0;
      for (const auto& p : c) c2 += std::norm(p.eval(z));
      best = std::min(best, -0.5 * std::log(c2 / q2));
    }
    return best;
  };
  AaldReport rep;
  std::vector<double> res;
  for (double r : r_grid) {
    double mz = proximity(pb, r).value;
    double jm = jet.value(r);
    double mj = empty_jet ? 0.0 : circle_average([&](double t) { return jet_lambda(std::polar(r, t)); }, proximity_spec()).value;
    rep.rows.push_back({r, mz, jm, mj, mz + jm - mj});
    res.push_back(mz + jm - mj);
  }
  rep.stats = excess_stats(r_grid, res);
  return rep;
}

// ---------------------------------------------------------------------------
// Borel's calculus lemma
// ---------------------------------------------------------------------------

/// Measure of {r : h'(r) > h(r)^{1+delta}} for h sampled on a uniform grid,
/// by the trapezoid rule on the indicator. h' uses second order differences,
/// one-sided at the ends.
inline double exceptional_measure(const std::vector<double>& r, const std::vector<double>& h, double delta) {
  if (r.size() != h.size() || r.size() < 2) throw DomainError("need at least two samples");
  for (std::size_t i = 1; i < h.size(); ++i) {
    if (h[i] < h[i - 1]) throw DomainError("h must be nondecreasing");
    if (!(r[i] > r[i - 1])) throw DomainError("grid must be increasing");
  }
  const std::size_t n = h.size();
  std::vector<double> ind(n);
  for (std::size_t i = 0; i < n; ++i) {
    double d;
    if (i == 0) {
      d = n >= 3 ? (-3.0 * h[0] + 4.0 * h[1] - h[2]) / (r[2] - r[0]) : (h[1] - h[0]) / (r[1] - r[0]);
    } else if (i + 1 == n) {
      d = n >= 3 ? (3.0 * h[n - 1] - 4.0 * h[n - 2] + h[n - 3]) / (r[n - 1] - r[n - 3])
                 : (h[n - 1] - h[n - 2]) / (r[n - 1] - r[n - 2]);
    } else {
      d = (h[i + 1] - h[i - 1]) / (r[i + 1] - r[i - 1]);
    }
    ind[i] = d > std::pow(h[i], 1.0 + delta) ? 1.0 : 0.0;
  }
  double m = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) m += 0.5 * (ind[i] + ind[i + 1]) * (r[i + 1] - r[i]);
  return m;
}

} // namespace valdist
