#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <vector>

#include "valdist/errors.hpp"

namespace valdist {

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

/// Gauss-Legendre rule of the given order (Newton on the Legendre recurrence).
inline const GaussRule& gauss_legendre(int order) {
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;
  if (order < 1) throw DomainError("Gauss-Legendre order must be positive");
  GaussRule rule;
  rule.nodes.resize(static_cast<std::size_t>(order));
  rule.weights.resize(static_cast<std::size_t>(order));
  const int n = order;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[static_cast<std::size_t>(i)] = -x;
    rule.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    rule.weights[static_cast<std::size_t>(i)] = w;
    rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
  return cache.emplace(order, std::move(rule)).first->second;
}

struct QuadratureSpec {
  int order = 64;            // Gauss-Legendre points per panel
  int initial_panels = 32;
  int max_depth = 20;
  double abs_tol = 1e-11;
  double rel_tol = 1e-11;
  // Panels whose integrand exceeds spike_cap are bisected even if the
  // two-level error estimate already looks converged, up to spike_depth.
  double spike_cap = INFINITY;
  int spike_depth = 6;
};

/// Lighter defaults for nested (two-dimensional) integrals.
inline QuadratureSpec disk_spec() {
  QuadratureSpec s;
  s.order = 16;
  s.initial_panels = 4;
  s.max_depth = 24;
  s.abs_tol = 1e-12;
  s.rel_tol = 1e-10;
  return s;
}

/// Settings for circle averages of Weil functions, which blow up
/// logarithmically where the curve meets the target.
inline QuadratureSpec proximity_spec() {
  QuadratureSpec s;
  s.spike_cap = 20.0;
  return s;
}

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  long evaluations = 0;
  bool depth_capped = false;
};

namespace detail {

template <typename F>
double gl_panel(F& f, double a, double b, const GaussRule& rule, double& maxval, long& evals) {
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  double s = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    double v = f(mid + half * rule.nodes[i]);
    maxval = std::max(maxval, v);
    s += rule.weights[i] * v;
  }
  evals += static_cast<long>(rule.nodes.size());
  return s * half;
}

} // namespace detail

/// Composite Gauss-Legendre with adaptive bisection. A panel is accepted
/// when its estimate agrees with the sum over its two halves to within its
/// share of the tolerance.
template <typename F>
QuadResult integrate_adaptive(F&& f, double a, double b, const QuadratureSpec& spec = {}) {
  QuadResult res;
  if (a == b) return res;
  const GaussRule& rule = gauss_legendre(spec.order);
  const double total = b - a;

  struct Panel {
    double a, b, estimate, maxval;
    int depth;
  };
  std::vector<Panel> stack;
  const double w0 = total / spec.initial_panels;
  for (int i = spec.initial_panels - 1; i >= 0; --i) {
    double pa = a + i * w0, pb = (i + 1 == spec.initial_panels) ? b : a + (i + 1) * w0;
    double mx = -INFINITY;
    double est = detail::gl_panel(f, pa, pb, rule, mx, res.evaluations);
    stack.push_back({pa, pb, est, mx, 0});
  }
  // a cheap global scale for the relative tolerance
  double scale = 0.0;
  for (const auto& p : stack) scale += std::abs(p.estimate);

  while (!stack.empty()) {
    Panel p = stack.back();
    stack.pop_back();
    double m = 0.5 * (p.a + p.b);
    double mxl = -INFINITY, mxr = -INFINITY;
    double left = detail::gl_panel(f, p.a, m, rule, mxl, res.evaluations);
    double right = detail::gl_panel(f, m, p.b, rule, mxr, res.evaluations);
    double refined = left + right;
    double err = std::abs(refined - p.estimate);
    double share = (p.b - p.a) / total;
    double tol = std::max(spec.abs_tol, spec.rel_tol * scale) * share;
    if (!std::isfinite(refined)) throw ConvergenceError("non-finite integrand value in quadrature");
    bool spike = p.maxval > spec.spike_cap && p.depth < spec.spike_depth;
    if ((err <= tol && !spike) || p.depth >= spec.max_depth) {
      if (err > tol) res.depth_capped = true;
      res.value += refined;
      res.error += err;
      continue;
    }
    stack.push_back({m, p.b, right, mxr, p.depth + 1});
    stack.push_back({p.a, m, left, mxl, p.depth + 1});
  }
  return res;
}

/// Fixed Gauss-Legendre on [0, 1] with panels graded geometrically toward 0
/// ([0, 2^-levels], ..., [1/4, 1/2]) and `top_panels` equal panels on [1/2, 1].
/// Handles integrable endpoint singularities such as log u at 0.
template <typename F>
double integrate_graded01(F&& f, int levels, int top_panels, int order) {
  const GaussRule& rule = gauss_legendre(order);
  double mx = -INFINITY, s = 0.0;
  long evals = 0;
  double lo = std::ldexp(1.0, -levels);
  s += detail::gl_panel(f, 0.0, lo, rule, mx, evals);
  for (int k = levels; k > 1; --k) {
    s += detail::gl_panel(f, lo, 2.0 * lo, rule, mx, evals);
    lo *= 2.0;
  }
  const double w = 0.5 / top_panels;
  for (int i = 0; i < top_panels; ++i) s += detail::gl_panel(f, 0.5 + i * w, 0.5 + (i + 1) * w, rule, mx, evals);
  return s;
}

/// (1/2pi) * integral over [0, 2pi] of g(theta).
template <typename G>
QuadResult circle_average(G&& g, const QuadratureSpec& spec = {}) {
  QuadResult r = integrate_adaptive(g, 0.0, 2.0 * std::numbers::pi, spec);
  r.value /= 2.0 * std::numbers::pi;
  r.error /= 2.0 * std::numbers::pi;
  return r;
}

/// Mean of a smooth periodic function by the trapezoid rule, doubling the
/// number of nodes until two successive means agree.
template <typename G>
QuadResult periodic_mean(G&& g, int n0 = 64, double tol = 1e-11, int max_nodes = 1 << 16) {
  QuadResult res;
  int n = n0;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += g(2.0 * std::numbers::pi * i / n);
  res.evaluations = n;
  double mean = sum / n;
  while (n < max_nodes) {
    double extra = 0.0;
    for (int i = 0; i < n; ++i) extra += g(2.0 * std::numbers::pi * (i + 0.5) / n);
    res.evaluations += n;
    sum += extra;
    n *= 2;
    double next = sum / n;
    double err = std::abs(next - mean);
    mean = next;
    if (err <= tol * std::max(1.0, std::abs(mean))) {
      res.value = mean;
      res.error = err;
      return res;
    }
  }
  res.value = mean;
  res.error = INFINITY;
  res.depth_capped = true;
  return res;
}

} // namespace valdist
