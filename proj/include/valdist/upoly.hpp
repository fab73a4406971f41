#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "valdist/errors.hpp"
#include "valdist/rational.hpp"

namespace valdist {

/// Dense univariate polynomial with ascending coefficients.
///
/// The coefficient vector is always trimmed, so the leading coefficient is
/// nonzero and the zero polynomial has an empty vector and degree -1.
template <typename T>
class UPoly {
public:
  using Traits = CoeffTraits<T>;

  UPoly() = default;
  explicit UPoly(std::vector<T> coeffs) : c_(std::move(coeffs)) { trim(); }
  UPoly(std::initializer_list<T> coeffs) : c_(coeffs) { trim(); }

  static UPoly constant(T v) { return UPoly(std::vector<T>{std::move(v)}); }
  static UPoly monomial(T v, int deg) {
    std::vector<T> c(static_cast<std::size_t>(deg) + 1, Traits::zero());
    c.back() = std::move(v);
    return UPoly(std::move(c));
  }
  /// The polynomial z - a.
  static UPoly linear_root(const T& a) { return UPoly({-a, Traits::one()}); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<T>& coeffs() const { return c_; }
  T coeff(int i) const {
    if (i < 0 || i >= static_cast<int>(c_.size())) return Traits::zero();
    return c_[static_cast<std::size_t>(i)];
  }
  const T& leading() const {
    if (c_.empty()) throw DomainError("leading coefficient of the zero polynomial");
    return c_.back();
  }

  /// Order of vanishing at 0 (number of trailing zero coefficients).
  int order_at_zero() const {
    if (c_.empty()) throw DomainError("order of vanishing of the zero polynomial");
    int k = 0;
    while (Traits::is_zero(c_[static_cast<std::size_t>(k)])) ++k;
    return k;
  }

  UPoly operator-() const {
    UPoly r = *this;
    for (auto& v : r.c_) v = -v;
    return r;
  }
  UPoly& operator+=(const UPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Traits::zero());
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
  }
  UPoly& operator-=(const UPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Traits::zero());
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    trim();
    return *this;
  }
  friend UPoly operator+(UPoly a, const UPoly& b) { return a += b; }
  friend UPoly operator-(UPoly a, const UPoly& b) { return a -= b; }
  friend UPoly operator*(const UPoly& a, const UPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<T> r(a.c_.size() + b.c_.size() - 1, Traits::zero());
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (Traits::is_zero(a.c_[i])) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    }
    return UPoly(std::move(r));
  }
  UPoly& operator*=(const UPoly& o) { return *this = *this * o; }
  friend UPoly operator*(const T& s, UPoly p) {
    for (auto& v : p.c_) v *= s;
    p.trim();
    return p;
  }
  friend bool operator==(const UPoly& a, const UPoly& b) { return a.c_ == b.c_; }
  friend bool operator!=(const UPoly& a, const UPoly& b) { return !(a == b); }

  UPoly derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<T> r(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) r[i - 1] = c_[i] * Traits::from_long(static_cast<long>(i));
    return UPoly(std::move(r));
  }

  UPoly pow(int e) const {
    if (e < 0) throw DomainError("negative polynomial power");
    UPoly r = constant(Traits::one());
    for (int i = 0; i < e; ++i) r *= *this;
    return r;
  }

  /// Horner evaluation in the coefficient ring.
  T operator()(const T& z) const {
    T acc = Traits::zero();
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
      acc *= z;
      acc += *it;
    }
    return acc;
  }

  /// Floating evaluation regardless of the coefficient ring.
  Complex eval(Complex z) const {
    Complex acc(0.0, 0.0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + Traits::to_complex(*it);
    return acc;
  }

  /// p(q(z)).
  UPoly compose(const UPoly& q) const {
    UPoly acc;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
      acc = acc * q;
      acc += constant(*it);
    }
    return acc;
  }

  /// p(z + a), i.e. the Taylor expansion of p around a.
  UPoly shift(const T& a) const { return compose(UPoly({a, Traits::one()})); }

  /// Long division; for floating rings the remainder is not trimmed to a tolerance.
  std::pair<UPoly, UPoly> divmod(const UPoly& d) const {
    if (d.is_zero()) throw DomainError("polynomial division by zero");
    if (degree() < d.degree()) return {UPoly{}, *this};
    std::vector<T> rem = c_;
    std::vector<T> quo(c_.size() - d.c_.size() + 1, Traits::zero());
    T inv_lead = Traits::inverse(d.leading());
    for (int i = static_cast<int>(rem.size()) - 1; i >= d.degree(); --i) {
      T q = rem[static_cast<std::size_t>(i)] * inv_lead;
      quo[static_cast<std::size_t>(i - d.degree())] = q;
      if (Traits::is_zero(q)) continue;
      for (int j = 0; j <= d.degree(); ++j) {
        rem[static_cast<std::size_t>(i - d.degree() + j)] -= q * d.c_[static_cast<std::size_t>(j)];
      }
      rem[static_cast<std::size_t>(i)] = Traits::zero();
    }
    rem.resize(static_cast<std::size_t>(d.degree()));
    return {UPoly(std::move(quo)), UPoly(std::move(rem))};
  }

  UPoly monic() const {
    if (is_zero()) return {};
    return Traits::inverse(leading()) * *this;
  }

  /// Largest coefficient magnitude.
  double max_abs_coeff() const {
    double m = 0.0;
    for (const auto& v : c_) m = std::max(m, std::abs(Traits::to_complex(v)));
    return m;
  }

  /// Componentwise conversion to another ring.
  template <typename U, typename F>
  UPoly<U> map(F&& f) const {
    std::vector<U> r;
    r.reserve(c_.size());
    for (const auto& v : c_) r.push_back(f(v));
    return UPoly<U>(std::move(r));
  }

  std::string str(const std::string& var = "z") const {
    if (c_.empty()) return "0";
    std::string out;
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (Traits::is_zero(c_[i])) continue;
      if (!out.empty()) out += " + ";
      out += Traits::str(c_[i]);
      if (i > 0) out += "*" + var + (i > 1 ? "^" + std::to_string(i) : "");
    }
    return out;
  }

private:
  void trim() {
    while (!c_.empty() && Traits::is_zero(c_.back())) c_.pop_back();
  }

  std::vector<T> c_;
};

using CPoly = UPoly<Complex>;
using QPoly = UPoly<GaussRational>;

inline CPoly to_cpoly(const QPoly& p) {
  return p.map<Complex>([](const GaussRational& g) { return g.to_complex(); });
}

inline QPoly to_qpoly(const CPoly& p) {
  return p.map<GaussRational>([](const Complex& z) { return GaussRational::from_complex(z); });
}

/// Monic gcd by exact Euclid.
template <typename T>
  requires CoeffTraits<T>::exact
UPoly<T> poly_gcd(UPoly<T> a, UPoly<T> b) {
  if (a.is_zero() && b.is_zero()) throw DomainError("gcd of two zero polynomials");
  while (!b.is_zero()) {
    auto r = a.divmod(b).second;
    a = std::move(b);
    b = r.monic();
  }
  return a.monic();
}

namespace detail {

inline CPoly trim_relative(const CPoly& p, double threshold) {
  std::vector<Complex> c = p.coeffs();
  for (auto& v : c) {
    if (std::abs(v) <= threshold) v = Complex(0.0, 0.0);
  }
  return CPoly(std::move(c));
}

inline CPoly normalized(const CPoly& p) {
  double m = p.max_abs_coeff();
  if (m == 0.0) return p;
  return Complex(1.0 / m, 0.0) * p;
}

} // namespace detail

/// Approximate monic gcd: Euclid on sup-normalized remainders, where a
/// remainder whose coefficients all fall below `tol` counts as zero.
inline CPoly poly_gcd(CPoly a, CPoly b, double tol) {
  if (a.is_zero() && b.is_zero()) throw DomainError("gcd of two zero polynomials");
  a = detail::normalized(a);
  b = detail::normalized(b);
  if (a.degree() < b.degree()) std::swap(a, b);
  while (!b.is_zero()) {
    if (b.degree() == 0) return CPoly::constant(Complex(1.0, 0.0));
    auto r = a.divmod(b).second;
    // a and b have unit sup norm, so tol is relative to the dividend
    r = detail::trim_relative(r, tol);
    a = std::move(b);
    b = detail::normalized(r);
  }
  return a.monic();
}

/// Exact quotient p / d, discarding the (tiny or zero) remainder.
template <typename T>
UPoly<T> exact_quotient(const UPoly<T>& p, const UPoly<T>& d) {
  return p.divmod(d).first;
}

/// Square-free factorization by Yun's algorithm: returns (factor, multiplicity)
/// pairs with nonconstant monic factors such that p = lead * prod factor^mult.
template <typename T>
  requires CoeffTraits<T>::exact
std::vector<std::pair<UPoly<T>, int>> square_free_factors(const UPoly<T>& p) {
  if (p.is_zero()) throw DomainError("square-free factorization of the zero polynomial");
  std::vector<std::pair<UPoly<T>, int>> out;
  if (p.degree() == 0) return out;
  UPoly<T> pm = p.monic();
  UPoly<T> dp = pm.derivative();
  UPoly<T> a = poly_gcd(pm, dp);
  UPoly<T> b = exact_quotient(pm, a);
  UPoly<T> c = exact_quotient(dp, a);
  UPoly<T> d = c - b.derivative();
  int i = 1;
  while (b.degree() > 0) {
    UPoly<T> ai = d.is_zero() ? b : poly_gcd(b, d);
    if (ai.degree() > 0) out.emplace_back(ai.monic(), i);
    UPoly<T> nb = exact_quotient(b, ai);
    c = exact_quotient(d, ai);
    b = nb;
    d = c - b.derivative();
    ++i;
  }
  return out;
}

inline std::vector<std::pair<CPoly, int>> square_free_factors(const CPoly& p, double tol) {
  if (p.is_zero()) throw DomainError("square-free factorization of the zero polynomial");
  std::vector<std::pair<CPoly, int>> out;
  if (p.degree() == 0) return out;
  CPoly pm = p.monic();
  CPoly dp = pm.derivative();
  CPoly a = poly_gcd(pm, dp, tol);
  CPoly b = exact_quotient(pm, a);
  CPoly c = exact_quotient(dp, a);
  CPoly d = detail::trim_relative(c - b.derivative(), tol * std::max(1.0, c.max_abs_coeff()));
  int i = 1;
  while (b.degree() > 0) {
    CPoly ai = d.is_zero() ? b.monic() : poly_gcd(b, d, tol);
    if (ai.degree() > 0) out.emplace_back(ai, i);
    CPoly nb = exact_quotient(b, ai);
    c = exact_quotient(d, ai);
    b = nb;
    d = detail::trim_relative(c - b.derivative(), tol * std::max(1.0, c.max_abs_coeff()));
    ++i;
    if (i > p.degree() + 1) break;
  }
  return out;
}

} // namespace valdist
