#pragma once

#include <gmpxx.h>

#include <cmath>
#include <complex>
#include <ostream>
#include <string>

#include "valdist/errors.hpp"

namespace valdist {

using Complex = std::complex<double>;
using Rational = mpq_class;

/// Exact value of a finite double as a rational.
inline Rational rational_from_double(double x) {
  if (!std::isfinite(x)) {
    throw DomainError("cannot convert a non-finite double to a rational");
  }
  Rational q(x);
  q.canonicalize();
  return q;
}

inline Rational make_rational(long num, long den = 1) {
  if (den == 0) {
    throw DomainError("rational with zero denominator");
  }
  Rational q(num, den);
  q.canonicalize();
  return q;
}

/// Gaussian rational re + i*im with exact arithmetic.
struct GaussRational {
  Rational re{0};
  Rational im{0};

  GaussRational() = default;
  GaussRational(long v) : re(v), im(0) {} // NOLINT(google-explicit-constructor)
  GaussRational(Rational r) : re(std::move(r)), im(0) {} // NOLINT
  GaussRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

  static GaussRational from_complex(Complex z) {
    return {rational_from_double(z.real()), rational_from_double(z.imag())};
  }

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
  bool is_real() const { return sgn(im) == 0; }

  Complex to_complex() const { return {re.get_d(), im.get_d()}; }
  Rational norm() const { return re * re + im * im; }
  GaussRational conj() const { return {re, -im}; }

  GaussRational inverse() const {
    Rational n = norm();
    if (sgn(n) == 0) {
      throw DomainError("division by zero Gaussian rational");
    }
    Rational r = re / n;
    Rational i = -im / n;
    return {r, i};
  }

  GaussRational operator-() const { return {-re, -im}; }

  GaussRational& operator+=(const GaussRational& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  GaussRational& operator-=(const GaussRational& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  GaussRational& operator*=(const GaussRational& o) {
    if (o.is_real() && is_real()) {
      re *= o.re;
      return *this;
    }
    Rational r = re * o.re - im * o.im;
    Rational i = re * o.im + im * o.re;
    re = std::move(r);
    im = std::move(i);
    return *this;
  }
  GaussRational& operator/=(const GaussRational& o) {
    if (o.is_real()) {
      if (sgn(o.re) == 0) {
        throw DomainError("division by zero Gaussian rational");
      }
      re /= o.re;
      im /= o.re;
      return *this;
    }
    return *this *= o.inverse();
  }

  friend GaussRational operator+(GaussRational a, const GaussRational& b) { return a += b; }
  friend GaussRational operator-(GaussRational a, const GaussRational& b) { return a -= b; }
  friend GaussRational operator*(GaussRational a, const GaussRational& b) { return a *= b; }
  friend GaussRational operator/(GaussRational a, const GaussRational& b) { return a /= b; }
  friend bool operator==(const GaussRational& a, const GaussRational& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator!=(const GaussRational& a, const GaussRational& b) { return !(a == b); }

  std::string str() const {
    if (is_real()) {
      return re.get_str();
    }
    return "(" + re.get_str() + (sgn(im) < 0 ? "-" : "+") + Rational(abs(im)).get_str() + "i)";
  }
  friend std::ostream& operator<<(std::ostream& os, const GaussRational& g) { return os << g.str(); }
};

/// Uniform access to the coefficient rings used by the polynomial templates.
template <typename T>
struct CoeffTraits;

template <>
struct CoeffTraits<Rational> {
  static constexpr bool exact = true;
  static bool is_zero(const Rational& v) { return sgn(v) == 0; }
  static Rational zero() { return Rational(0); }
  static Rational one() { return Rational(1); }
  static Complex to_complex(const Rational& v) { return {v.get_d(), 0.0}; }
  static Rational from_long(long v) { return Rational(v); }
  static Rational inverse(const Rational& v) {
    if (sgn(v) == 0) throw DomainError("division by zero rational");
    return Rational(1) / v;
  }
  static std::string str(const Rational& v) { return v.get_str(); }
};

template <>
struct CoeffTraits<GaussRational> {
  static constexpr bool exact = true;
  static bool is_zero(const GaussRational& v) { return v.is_zero(); }
  static GaussRational zero() { return {}; }
  static GaussRational one() { return GaussRational(1); }
  static Complex to_complex(const GaussRational& v) { return v.to_complex(); }
  static GaussRational from_long(long v) { return GaussRational(v); }
  static GaussRational inverse(const GaussRational& v) { return v.inverse(); }
  static std::string str(const GaussRational& v) { return v.str(); }
};

template <>
struct CoeffTraits<Complex> {
  static constexpr bool exact = false;
  static bool is_zero(const Complex& v) { return v == Complex(0.0, 0.0); }
  static Complex zero() { return {0.0, 0.0}; }
  static Complex one() { return {1.0, 0.0}; }
  static Complex to_complex(const Complex& v) { return v; }
  static Complex from_long(long v) { return {static_cast<double>(v), 0.0}; }
  static Complex inverse(const Complex& v) {
    if (v == Complex(0.0, 0.0)) throw DomainError("division by zero complex");
    return Complex(1.0, 0.0) / v;
  }
  static std::string str(const Complex& v) {
    return "(" + std::to_string(v.real()) + "," + std::to_string(v.imag()) + ")";
  }
};

} // namespace valdist
