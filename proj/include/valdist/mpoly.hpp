#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "valdist/errors.hpp"
#include "valdist/rational.hpp"

namespace valdist {

/// Variable names for multivariate polynomials.
///
/// Variables are the jet coordinates x_j^(l) for base index j < nbase and
/// derivative order l <= max_order. Plain (non-jet) polynomials simply never
/// touch orders above zero. Variable id = l * nbase + j.
class VarRegistry {
public:
  VarRegistry(std::vector<std::string> base_names, int max_order = 0)
      : names_(std::move(base_names)), max_order_(max_order) {
    if (names_.empty()) throw DomainError("variable registry needs at least one variable");
    if (max_order_ < 0) throw DomainError("negative maximal jet order");
  }

  static std::shared_ptr<const VarRegistry> make(std::vector<std::string> names, int max_order = 0) {
    return std::make_shared<const VarRegistry>(std::move(names), max_order);
  }

  /// x_0..x_{n-1}
  static std::shared_ptr<const VarRegistry> indexed(int n, int max_order = 0, const std::string& stem = "x") {
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) names.push_back(stem + std::to_string(i));
    return make(std::move(names), max_order);
  }

  int nbase() const { return static_cast<int>(names_.size()); }
  int max_order() const { return max_order_; }
  int size() const { return nbase() * (max_order_ + 1); }
  int id(int j, int order = 0) const {
    if (j < 0 || j >= nbase()) throw DomainError("variable index out of range");
    if (order < 0 || order > max_order_) throw DomainError("jet order exceeds the configured maximum");
    return order * nbase() + j;
  }
  int base_of(int id) const { return id % nbase(); }
  int order_of(int id) const { return id / nbase(); }

  std::string name(int id) const {
    int l = order_of(id);
    const std::string& b = names_[static_cast<std::size_t>(base_of(id))];
    return l == 0 ? b : b + "^(" + std::to_string(l) + ")";
  }

  bool same_as(const VarRegistry& o) const { return names_ == o.names_ && max_order_ == o.max_order_; }

private:
  std::vector<std::string> names_;
  int max_order_;
};

using RegistryPtr = std::shared_ptr<const VarRegistry>;

/// Dense exponent vector indexed by variable id.
using Monomial = std::vector<int>;

inline int total_degree(const Monomial& m) {
  int s = 0;
  for (int e : m) s += e;
  return s;
}

/// Graded lexicographic order, largest first when used as a map comparator.
struct GrlexGreater {
  bool operator()(const Monomial& a, const Monomial& b) const {
    int da = total_degree(a), db = total_degree(b);
    if (da != db) return da > db;
    return a > b;
  }
};

template <typename C>
class MPoly {
public:
  using Traits = CoeffTraits<C>;
  using TermMap = std::map<Monomial, C, GrlexGreater>;

  MPoly() = default;
  explicit MPoly(RegistryPtr reg) : reg_(std::move(reg)) {}

  static MPoly constant(RegistryPtr reg, const C& c) {
    MPoly p(reg);
    if (!Traits::is_zero(c)) p.terms_.emplace(Monomial(static_cast<std::size_t>(reg->size()), 0), c);
    return p;
  }
  static MPoly variable(RegistryPtr reg, int j, int order = 0) {
    MPoly p(reg);
    Monomial m(static_cast<std::size_t>(reg->size()), 0);
    m[static_cast<std::size_t>(reg->id(j, order))] = 1;
    p.terms_.emplace(std::move(m), Traits::one());
    return p;
  }
  static MPoly term(RegistryPtr reg, Monomial m, const C& c) {
    if (static_cast<int>(m.size()) != reg->size()) throw DomainError("monomial length does not match registry");
    MPoly p(reg);
    if (!Traits::is_zero(c)) p.terms_.emplace(std::move(m), c);
    return p;
  }

  const RegistryPtr& registry() const { return reg_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && total_degree(terms_.begin()->first) == 0);
  }
  C constant_term() const {
    if (terms_.empty()) return Traits::zero();
    auto it = terms_.find(Monomial(static_cast<std::size_t>(reg_->size()), 0));
    return it == terms_.end() ? Traits::zero() : it->second;
  }

  /// Leading term in grlex order.
  const std::pair<const Monomial, C>& leading_term() const {
    if (terms_.empty()) throw DomainError("leading term of the zero polynomial");
    return *terms_.begin();
  }

  int degree() const {
    if (terms_.empty()) return -1;
    return total_degree(terms_.begin()->first);
  }

  bool is_homogeneous() const {
    if (terms_.empty()) return true;
    int d = degree();
    return std::all_of(terms_.begin(), terms_.end(), [d](const auto& t) { return total_degree(t.first) == d; });
  }

  /// Largest jet order of any variable that occurs.
  int max_jet_order() const {
    int best = 0;
    for (const auto& [m, c] : terms_) {
      for (std::size_t v = 0; v < m.size(); ++v) {
        if (m[v] != 0) best = std::max(best, reg_->order_of(static_cast<int>(v)));
      }
    }
    return best;
  }

  MPoly operator-() const {
    MPoly r = *this;
    for (auto& [m, c] : r.terms_) c = -c;
    return r;
  }
  MPoly& operator+=(const MPoly& o) {
    adopt(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  MPoly& operator-=(const MPoly& o) {
    adopt(o);
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  friend MPoly operator+(MPoly a, const MPoly& b) { return a += b; }
  friend MPoly operator-(MPoly a, const MPoly& b) { return a -= b; }

  friend MPoly operator*(const MPoly& a, const MPoly& b) {
    MPoly r(check_compatible(a, b));
    if (a.is_zero() || b.is_zero()) return r;
    Monomial m;
    for (const auto& [ma, ca] : a.terms_) {
      for (const auto& [mb, cb] : b.terms_) {
        m = ma;
        for (std::size_t v = 0; v < m.size(); ++v) m[v] += mb[v];
        r.add_term(m, ca * cb);
      }
    }
    return r;
  }
  MPoly& operator*=(const MPoly& o) { return *this = *this * o; }

  friend MPoly operator*(const C& s, MPoly p) {
    if (Traits::is_zero(s)) {
      p.terms_.clear();
      return p;
    }
    for (auto& [m, c] : p.terms_) c *= s;
    return p;
  }

  MPoly pow(int e) const {
    if (e < 0) throw DomainError("negative polynomial power");
    MPoly r = constant(reg_, Traits::one());
    MPoly base = *this;
    while (e > 0) {
      if (e & 1) r *= base;
      e >>= 1;
      if (e > 0) base *= base;
    }
    return r;
  }

  friend bool operator==(const MPoly& a, const MPoly& b) {
    check_compatible(a, b);
    return a.terms_ == b.terms_;
  }
  friend bool operator!=(const MPoly& a, const MPoly& b) { return !(a == b); }

  /// Partial derivative with respect to a variable id.
  MPoly partial(int var) const {
    MPoly r(reg_);
    auto v = static_cast<std::size_t>(var);
    for (const auto& [m, c] : terms_) {
      if (m[v] == 0) continue;
      Monomial mm = m;
      C cc = c * Traits::from_long(mm[v]);
      mm[v] -= 1;
      r.add_term(mm, cc);
    }
    return r;
  }

  /// Evaluate into any commutative ring R given images of all variables.
  /// `lift` maps a coefficient into R.
  template <typename R, typename Lift>
  R evaluate(const std::vector<R>& values, const R& one, Lift&& lift) const {
    if (static_cast<int>(values.size()) < reg_->size()) throw DomainError("too few values for evaluation");
    R acc = one - one;
    for (const auto& [m, c] : terms_) {
      R t = lift(c);
      for (std::size_t v = 0; v < m.size(); ++v) {
        for (int e = 0; e < m[v]; ++e) t = t * values[v];
      }
      acc = acc + t;
    }
    return acc;
  }

  /// Floating evaluation; values indexed by variable id.
  Complex eval(const std::vector<Complex>& values) const {
    return evaluate<Complex>(values, Complex(1.0, 0.0), [](const C& c) { return Traits::to_complex(c); });
  }

  /// Substitute every variable by a polynomial (possibly over another registry).
  MPoly substitute(const std::vector<MPoly>& images, RegistryPtr target) const {
    MPoly one = constant(target, Traits::one());
    MPoly acc(target);
    std::vector<std::vector<MPoly>> powers(images.size());
    for (const auto& [m, c] : terms_) {
      MPoly t = constant(target, c);
      for (std::size_t v = 0; v < m.size(); ++v) {
        if (m[v] == 0) continue;
        auto& pw = powers[v];
        if (pw.empty()) pw.push_back(one);
        while (static_cast<int>(pw.size()) <= m[v]) pw.push_back(pw.back() * images[v]);
        t *= pw[static_cast<std::size_t>(m[v])];
      }
      acc += t;
    }
    return acc;
  }

  /// Leading coefficient set to one (for comparison up to scalars).
  MPoly normalized() const {
    if (is_zero()) return *this;
    return Traits::inverse(leading_term().second) * *this;
  }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
      if (!first) os << " + ";
      first = false;
      os << Traits::str(c);
      for (std::size_t v = 0; v < m.size(); ++v) {
        if (m[v] == 0) continue;
        os << "*" << reg_->name(static_cast<int>(v));
        if (m[v] > 1) os << "^" << m[v];
      }
    }
    return os.str();
  }

  void add_term(const Monomial& m, const C& c) {
    if (Traits::is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (Traits::is_zero(it->second)) terms_.erase(it);
    }
  }

  static const RegistryPtr& check_compatible(const MPoly& a, const MPoly& b) {
    if (!a.reg_ || !b.reg_) throw RegistryMismatch("polynomial without a variable registry");
    if (a.reg_ != b.reg_ && !a.reg_->same_as(*b.reg_)) {
      throw RegistryMismatch("polynomials live over different variable registries");
    }
    return a.reg_;
  }

private:
  void adopt(const MPoly& o) {
    if (!reg_) {
      reg_ = o.reg_;
      return;
    }
    check_compatible(*this, o);
  }

  RegistryPtr reg_;
  TermMap terms_;
};

/// Exact quotient p / q, or nothing when q does not divide p.
template <typename C>
std::optional<MPoly<C>> try_divide_exact(const MPoly<C>& p, const MPoly<C>& q) {
  if (q.is_zero()) throw DomainError("division by the zero polynomial");
  const auto& reg = MPoly<C>::check_compatible(p, q);
  MPoly<C> rem = p;
  MPoly<C> quo(reg);
  const auto& [lq, cq] = q.leading_term();
  C inv = CoeffTraits<C>::inverse(cq);
  while (!rem.is_zero()) {
    const auto& [lr, cr] = rem.leading_term();
    Monomial m = lr;
    for (std::size_t v = 0; v < m.size(); ++v) {
      m[v] -= lq[v];
      if (m[v] < 0) return std::nullopt;
    }
    auto t = MPoly<C>::term(reg, m, cr * inv);
    quo += t;
    rem -= t * q;
  }
  return quo;
}

/// Exact quotient p / q; throws when q does not divide p.
template <typename C>
MPoly<C> divide_exact(const MPoly<C>& p, const MPoly<C>& q) {
  auto r = try_divide_exact(p, q);
  if (!r) throw DomainError("polynomial is not exactly divisible");
  return *std::move(r);
}

using QMPoly = MPoly<Rational>;
using GMPoly = MPoly<GaussRational>;

} // namespace valdist
