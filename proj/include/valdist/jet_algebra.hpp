#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "valdist/det.hpp"
#include "valdist/errors.hpp"
#include "valdist/mpoly.hpp"
#include "valdist/rational.hpp"

namespace valdist {

// Jet polynomials live in the variables x_j^(l) of a VarRegistry whose
// max_order is the jet order. Base sections are the order-0 polynomials.
using JetPoly = QMPoly;

inline RegistryPtr jet_registry(int nbase, int max_order = 6, const std::string& stem = "x") {
  return VarRegistry::indexed(nbase, max_order, stem);
}

inline RegistryPtr jet_registry(std::vector<std::string> names, int max_order = 6) {
  return VarRegistry::make(std::move(names), max_order);
}

/// Re-expresses a polynomial over a registry with the same base names and a
/// larger jet order.
inline JetPoly lift_to(const JetPoly& p, const RegistryPtr& target) {
  const auto& src = p.registry();
  if (src->nbase() != target->nbase() || src->max_order() > target->max_order()) {
    throw RegistryMismatch("cannot lift polynomial into the requested jet registry");
  }
  std::vector<JetPoly> images;
  for (int v = 0; v < src->size(); ++v) images.push_back(JetPoly::variable(target, src->base_of(v), src->order_of(v)));
  return p.substitute(images, target);
}

/// sum over orders l of l * (number of order-l factors) in one monomial.
inline int weight_of(const RegistryPtr& reg, const Monomial& m) {
  int w = 0;
  for (std::size_t v = 0; v < m.size(); ++v) w += reg->order_of(static_cast<int>(v)) * m[v];
  return w;
}

/// Exponent profile l_1, ..., l_K of a monomial: l_i counts factors of order i
/// summed over all coordinates. Entry 0 counts the order-0 factors.
inline std::vector<int> order_profile(const RegistryPtr& reg, const Monomial& m) {
  std::vector<int> ell(static_cast<std::size_t>(reg->max_order() + 1), 0);
  for (std::size_t v = 0; v < m.size(); ++v) ell[static_cast<std::size_t>(reg->order_of(static_cast<int>(v)))] += m[v];
  return ell;
}

/// |l|_s = l_1 + 2 l_2 + ... + s l_s
inline int partial_weight(const std::vector<int>& ell, int s) {
  int w = 0;
  for (int i = 1; i <= s && i < static_cast<int>(ell.size()); ++i) w += i * ell[static_cast<std::size_t>(i)];
  return w;
}

/// |l|_{>s} = l_{s+1} + 2 l_{s+2} + ...
inline int weight_above(const std::vector<int>& ell, int s) {
  int w = 0;
  for (int i = s + 1; i < static_cast<int>(ell.size()); ++i) w += (i - s) * ell[static_cast<std::size_t>(i)];
  return w;
}

/// Common weighted degree, or nothing when P is not isobaric. Zero is isobaric of weight 0.
inline std::optional<int> weighted_degree(const JetPoly& p) {
  if (p.is_zero()) return 0;
  std::optional<int> w;
  for (const auto& [m, c] : p.terms()) {
    int x = weight_of(p.registry(), m);
    if (w && *w != x) return std::nullopt;
    w = x;
  }
  return w;
}

struct PartialDegrees {
  int min_s = 0;
  int max_s = 0;
  int max_above = 0;
};

inline PartialDegrees partial_degrees(const JetPoly& p, int s) {
  PartialDegrees d;
  bool first = true;
  for (const auto& [m, c] : p.terms()) {
    auto ell = order_profile(p.registry(), m);
    int ws = partial_weight(ell, s), wa = weight_above(ell, s);
    if (first) {
      d = {ws, ws, wa};
      first = false;
    } else {
      d.min_s = std::min(d.min_s, ws);
      d.max_s = std::max(d.max_s, ws);
      d.max_above = std::max(d.max_above, wa);
    }
  }
  return d;
}

/// The derivation D with D(x_j^(l)) = x_j^(l+1).
inline JetPoly total_derivative(const JetPoly& p) {
  const auto& reg = p.registry();
  JetPoly r(reg);
  const int nb = reg->nbase();
  for (const auto& [m, c] : p.terms()) {
    for (std::size_t v = 0; v < m.size(); ++v) {
      if (m[v] == 0) continue;
      if (reg->order_of(static_cast<int>(v)) == reg->max_order()) {
        throw DomainError("total derivative exceeds the configured maximal jet order");
      }
      Monomial mm = m;
      mm[v] -= 1;
      mm[v + static_cast<std::size_t>(nb)] += 1;
      r.add_term(mm, c * Rational(m[v]));
    }
  }
  return r;
}

inline JetPoly total_derivative(const JetPoly& p, int times) {
  if (times < 0) throw DomainError("negative derivative count");
  JetPoly r = p;
  for (int i = 0; i < times; ++i) r = total_derivative(r);
  return r;
}

/// det[D^l s_j], l, j = 0..k.
inline JetPoly wronskian_jet(const std::vector<JetPoly>& sections) {
  if (sections.empty()) throw DomainError("Wronskian of no sections");
  const std::size_t m = sections.size();
  const auto& reg = sections.front().registry();
  std::vector<std::vector<JetPoly>> mat(m, std::vector<JetPoly>(m, JetPoly(reg)));
  for (std::size_t j = 0; j < m; ++j) {
    JetPoly d = sections[j];
    for (std::size_t l = 0; l < m; ++l) {
      mat[l][j] = d;
      if (l + 1 < m) d = total_derivative(d);
    }
  }
  return determinant(mat, JetPoly(reg));
}

/// Weights attached to the order-k Wronskian.
struct JetGrading {
  int k = 0;
  int kprime = 0;
  std::vector<int> a;  // (k, k-1, ..., 1)
  std::vector<int> b;  // partial sums of a

  explicit JetGrading(int order) : k(order) {
    if (order < 1) throw DomainError("jet grading needs k >= 1");
    kprime = k * (k + 1) / 2;
    int acc = 0;
    for (int j = 1; j <= k; ++j) {
      a.push_back(k - j + 1);
      acc += k - j + 1;
      b.push_back(acc);
    }
  }
};

/// True when P is isobaric of weight a_1 + ... + a_k and every monomial has
/// |l|_{>s} <= a_{s+1} + ... + a_k for s = 0..k-1.
inline bool filtration_check(const JetPoly& p, const std::vector<int>& a) {
  auto w = weighted_degree(p);
  if (!w) throw DomainError("filtration check needs an isobaric jet polynomial");
  int total = 0;
  for (int x : a) total += x;
  if (p.is_zero()) return true;
  if (*w != total) return false;
  const int k = static_cast<int>(a.size());
  for (const auto& [m, c] : p.terms()) {
    auto ell = order_profile(p.registry(), m);
    int tail = total;
    for (int s = 0; s < k; ++s) {
      if (weight_above(ell, s) > tail) return false;
      tail -= a[static_cast<std::size_t>(s)];
    }
  }
  return true;
}

/// Germ phi(z) = a_1 z + a_2 z^2 + ... + a_k z^k.
class ReparamJet {
public:
  explicit ReparamJet(std::vector<Rational> coeffs) : a_(std::move(coeffs)) {
    if (a_.empty() || sgn(a_.front()) == 0) throw DomainError("reparametrization needs a_1 != 0");
  }

  static ReparamJet homothety(const Rational& lambda, int order = 1) {
    std::vector<Rational> c(static_cast<std::size_t>(std::max(order, 1)), Rational(0));
    c[0] = lambda;
    return ReparamJet(std::move(c));
  }

  int order() const { return static_cast<int>(a_.size()); }
  const std::vector<Rational>& coeffs() const { return a_; }
  Rational coeff(int i) const { return i >= 1 && i <= order() ? a_[static_cast<std::size_t>(i - 1)] : Rational(0); }

  /// phi^(i)(0) = i! a_i
  Rational derivative_at_zero(int i) const {
    Rational f(1);
    for (int t = 2; t <= i; ++t) f *= t;
    return f * coeff(i);
  }

  /// (this o psi) mod z^{k+1}, k the smaller of the two orders.
  ReparamJet compose(const ReparamJet& psi) const {
    const int k = std::min(order(), psi.order());
    // powers of psi as truncated series, index = exponent of z
    std::vector<Rational> out(static_cast<std::size_t>(k + 1), Rational(0));
    std::vector<Rational> pw(static_cast<std::size_t>(k + 1), Rational(0));
    pw[0] = 1;
    for (int i = 1; i <= k; ++i) {
      std::vector<Rational> next(static_cast<std::size_t>(k + 1), Rational(0));
      for (int e = 0; e <= k; ++e) {
        if (sgn(pw[static_cast<std::size_t>(e)]) == 0) continue;
        for (int t = 1; e + t <= k; ++t) next[static_cast<std::size_t>(e + t)] += pw[static_cast<std::size_t>(e)] * psi.coeff(t);
      }
      pw = std::move(next);
      for (int e = 0; e <= k; ++e) out[static_cast<std::size_t>(e)] += coeff(i) * pw[static_cast<std::size_t>(e)];
    }
    return ReparamJet(std::vector<Rational>(out.begin() + 1, out.end()));
  }

private:
  std::vector<Rational> a_;
};

/// Partial Bell polynomials B_{n,m}(d_1, d_2, ...) for n, m <= top.
inline std::vector<std::vector<Rational>> bell_table(const std::vector<Rational>& d, int top) {
  auto dv = [&](int i) { return i >= 1 && i <= static_cast<int>(d.size()) ? d[static_cast<std::size_t>(i - 1)] : Rational(0); };
  std::vector<std::vector<Rational>> b(static_cast<std::size_t>(top + 1),
                                       std::vector<Rational>(static_cast<std::size_t>(top + 1), Rational(0)));
  b[0][0] = 1;
  for (int n = 1; n <= top; ++n) {
    for (int m = 1; m <= n; ++m) {
      Rational acc(0);
      Rational binom(1);  // C(n-1, i-1)
      for (int i = 1; i <= n - m + 1; ++i) {
        acc += binom * dv(i) * b[static_cast<std::size_t>(n - i)][static_cast<std::size_t>(m - 1)];
        binom = binom * (n - i) / i;
      }
      b[static_cast<std::size_t>(n)][static_cast<std::size_t>(m)] = acc;
    }
  }
  return b;
}

/// Substitutes x_j^(l) by (f_j o phi)^(l)(0) = sum_m B_{l,m}(phi', phi'', ...) x_j^(m).
inline JetPoly reparametrize(const JetPoly& p, const ReparamJet& phi) {
  const auto& reg = p.registry();
  const int top = reg->max_order();
  std::vector<Rational> d;
  for (int i = 1; i <= top; ++i) d.push_back(phi.derivative_at_zero(i));
  auto b = bell_table(d, top);
  std::vector<JetPoly> images;
  for (int v = 0; v < reg->size(); ++v) {
    const int j = reg->base_of(v), l = reg->order_of(v);
    if (l == 0) {
      images.push_back(JetPoly::variable(reg, j, 0));
      continue;
    }
    JetPoly img(reg);
    for (int m = 1; m <= l; ++m) {
      img += b[static_cast<std::size_t>(l)][static_cast<std::size_t>(m)] * JetPoly::variable(reg, j, m);
    }
    images.push_back(std::move(img));
  }
  return p.substitute(images, reg);
}

/// Substitutes x_j^(l) by D^l(Psi_j) for a polynomial map Psi of the base coordinates.
inline JetPoly coordinate_change(const JetPoly& p, const std::vector<JetPoly>& psi) {
  const auto& reg = p.registry();
  if (static_cast<int>(psi.size()) != reg->nbase()) throw DomainError("coordinate change has the wrong number of components");
  const int top = p.max_jet_order();
  std::vector<std::vector<JetPoly>> ders(psi.size());
  for (std::size_t j = 0; j < psi.size(); ++j) {
    if (psi[j].max_jet_order() != 0) throw DomainError("coordinate change must be a map of base coordinates");
    ders[j].push_back(psi[j]);
    for (int l = 1; l <= top; ++l) ders[j].push_back(total_derivative(ders[j].back()));
  }
  std::vector<JetPoly> images;
  for (int v = 0; v < reg->size(); ++v) {
    const int j = reg->base_of(v), l = reg->order_of(v);
    images.push_back(l <= top ? ders[static_cast<std::size_t>(j)][static_cast<std::size_t>(l)] : JetPoly(reg));
  }
  return p.substitute(images, reg);
}

/// W(A s) == det(A) W(s) for a square exact matrix A acting on the section tuple.
inline bool sl_action_check(const std::vector<std::vector<Rational>>& a, const std::vector<JetPoly>& sections) {
  const std::size_t m = sections.size();
  if (a.size() != m) throw DomainError("matrix size does not match the number of sections");
  for (const auto& row : a) {
    if (row.size() != m) throw DomainError("matrix must be square");
  }
  const auto& reg = sections.front().registry();
  std::vector<JetPoly> mixed;
  for (std::size_t i = 0; i < m; ++i) {
    JetPoly t(reg);
    for (std::size_t j = 0; j < m; ++j) t += a[i][j] * sections[j];
    mixed.push_back(std::move(t));
  }
  return wronskian_jet(mixed) == determinant(a, Rational(0)) * wronskian_jet(sections);
}

/// numerator / base^exponent
struct JetFraction {
  JetPoly numerator;
  JetPoly base;
  int exponent = 0;

  /// Numerator over base^target, target >= exponent.
  JetPoly numerator_over(int target) const {
    if (target < exponent) throw DomainError("cannot lower the denominator exponent");
    return numerator * base.pow(target - exponent);
  }
};

/// Logarithmic derivative sigma_D * D^l(sigma / sigma_D) from
/// D^l sigma = sum_i C(l, i) (D^{l-i} sigma_D / sigma_D) nabla^i sigma.
inline std::vector<JetFraction> log_nabla_all(const JetPoly& sigma, const JetPoly& sigma_d, int ell) {
  if (sigma_d.is_zero()) throw DomainError("logarithmic derivative along the zero section");
  if (ell < 0) throw DomainError("negative derivative order");
  std::vector<JetPoly> ds{sigma}, dd{sigma_d};
  for (int l = 1; l <= ell; ++l) {
    ds.push_back(total_derivative(ds.back()));
    dd.push_back(total_derivative(dd.back()));
  }
  // unreduced numerators N_l over sigma_D^l
  std::vector<JetPoly> raw{sigma};
  std::vector<JetFraction> out{{sigma, sigma_d, 0}};
  for (int l = 1; l <= ell; ++l) {
    JetPoly num = ds[static_cast<std::size_t>(l)] * sigma_d.pow(l);
    Rational binom(1);
    for (int i = 0; i < l; ++i) {
      num -= binom * (dd[static_cast<std::size_t>(l - i)] * raw[static_cast<std::size_t>(i)] * sigma_d.pow(l - 1 - i));
      binom = binom * (l - i) / (i + 1);
    }
    raw.push_back(num);
    JetFraction fr{num, sigma_d, l};
    while (fr.exponent > 0 && !fr.numerator.is_zero()) {
      auto q = try_divide_exact(fr.numerator, sigma_d);
      if (!q) break;
      fr.numerator = *std::move(q);
      --fr.exponent;
    }
    if (fr.numerator.is_zero()) fr.exponent = 0;
    out.push_back(std::move(fr));
  }
  return out;
}

inline JetFraction log_nabla(const JetPoly& sigma, const JetPoly& sigma_d, int ell) {
  return log_nabla_all(sigma, sigma_d, ell).back();
}

/// W(sigma_D sigma_0, sigma_1..sigma_k) == sigma_D W_D(sigma_0; sigma_1..sigma_k),
/// W_D having first column D^l sigma_0 and columns nabla^l sigma_j. Row l is
/// multiplied by sigma_D^l to clear denominators, so the left side picks up sigma_D^{k'}.
inline bool log_wronskian_identity_check(const JetPoly& sigma_d, const JetPoly& sigma0,
                                         const std::vector<JetPoly>& rest) {
  if (sigma_d.is_zero()) throw DomainError("logarithmic Wronskian along the zero section");
  const int k = static_cast<int>(rest.size());
  const std::size_t m = rest.size() + 1;
  const auto& reg = sigma0.registry();
  std::vector<std::vector<JetPoly>> mat(m, std::vector<JetPoly>(m, JetPoly(reg)));
  JetPoly d = sigma0;
  for (int l = 0; l <= k; ++l) {
    mat[static_cast<std::size_t>(l)][0] = d * sigma_d.pow(l);
    if (l < k) d = total_derivative(d);
  }
  for (std::size_t j = 1; j < m; ++j) {
    auto nab = log_nabla_all(rest[j - 1], sigma_d, k);
    for (int l = 0; l <= k; ++l) mat[static_cast<std::size_t>(l)][j] = nab[static_cast<std::size_t>(l)].numerator_over(l);
  }
  std::vector<JetPoly> lhs_sections{sigma_d * sigma0};
  lhs_sections.insert(lhs_sections.end(), rest.begin(), rest.end());
  const int kprime = k * (k + 1) / 2;
  return sigma_d.pow(kprime) * wronskian_jet(lhs_sections) == sigma_d * determinant(mat, JetPoly(reg));
}

/// det[D^l W(sigma, s_j)]_{l,j=0..k} == sigma^k W(sigma, s_0, ..., s_k).
inline bool tower_wronskian_identity_check(const JetPoly& sigma, const std::vector<JetPoly>& s) {
  const int k = static_cast<int>(s.size()) - 1;
  if (k < 1) throw DomainError("tower identity needs k >= 1");
  const auto& reg = sigma.registry();
  const std::size_t m = s.size();
  std::vector<std::vector<JetPoly>> mat(m, std::vector<JetPoly>(m, JetPoly(reg)));
  for (std::size_t j = 0; j < m; ++j) {
    JetPoly w = wronskian_jet({sigma, s[j]});
    for (std::size_t l = 0; l < m; ++l) {
      mat[l][j] = w;
      if (l + 1 < m) w = total_derivative(w);
    }
  }
  std::vector<JetPoly> all{sigma};
  all.insert(all.end(), s.begin(), s.end());
  return determinant(mat, JetPoly(reg)) == sigma.pow(k) * wronskian_jet(all);
}

namespace detail {

template <typename R, typename Lift>
R jet_evaluate_impl(const JetPoly& p, const std::vector<std::vector<R>>& jet, const R& zero, Lift&& lift) {
  const auto& reg = p.registry();
  if (static_cast<int>(jet.size()) != reg->nbase()) throw DomainError("jet has the wrong number of coordinates");
  const int need = p.max_jet_order();
  std::vector<R> values(static_cast<std::size_t>(reg->size()), zero);
  for (int j = 0; j < reg->nbase(); ++j) {
    const auto& col = jet[static_cast<std::size_t>(j)];
    if (static_cast<int>(col.size()) <= need) throw DomainError("jet is missing derivative orders");
    for (int l = 0; l < static_cast<int>(col.size()) && l <= reg->max_order(); ++l) {
      values[static_cast<std::size_t>(reg->id(j, l))] = col[static_cast<std::size_t>(l)];
    }
  }
  return p.evaluate<R>(values, zero + R(1), lift);
}

} // namespace detail

/// P at a jet given as jet[j][l] = f_j^(l)(z0).
inline Complex jet_evaluate(const JetPoly& p, const std::vector<std::vector<Complex>>& jet) {
  return detail::jet_evaluate_impl<Complex>(p, jet, Complex(0.0, 0.0), [](const Rational& c) { return Complex(c.get_d(), 0.0); });
}

inline GaussRational jet_evaluate(const JetPoly& p, const std::vector<std::vector<GaussRational>>& jet) {
  return detail::jet_evaluate_impl<GaussRational>(p, jet, GaussRational(), [](const Rational& c) { return GaussRational(c); });
}

} // namespace valdist
