#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "valdist/errors.hpp"
#include "valdist/rational.hpp"

namespace valdist {

using IndexSet = std::vector<int>;

/// All strictly increasing subsets of {0..ambient-1} of the given size, in
/// lexicographic order.
inline std::vector<IndexSet> sorted_subsets(int ambient, int size) {
  std::vector<IndexSet> out;
  if (size < 0 || size > ambient) return out;
  IndexSet cur(static_cast<std::size_t>(size));
  for (int i = 0; i < size; ++i) cur[static_cast<std::size_t>(i)] = i;
  while (true) {
    out.push_back(cur);
    int i = size - 1;
    while (i >= 0 && cur[static_cast<std::size_t>(i)] == ambient - size + i) --i;
    if (i < 0) break;
    ++cur[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < size; ++j) cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

/// Sign of the permutation that sorts the concatenation a|b (both sorted),
/// or 0 if they share an index.
inline int merge_sign(const IndexSet& a, const IndexSet& b) {
  int inversions = 0;
  for (int x : a) {
    for (int y : b) {
      if (x == y) return 0;
      if (x > y) ++inversions;
    }
  }
  return inversions % 2 == 0 ? 1 : -1;
}

inline IndexSet merged(const IndexSet& a, const IndexSet& b) {
  IndexSet r;
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
  return r;
}

namespace detail {

// Coefficients of a (level)-fold wedge in C^ambient, stored densely against
// the lexicographic list of index subsets.
class WedgeCoeffs {
public:
  WedgeCoeffs() = default;
  WedgeCoeffs(int ambient, int level)
      : ambient_(ambient), level_(level), basis_(sorted_subsets(ambient, level)),
        coeffs_(basis_.size(), Complex(0.0, 0.0)) {
    if (level < 0 || level > ambient) throw DomainError("wedge level out of range");
    for (std::size_t i = 0; i < basis_.size(); ++i) index_.emplace(basis_[i], i);
  }

  int ambient() const { return ambient_; }
  int level() const { return level_; }
  const std::vector<IndexSet>& basis() const { return basis_; }
  const std::vector<Complex>& coeffs() const { return coeffs_; }
  std::vector<Complex>& coeffs() { return coeffs_; }

  Complex at(const IndexSet& s) const {
    auto it = index_.find(s);
    if (it == index_.end()) throw DomainError("index set is not a sorted subset of the right size");
    return coeffs_[it->second];
  }
  void set(const IndexSet& s, Complex v) {
    auto it = index_.find(s);
    if (it == index_.end()) throw DomainError("index set is not a sorted subset of the right size");
    coeffs_[it->second] = v;
  }
  void add(const IndexSet& s, Complex v) {
    auto it = index_.find(s);
    if (it == index_.end()) throw DomainError("index set is not a sorted subset of the right size");
    coeffs_[it->second] += v;
  }

  double norm2() const {
    double s = 0.0;
    for (const auto& c : coeffs_) s += std::norm(c);
    return s;
  }
  double norm() const { return std::sqrt(norm2()); }

protected:
  int ambient_ = 0;
  int level_ = 0;
  std::vector<IndexSet> basis_;
  std::map<IndexSet, std::size_t> index_;
  std::vector<Complex> coeffs_;
};

} // namespace detail

/// Element of the (level)-th exterior power of C^ambient.
class ExteriorVector : public detail::WedgeCoeffs {
public:
  using WedgeCoeffs::WedgeCoeffs;

  static ExteriorVector from_vector(const std::vector<Complex>& v) {
    ExteriorVector e(static_cast<int>(v.size()), 1);
    for (std::size_t i = 0; i < v.size(); ++i) e.coeffs()[i] = v[i];
    return e;
  }
  static ExteriorVector basis_element(int ambient, const IndexSet& s) {
    ExteriorVector e(ambient, static_cast<int>(s.size()));
    e.set(s, Complex(1.0, 0.0));
    return e;
  }
};

/// Element of the (level)-th exterior power of the dual space.
class ExteriorCovector : public detail::WedgeCoeffs {
public:
  using WedgeCoeffs::WedgeCoeffs;

  static ExteriorCovector from_covector(const std::vector<Complex>& a) {
    ExteriorCovector e(static_cast<int>(a.size()), 1);
    for (std::size_t i = 0; i < a.size(); ++i) e.coeffs()[i] = a[i];
    return e;
  }
  static ExteriorCovector basis_element(int ambient, const IndexSet& s) {
    ExteriorCovector e(ambient, static_cast<int>(s.size()));
    e.set(s, Complex(1.0, 0.0));
    return e;
  }

  /// Pairing with a vector of the same level: e*_I(e_J) = delta_IJ, bilinear.
  Complex operator()(const ExteriorVector& v) const {
    if (v.ambient() != ambient() || v.level() != level()) throw DomainError("pairing of mismatched levels");
    Complex s(0.0, 0.0);
    for (std::size_t i = 0; i < coeffs().size(); ++i) s += coeffs()[i] * v.coeffs()[i];
    return s;
  }
};

template <typename W>
W wedge(const W& a, const W& b) {
  if (a.ambient() != b.ambient()) throw DomainError("wedge of mismatched ambient spaces");
  if (a.level() + b.level() > a.ambient()) return W(a.ambient(), a.ambient());
  W out(a.ambient(), a.level() + b.level());
  for (std::size_t i = 0; i < a.basis().size(); ++i) {
    if (a.coeffs()[i] == Complex(0.0, 0.0)) continue;
    for (std::size_t j = 0; j < b.basis().size(); ++j) {
      int sg = merge_sign(a.basis()[i], b.basis()[j]);
      if (sg == 0) continue;
      out.add(merged(a.basis()[i], b.basis()[j]), static_cast<double>(sg) * a.coeffs()[i] * b.coeffs()[j]);
    }
  }
  return out;
}

/// Interior product alpha -| beta, characterized by
/// gamma(alpha -| beta) = (beta ^ gamma)(alpha) for every covector gamma.
/// Level p+1 against level q+1 gives level p-q.
inline ExteriorVector interior_product(const ExteriorVector& alpha, const ExteriorCovector& beta) {
  if (alpha.ambient() != beta.ambient()) throw DomainError("interior product of mismatched ambient spaces");
  if (beta.level() > alpha.level()) throw DomainError("interior product needs level(beta) <= level(alpha)");
  ExteriorVector out(alpha.ambient(), alpha.level() - beta.level());
  for (std::size_t c = 0; c < out.basis().size(); ++c) {
    const IndexSet& cs = out.basis()[c];
    Complex acc(0.0, 0.0);
    for (std::size_t b = 0; b < beta.basis().size(); ++b) {
      if (beta.coeffs()[b] == Complex(0.0, 0.0)) continue;
      int sg = merge_sign(beta.basis()[b], cs);
      if (sg == 0) continue;
      acc += static_cast<double>(sg) * beta.coeffs()[b] * alpha.at(merged(beta.basis()[b], cs));
    }
    out.coeffs()[c] = acc;
  }
  return out;
}

/// A linear subspace given by a unit normal covector of level codim.
class LinearTarget {
public:
  LinearTarget(ExteriorCovector normal) : normal_(std::move(normal)) {
    double nn = normal_.norm();
    if (nn == 0.0) throw DomainError("linear target with zero normal");
    for (auto& c : normal_.coeffs()) c /= nn;
  }

  /// Hyperplane {sum a_i x_i = 0}.
  static LinearTarget hyperplane(const std::vector<Complex>& a) {
    return LinearTarget(ExteriorCovector::from_covector(a));
  }

  /// Intersection of the hyperplanes with the given normals.
  static LinearTarget intersection(const std::vector<std::vector<Complex>>& normals) {
    if (normals.empty()) throw DomainError("intersection of no hyperplanes");
    ExteriorCovector acc = ExteriorCovector::from_covector(normals.front());
    for (std::size_t i = 1; i < normals.size(); ++i) acc = wedge(acc, ExteriorCovector::from_covector(normals[i]));
    if (acc.norm() < 1e-14) throw DomainError("hyperplanes are not independent");
    return LinearTarget(std::move(acc));
  }

  int ambient() const { return normal_.ambient(); }
  int codim() const { return normal_.level(); }
  const ExteriorCovector& normal() const { return normal_; }

private:
  ExteriorCovector normal_;
};

} // namespace valdist
