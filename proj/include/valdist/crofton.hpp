#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "valdist/curves.hpp"
#include "valdist/errors.hpp"
#include "valdist/parallel.hpp"
#include "valdist/quadrature.hpp"
#include "valdist/rng.hpp"
#include "valdist/roots.hpp"

namespace valdist {

using UnitaryMatrix = Eigen::MatrixXcd;

/// Haar-distributed unitaries of a fixed size; sample i is a pure function of (seed, i).
class HaarSampler {
public:
  HaarSampler(int dim, std::uint64_t seed) : dim_(dim), seed_(seed) {
    if (dim < 1) throw DomainError("unitary group dimension must be at least 1");
  }

  int dim() const { return dim_; }
  std::uint64_t seed() const { return seed_; }

  /// QR of a complex Ginibre matrix, with the phases of diag(R) moved into Q.
  UnitaryMatrix sample(std::uint64_t index) const {
    PhiloxStream rng(seed_, index);
    UnitaryMatrix g(dim_, dim_);
    const double s = 1.0 / std::sqrt(2.0);
    for (int j = 0; j < dim_; ++j) {
      for (int i = 0; i < dim_; ++i) {
        double re = rng.normal(), im = rng.normal();
        g(i, j) = Complex(s * re, s * im);
      }
    }
    Eigen::HouseholderQR<UnitaryMatrix> qr(g);
    UnitaryMatrix q = qr.householderQ();
    const UnitaryMatrix& r = qr.matrixQR();
    for (int j = 0; j < dim_; ++j) {
      Complex d = r(j, j);
      double a = std::abs(d);
      q.col(j) *= a == 0.0 ? Complex(1.0, 0.0) : d / a;
    }
    return q;
  }

private:
  int dim_;
  std::uint64_t seed_;
};

inline UnitaryMatrix haar_unitary(const HaarSampler& s, std::uint64_t index) { return s.sample(index); }

/// max |(U^* U - I)_{ij}|
inline double unitarity_defect(const UnitaryMatrix& u) {
  UnitaryMatrix d = u.adjoint() * u - UnitaryMatrix::Identity(u.rows(), u.cols());
  return d.cwiseAbs().maxCoeff();
}

struct MonteCarloResult {
  double mean = 0.0;
  double std_error = 0.0;
  long samples = 0;
};

namespace detail {

inline MonteCarloResult summarize(const std::vector<double>& v) {
  MonteCarloResult r;
  r.samples = static_cast<long>(v.size());
  if (v.empty()) return r;
  r.mean = ordered_sum(v) / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - r.mean) * (x - r.mean);
  if (v.size() > 1) r.std_error = std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
  return r;
}

inline std::vector<Complex> unit(const std::vector<Complex>& x) {
  double nn = 0.0;
  for (auto c : x) nn += std::norm(c);
  if (nn == 0.0) throw DomainError("zero vector is not a point of P^n");
  std::vector<Complex> u;
  for (auto c : x) u.push_back(c / std::sqrt(nn));
  return u;
}

inline Complex row_dot(const UnitaryMatrix& u, int row, const std::vector<Complex>& x) {
  Complex s(0.0, 0.0);
  for (std::size_t j = 0; j < x.size(); ++j) s += u(row, static_cast<int>(j)) * x[j];
  return s;
}

} // namespace detail

/// Monte Carlo mean of lambda_{g^*H}(x) = -log |<row_0(g), x>| / |x|
/// over Haar-random g; the exact value is H_n / 2.
inline MonteCarloResult average_weil_hyperplane(int n, const std::vector<Complex>& x, long samples,
                                                std::uint64_t seed, int threads = 1) {
  if (static_cast<int>(x.size()) != n + 1) throw DomainError("point has the wrong number of coordinates");
  if (samples < 1) throw DomainError("need at least one sample");
  auto xu = detail::unit(x);
  HaarSampler hs(n + 1, seed);
  std::vector<double> v(static_cast<std::size_t>(samples));
  parallel_for(v.size(), threads, [&](std::size_t i) {
    v[i] = -std::log(std::abs(detail::row_dot(hs.sample(i), 0, xu)));
  });
  return detail::summarize(v);
}

/// Monte Carlo mean of lambda_{cap of the first k+1 rows of g}(x) = -log max_i |<row_i(g), x/|x|>|.
inline MonteCarloResult average_subsystem_base_locus(int n, int k, const std::vector<Complex>& x, long samples,
                                                     std::uint64_t seed, int threads = 1) {
  if (k < 0 || k > n - 1) throw DomainError("subsystem dimension must lie in [0, n-1]");
  if (static_cast<int>(x.size()) != n + 1) throw DomainError("point has the wrong number of coordinates");
  if (samples < 1) throw DomainError("need at least one sample");
  auto xu = detail::unit(x);
  HaarSampler hs(n + 1, seed);
  std::vector<double> v(static_cast<std::size_t>(samples));
  parallel_for(v.size(), threads, [&](std::size_t i) {
    UnitaryMatrix u = hs.sample(i);
    double best = 0.0;
    for (int row = 0; row <= k; ++row) best = std::max(best, std::abs(detail::row_dot(u, row, xu)));
    v[i] = -std::log(best);
  });
  return detail::summarize(v);
}

/// Monte Carlo mean over Haar g of m_f(r, g^*H). For each sample the circle
/// average of log|<a, F>| comes from Jensen's formula on the roots of <a, F>,
/// and the circle average of log|F| is shared by all samples.
inline MonteCarloResult average_proximity(const ProjectiveCurve& f, double r, long samples, std::uint64_t seed,
                                          int threads = 1) {
  if (!(r > 0.0)) throw DomainError("radius must be positive");
  if (samples < 1) throw DomainError("need at least one sample");
  if (!f.linearly_nondegenerate()) throw DegenerateError("curve lies in a hyperplane");
  const int n = f.n();
  const double half_log_norm =
      0.5 * circle_average([&](double t) { return std::log(f.norm2(std::polar(r, t))); }).value;
  HaarSampler hs(n + 1, seed);
  std::vector<double> v(static_cast<std::size_t>(samples));
  parallel_for(v.size(), threads, [&](std::size_t i) {
    UnitaryMatrix u = hs.sample(i);
    CPoly g;
    for (int j = 0; j <= n; ++j) g += u(0, j) * f.components()[static_cast<std::size_t>(j)];
    double mean_log = std::log(std::abs(g.leading()));
    if (g.degree() > 0) {
      for (const auto& root : roots_with_multiplicity(g)) mean_log += root.mult * std::log(std::max(r, std::abs(root.root)));
    }
    v[i] = half_log_norm - mean_log;
  });
  return detail::summarize(v);
}

/// H_n = 1 + 1/2 + ... + 1/n.
inline double harmonic_number(int n) {
  double h = 0.0;
  for (int i = 1; i <= n; ++i) h += 1.0 / i;
  return h;
}

} // namespace valdist
