#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "valdist/crofton.hpp"

using namespace valdist;

namespace {

QPoly qp(std::initializer_list<long> c) {
  std::vector<GaussRational> v;
  for (long x : c) v.emplace_back(x);
  return QPoly(v);
}

bool agree(const MonteCarloResult& a, const MonteCarloResult& b) {
  return std::abs(a.mean - b.mean) <= 3.0 * std::hypot(a.std_error, b.std_error);
}

} // namespace

TEST(Philox, KnownAnswers) {
  using A4 = std::array<std::uint32_t, 4>;
  EXPECT_EQ(philox4x32_10({0, 0, 0, 0}, {0, 0}), (A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
            (A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
            (A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(Philox, StreamsAreReproducibleAndDistinct) {
  PhiloxStream a(42, 7), b(42, 7), c(42, 8);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    double x = a.uniform();
    EXPECT_EQ(x, b.uniform());
    differs = differs || x != c.uniform();
    EXPECT_GT(x, 0.0);
    EXPECT_LT(x, 1.0);
  }
  EXPECT_TRUE(differs);
}

TEST(Haar, DimensionOneIsAPhase) {
  HaarSampler s(1, 3);
  for (std::uint64_t i = 0; i < 100; ++i) EXPECT_NEAR(std::abs(s.sample(i)(0, 0)), 1.0, 1e-15);
  EXPECT_THROW(HaarSampler(0, 1), DomainError);
}

TEST(Haar, Unitarity) {
  for (int d = 1; d <= 6; ++d) {
    HaarSampler s(d, 11);
    for (std::uint64_t i = 0; i < 500; ++i) EXPECT_LE(unitarity_defect(s.sample(i)), 1e-12);
  }
}

TEST(Haar, ColumnMeansVanish) {
  const int d = 3;
  const long n = 100000;
  HaarSampler s(d, 99);
  std::vector<Complex> sum(d * d), sum2(d * d, 0.0);
  std::vector<double> sq(d * d, 0.0);
  for (long i = 0; i < n; ++i) {
    auto u = s.sample(static_cast<std::uint64_t>(i));
    for (int k = 0; k < d * d; ++k) {
      Complex v = u(k / d, k % d);
      sum[static_cast<std::size_t>(k)] += v;
      sq[static_cast<std::size_t>(k)] += std::norm(v);
    }
  }
  for (int k = 0; k < d * d; ++k) {
    Complex m = sum[static_cast<std::size_t>(k)] / static_cast<double>(n);
    // each entry has E|u|^2 = 1/d, split evenly between real and imaginary parts
    double se = std::sqrt(sq[static_cast<std::size_t>(k)] / n / 2.0 / n);
    EXPECT_LE(std::abs(m.real()), 3 * se);
    EXPECT_LE(std::abs(m.imag()), 3 * se);
    EXPECT_NEAR(sq[static_cast<std::size_t>(k)] / n, 1.0 / d, 0.01);
  }
}

TEST(Crofton, WeilConstantsAreHalfHarmonicNumbers) {
  for (int n = 1; n <= 3; ++n) {
    std::vector<Complex> x(static_cast<std::size_t>(n + 1), Complex(0, 0));
    x[0] = 1;
    auto r = average_weil_hyperplane(n, x, 100000, 1000 + n);
    EXPECT_LE(std::abs(r.mean - harmonic_number(n) / 2), 3 * r.std_error) << "n=" << n;
    std::vector<Complex> y;
    for (int i = 0; i <= n; ++i) y.push_back(Complex(i + 1.0, -0.5 * i));
    auto r2 = average_weil_hyperplane(n, y, 100000, 2000 + n);
    EXPECT_TRUE(agree(r, r2)) << r.mean << " vs " << r2.mean;
  }
  EXPECT_NEAR(harmonic_number(3) / 2, 11.0 / 12.0, 1e-15);
}

TEST(Crofton, LeftInvariance) {
  const int n = 2;
  std::vector<Complex> x{Complex(0.3, 1), Complex(-2, 0.1), Complex(0.5, 0.5)};
  auto v = HaarSampler(n + 1, 5).sample(0);
  std::vector<Complex> vx(3);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) vx[static_cast<std::size_t>(i)] += v(i, j) * x[static_cast<std::size_t>(j)];
  }
  EXPECT_TRUE(agree(average_weil_hyperplane(n, x, 50000, 6), average_weil_hyperplane(n, vx, 50000, 7)));
}

TEST(Crofton, StandardErrorScaling) {
  std::vector<Complex> x{1, 2, Complex(0, 1)};
  auto small = average_weil_hyperplane(2, x, 1000, 8), big = average_weil_hyperplane(2, x, 100000, 8);
  double ratio = small.std_error / big.std_error;
  EXPECT_GE(ratio, 8.0);
  EXPECT_LE(ratio, 12.0);
}

TEST(Crofton, ThreadCountDoesNotChangeResults) {
  std::vector<Complex> x{1, 2, Complex(0, 1)};
  auto a = average_weil_hyperplane(2, x, 5000, 9, 1), b = average_weil_hyperplane(2, x, 5000, 9, 4);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.std_error, b.std_error);
}

TEST(Crofton, SubsystemAverages) {
  const int n = 3;
  std::vector<Complex> x{1, Complex(0, 2), -1, 0.5};
  auto k0 = average_subsystem_base_locus(n, 0, x, 20000, 10);
  auto w = average_weil_hyperplane(n, x, 20000, 10);
  EXPECT_EQ(k0.mean, w.mean);
  for (int k = 1; k <= n - 1; ++k) {
    auto a = average_subsystem_base_locus(n, k, x, 50000, 11);
    auto b = average_subsystem_base_locus(n, k, {0, 0, 1, 0}, 50000, 12);
    EXPECT_TRUE(agree(a, b)) << "k=" << k;
    EXPECT_LT(a.mean, w.mean);
  }
  EXPECT_THROW(average_subsystem_base_locus(1, 1, {1, 0}, 10, 1), DomainError);
  EXPECT_THROW(average_subsystem_base_locus(1, -1, {1, 0}, 10, 1), DomainError);
  EXPECT_NO_THROW(average_subsystem_base_locus(1, 0, {1, 0}, 10, 1));
}

TEST(Crofton, AverageProximity) {
  auto line = ProjectiveCurve::reduce({qp({1}), qp({0, 1})});
  auto r = average_proximity(line, 10.0, 20000, 13);
  EXPECT_LE(std::abs(r.mean - 0.5), 3 * r.std_error);

  auto conic = ProjectiveCurve::reduce({qp({1}), qp({0, 1}), qp({0, 0, 1})});
  auto a = average_proximity(conic, 5.0, 20000, 14), b = average_proximity(conic, 50.0, 20000, 15);
  EXPECT_TRUE(agree(a, b)) << a.mean << " vs " << b.mean;
  EXPECT_LE(std::abs(a.mean - 0.75), 3 * a.std_error);

  auto deg = ProjectiveCurve::reduce({qp({1}), qp({0, 1}), qp({0, 2})});
  EXPECT_THROW(average_proximity(deg, 1.0, 10, 1), DegenerateError);
}
