#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "valdist/corpus.hpp"
#include "valdist/curves.hpp"
#include "valdist/exterior.hpp"

using namespace valdist;

namespace {

QPoly qp(std::initializer_list<long> c) {
  std::vector<GaussRational> v;
  for (long x : c) v.emplace_back(x);
  return QPoly(v);
}

ProjectiveCurve curve(std::vector<QPoly> c) { return ProjectiveCurve::reduce(std::move(c)); }

// 5-point Laplacian / 4 with one Richardson step.
template <typename F>
double mixed_fd(F&& f, Complex z, double h) {
  auto lap = [&](double s) {
    double c = f(z);
    return (f(z + s) + f(z - s) + f(z + Complex(0, s)) + f(z - Complex(0, s)) - 4.0 * c) / (4.0 * s * s);
  };
  return (4.0 * lap(h / 2) - lap(h)) / 3.0;
}

} // namespace

TEST(Reduce, KnownValues) {
  auto f = curve({qp({0, 1}), qp({0, 0, 1})});
  EXPECT_EQ(f.exact()[0], qp({1}));
  EXPECT_EQ(f.exact()[1], qp({0, 1}));

  auto g = curve({qp({1}), qp({0, 1}), qp({0, 0, 1})});
  EXPECT_EQ(g.exact()[2], qp({0, 0, 1}));

  // [z-1 : z^2-1] -> [1 : z+1]
  auto h = curve({qp({-1, 1}), qp({-1, 0, 1})});
  EXPECT_EQ(h.exact()[1], h.exact()[0] * qp({1, 1}));
  EXPECT_EQ(h.exact()[0].degree(), 0);

  EXPECT_THROW(curve({QPoly{}, QPoly{}}), DomainError);
  EXPECT_THROW(curve({qp({1})}), DomainError);
}

TEST(DerivedVector, KnownValues) {
  auto f = curve({qp({1}), qp({0, 1}), qp({0, 0, 1})});
  EXPECT_EQ(wronskian_poly(f), qp({2}));
  auto v = derived_vector(f, 2, Complex(0.7, -0.2));
  EXPECT_NEAR(std::abs(v.at({0, 1, 2}) - Complex(2, 0)), 0.0, 1e-14);

  auto line = curve({qp({1}), qp({0, 1})});
  for (Complex z : {Complex(0, 0), Complex(3, -1), Complex(-0.5, 2)}) {
    EXPECT_NEAR(std::abs(derived_vector(line, 1, z).at({0, 1}) - Complex(1, 0)), 0.0, 1e-14);
  }

  Complex z(1.5, 0.5);
  auto v0 = derived_vector(f, 0, z);
  auto fz = f.eval(z);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(std::abs(v0.at({i}) - fz[static_cast<std::size_t>(i)]), 0.0, 1e-14);
}

TEST(DerivedVector, MinorsMatchNumericDeterminants) {
  PhiloxStream rng(11, 0);
  for (int trial = 0; trial < 10; ++trial) {
    auto f = random_curve(rng, 3, 4);
    Complex z(rng.uniform(-1, 1), rng.uniform(-1, 1));
    for (int k = 0; k <= 3; ++k) {
      auto v = derived_vector(f, k, z);
      for (const auto& s : sorted_subsets(4, k + 1)) {
        // determinant oracle on the numeric derivative matrix
        std::vector<std::vector<Complex>> m(static_cast<std::size_t>(k + 1), std::vector<Complex>(static_cast<std::size_t>(k + 1)));
        for (int j = 0; j <= k; ++j) {
          CPoly p = f.components()[static_cast<std::size_t>(s[static_cast<std::size_t>(j)])];
          for (int l = 0; l <= k; ++l) {
            m[static_cast<std::size_t>(l)][static_cast<std::size_t>(j)] = p.eval(z);
            p = p.derivative();
          }
        }
        Complex d = determinant(m, Complex(0, 0));
        EXPECT_NEAR(std::abs(v.at(s) - d), 0.0, 1e-9 * std::max(1.0, std::abs(d)));
      }
    }
  }
}

TEST(Wronskian, KnownValues) {
  EXPECT_EQ(wronskian_poly(curve({qp({1}), qp({0, 1}), qp({0, 1, 1})})), qp({2}));
  auto deg = curve({qp({1}), qp({0, 1}), qp({0, 2})});
  EXPECT_TRUE(wronskian_poly(deg).is_zero());
  EXPECT_FALSE(deg.linearly_nondegenerate());
}

TEST(InteriorProduct, KnownValues) {
  auto e01 = ExteriorVector::basis_element(2, {0, 1});
  auto r = interior_product(e01, ExteriorCovector::basis_element(2, {1}));
  EXPECT_EQ(r.level(), 1);
  EXPECT_NEAR(std::abs(r.at({0}) - Complex(-1, 0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(r.at({1})), 0.0, 1e-15);

  auto full = interior_product(e01, ExteriorCovector::basis_element(2, {0, 1}));
  EXPECT_EQ(full.level(), 0);
  EXPECT_NEAR(std::abs(full.coeffs().front() - Complex(1, 0)), 0.0, 1e-15);

  EXPECT_THROW(interior_product(ExteriorVector::basis_element(3, {0}), ExteriorCovector::basis_element(3, {0, 1})),
               DomainError);
}

TEST(InteriorProduct, DefiningPairingOnBasis) {
  PhiloxStream rng(5, 1);
  const int amb = 4;
  for (int p = 1; p <= amb; ++p) {
    for (int q = 1; q <= p; ++q) {
      ExteriorVector alpha(amb, p);
      ExteriorCovector beta(amb, q);
      for (auto& c : alpha.coeffs()) c = Complex(rng.normal(), rng.normal());
      for (auto& c : beta.coeffs()) c = Complex(rng.normal(), rng.normal());
      auto ab = interior_product(alpha, beta);
      for (const auto& s : sorted_subsets(amb, p - q)) {
        auto gamma = ExteriorCovector::basis_element(amb, s);
        Complex lhs = p == q ? ab.coeffs().front() : gamma(ab);
        Complex rhs = wedge(beta, gamma)(alpha);
        EXPECT_NEAR(std::abs(lhs - rhs), 0.0, 1e-12);
      }
    }
  }
}

TEST(ContactFunction, KnownValues) {
  auto f = curve({qp({1}), qp({0, 1})});
  auto h = LinearTarget::hyperplane({Complex(0, 0), Complex(1, 0)});
  EXPECT_NEAR(contact_function(f, h, 0, Complex(1, 0)), 0.5, 1e-15);
  EXPECT_NEAR(contact_function(f, h, 1, Complex(0.3, 2.0)), 1.0, 1e-15);

  auto inside = curve({qp({1}), qp({0, 1}), QPoly{}});
  auto h2 = LinearTarget::hyperplane({Complex(0, 0), Complex(0, 0), Complex(1, 0)});
  for (Complex z : {Complex(0, 0), Complex(2, 1)}) EXPECT_EQ(contact_function(inside, h2, 0, z), 0.0);

  EXPECT_THROW(contact_function(f, h, 2, Complex(0, 0)), DomainError);
  auto stationary = curve({qp({1}), qp({0, 0, 1})});
  EXPECT_THROW(contact_function(stationary, h, 1, Complex(0, 0)), DegenerateError);
}

TEST(ContactFunction, ScaleInvariantAndBounded) {
  PhiloxStream rng(21, 0);
  for (int trial = 0; trial < 10; ++trial) {
    auto f = random_curve(rng, 2, 3);
    std::vector<QPoly> scaled;
    GaussRational c(make_rational(7, 3), make_rational(-2, 5));
    for (const auto& p : f.exact()) scaled.push_back(c * p);
    auto g = ProjectiveCurve::reduce(scaled);
    auto h = LinearTarget::hyperplane({Complex(rng.normal(), rng.normal()), Complex(rng.normal(), 0), Complex(1, 1)});
    auto h2 = LinearTarget::intersection({{Complex(1, 0), Complex(0, 0), Complex(2, 0)}, {Complex(0, 1), Complex(1, 0), Complex(0, 0)}});
    Complex z(rng.uniform(-2, 2), rng.uniform(-2, 2));
    for (int k = 0; k <= 2; ++k) {
      double a = contact_function(f, h, k, z), b = contact_function(g, h, k, z);
      EXPECT_NEAR(a, b, 1e-12);
      EXPECT_GE(a, 0.0);
      EXPECT_LE(a, 1.0 + 1e-12);
      if (k >= 1) {
        double u = contact_function(f, h2, k, z);
        EXPECT_NEAR(u, contact_function(g, h2, k, z), 1e-12);
        EXPECT_LE(u, 1.0 + 1e-12);
      }
    }
  }
}

TEST(VanishingOrders, KnownValues) {
  GaussRational zero(0);
  EXPECT_EQ(vanishing_orders(curve({qp({1}), qp({0, 0, 1}), qp({0, 0, 0, 1})}), zero), (std::vector<int>{1, 0}));
  EXPECT_EQ(vanishing_orders(curve({qp({1}), qp({0, 1}), qp({0, 0, 1})}), GaussRational(3)), (std::vector<int>{0, 0}));
  EXPECT_EQ(vanishing_orders(curve({qp({1}), qp({0, 0, 0, 1}), qp({0, 0, 0, 0, 0, 1})}), zero),
            (std::vector<int>{2, 1}));
  EXPECT_THROW(vanishing_orders(curve({qp({1}), qp({0, 1}), qp({0, 2})}), zero), DegenerateError);
}

TEST(VanishingOrders, NormalFormCurvesExactAndNumeric) {
  PhiloxStream rng(2024, 3);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 1 + static_cast<int>(rng.uniform_int(0, 2));
    std::vector<int> nu;
    for (int i = 0; i < n; ++i) nu.push_back(static_cast<int>(rng.uniform_int(0, 2)));
    GaussRational z0 = random_gauss(rng, 8, 4);
    auto f = normal_form_curve(rng, nu, z0);
    EXPECT_EQ(vanishing_orders(f, z0), nu);
    EXPECT_EQ(vanishing_orders(f, z0.to_complex()), nu);
    auto o = derived_orders(f, z0);
    for (int k = 1; k <= n; ++k) {
      int expect = 0;
      for (int i = 1; i <= k; ++i) expect += (k - i + 1) * nu[static_cast<std::size_t>(i - 1)];
      EXPECT_EQ(o[static_cast<std::size_t>(k)], expect);
    }
  }
}

TEST(Plucker, KnownValues) {
  auto f = curve({qp({1}), qp({0, 1})});
  EXPECT_NEAR(plucker_density(f, 0, Complex(0, 0)), 1.0, 1e-15);
  EXPECT_NEAR(plucker_density(f, 0, Complex(1, 0)), 0.25, 1e-15);
  EXPECT_EQ(plucker_density(f, 1, Complex(0.5, 0.5)), 0.0);
  EXPECT_THROW(plucker_density(curve({qp({1}), qp({0, 1}), qp({0, 2})}), 1, Complex(0.5, 0)), DegenerateError);
}

TEST(Plucker, FiniteDifferenceOracle) {
  PhiloxStream rng(77, 0);
  for (int trial = 0; trial < 6; ++trial) {
    int n = 2 + trial % 2;
    auto f = random_curve(rng, n, n + 1 + trial % 3);
    for (int k = 0; k < n; ++k) {
      std::vector<RootMult> avoid;
      for (int j : {k, k + 1}) {
        auto g = f.level_gcd(j);
        if (g.degree() > 0) {
          auto rs = roots_with_multiplicity(g);
          avoid.insert(avoid.end(), rs.begin(), rs.end());
        }
      }
      int checked = 0;
      while (checked < 20) {
        Complex z(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5));
        bool near = false;
        for (const auto& r : avoid) near = near || std::abs(z - r.root) < 1e-3;
        if (near) continue;
        double fd = mixed_fd([&](Complex w) { return std::log(f.derived_norm2(k, w)); }, z, 1e-3);
        double hk = plucker_density(f, k, z);
        EXPECT_NEAR(fd, hk, 1e-4 * hk) << "n=" << n << " k=" << k << " z=" << z;
        ++checked;
      }
    }
  }
}

TEST(Plucker, OrderAtStationaryPoint) {
  // h_k has a zero of order 2 nu_{k+1}: h_0 ~ |z|^{2 nu_1} near a cusp
  auto f = curve({qp({1}), qp({0, 0, 1}), qp({0, 0, 0, 1})});
  double a = plucker_density(f, 0, Complex(1e-3, 0)), b = plucker_density(f, 0, Complex(2e-3, 0));
  EXPECT_NEAR(std::log(b / a) / std::log(2.0), 2.0, 1e-3);
}
