#include <gtest/gtest.h>

#include <random>

#include "valdist/mpoly.hpp"
#include "valdist/roots.hpp"
#include "valdist/upoly.hpp"

using namespace valdist;

namespace {

QPoly qp(std::initializer_list<long> c) {
  std::vector<GaussRational> v;
  for (long x : c) v.emplace_back(x);
  return QPoly(std::move(v));
}

CPoly cp(std::initializer_list<double> c) {
  std::vector<Complex> v;
  for (double x : c) v.emplace_back(x, 0.0);
  return CPoly(std::move(v));
}

// Independent reference: product of linear factors, coefficient by coefficient.
CPoly from_roots(const std::vector<Complex>& roots, Complex lead) {
  std::vector<Complex> c{lead};
  for (auto r : roots) {
    std::vector<Complex> n(c.size() + 1, Complex(0.0, 0.0));
    for (std::size_t i = 0; i < c.size(); ++i) {
      n[i + 1] += c[i];
      n[i] -= r * c[i];
    }
    c = n;
  }
  return CPoly(c);
}

} // namespace

TEST(UPoly, Derivative) {
  EXPECT_EQ(qp({1, 0, 1}).derivative(), qp({0, 2}));
  EXPECT_EQ(cp({1, 0, 1}).derivative(), cp({0, 2}));
  EXPECT_EQ(qp({7}).derivative().degree(), -1);
}

TEST(UPoly, ProductAndEval) {
  EXPECT_EQ(qp({-1, 1}) * qp({1, 1}), qp({-1, 0, 1}));
  EXPECT_EQ(qp({0, 0, 0, 1})(GaussRational(2)), GaussRational(8));
  EXPECT_DOUBLE_EQ(cp({0, 0, 0, 1}).eval(2.0).real(), 8.0);
}

TEST(UPoly, ComposeAndShift) {
  // (z+1)^2 composed with z-1 gives z^2
  EXPECT_EQ(qp({1, 2, 1}).compose(qp({-1, 1})), qp({0, 0, 1}));
  EXPECT_EQ(qp({0, 0, 1}).shift(GaussRational(3)), qp({9, 6, 1}));
}

TEST(UPoly, DivisionReconstructs) {
  QPoly a = qp({3, -2, 5, 1, 7});
  QPoly b = qp({1, 0, 2});
  auto [q, r] = a.divmod(b);
  EXPECT_EQ(q * b + r, a);
  EXPECT_LT(r.degree(), b.degree());
}

TEST(Gcd, ExactExamples) {
  EXPECT_EQ(poly_gcd(qp({-1, 0, 1}), qp({-1, 1})), qp({-1, 1}));
  EXPECT_EQ(poly_gcd(qp({0, 1}), qp({1, 1})), qp({1}));
  QPoly a = qp({-2, 1}).pow(2) * qp({1, 1});
  QPoly b = qp({-2, 1}) * qp({-3, 1});
  EXPECT_EQ(poly_gcd(a, b), qp({-2, 1}));
  EXPECT_THROW(poly_gcd(QPoly{}, QPoly{}), DomainError);
}

TEST(Gcd, FloatingExamples) {
  CPoly g = poly_gcd(cp({-1, 0, 1}), cp({-1, 1}), 1e-10);
  ASSERT_EQ(g.degree(), 1);
  EXPECT_NEAR(std::abs(g.coeff(0) + 1.0), 0.0, 1e-12);
  EXPECT_EQ(poly_gcd(cp({0, 1}), cp({1, 1}), 1e-10).degree(), 0);
  CPoly a = from_roots({2.0, 2.0, -1.0}, 1.0);
  CPoly b = from_roots({2.0, 3.0}, 1.0);
  CPoly h = poly_gcd(a, b, 1e-10);
  ASSERT_EQ(h.degree(), 1);
  EXPECT_NEAR(std::abs(h.coeff(0) + 2.0), 0.0, 1e-10);
}

TEST(Gcd, RandomExactDividesBoth) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> d(-5, 5);
  for (int t = 0; t < 30; ++t) {
    auto rnd = [&](int deg) {
      std::vector<GaussRational> c;
      for (int i = 0; i <= deg; ++i) c.emplace_back(Rational(d(rng)), Rational(d(rng)));
      c.back() = GaussRational(Rational(d(rng) == 0 ? 1 : 3), Rational(1));
      return QPoly(c);
    };
    QPoly common = rnd(2);
    QPoly p = common * rnd(3);
    QPoly q = common * rnd(2);
    QPoly g = poly_gcd(p, q);
    EXPECT_TRUE(p.divmod(g).second.is_zero());
    EXPECT_TRUE(q.divmod(g).second.is_zero());
    EXPECT_GE(g.degree(), 2);
  }
}

TEST(SquareFree, ExactYun) {
  QPoly p = qp({-1, 1}).pow(3) * qp({2, 1}).pow(2) * qp({5, 0, 1});
  auto fs = square_free_factors(p);
  ASSERT_EQ(fs.size(), 3u);
  EXPECT_EQ(fs[0].first, qp({5, 0, 1}));
  EXPECT_EQ(fs[0].second, 1);
  EXPECT_EQ(fs[1].first, qp({2, 1}));
  EXPECT_EQ(fs[1].second, 2);
  EXPECT_EQ(fs[2].first, qp({-1, 1}));
  EXPECT_EQ(fs[2].second, 3);
}

TEST(Roots, KnownValues) {
  auto r1 = roots_with_multiplicity(cp({1, -2, 1}));
  ASSERT_EQ(r1.size(), 1u);
  EXPECT_NEAR(std::abs(r1[0].root - 1.0), 0.0, 1e-10);
  EXPECT_EQ(r1[0].mult, 2);

  auto r2 = roots_with_multiplicity(cp({0, -1, 0, 1}));
  ASSERT_EQ(r2.size(), 3u);
  EXPECT_NEAR(std::abs(r2[0].root + 1.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(r2[1].root), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(r2[2].root - 1.0), 0.0, 1e-12);
  for (const auto& r : r2) EXPECT_EQ(r.mult, 1);

  EXPECT_TRUE(roots_with_multiplicity(cp({5})).empty());
  EXPECT_THROW(roots_with_multiplicity(CPoly{}), DomainError);
}

TEST(Roots, ExactMultiplicities) {
  QPoly p = qp({-1, 1}).pow(3) * qp({1, 0, 1}).pow(2) * qp({0, 1}).pow(4);
  auto rs = roots_with_multiplicity(p);
  int total = 0;
  for (const auto& r : rs) total += r.mult;
  EXPECT_EQ(total, p.degree());
  for (const auto& r : rs) {
    if (std::abs(r.root) < 1e-12) EXPECT_EQ(r.mult, 4);
    else if (std::abs(r.root - 1.0) < 1e-9) EXPECT_EQ(r.mult, 3);
    else EXPECT_EQ(r.mult, 2);
  }
}

TEST(Roots, ReexpansionReproducesPolynomial) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int deg = 1; deg <= 30; ++deg) {
    // well separated: jittered points on two circles
    std::vector<Complex> roots;
    for (int i = 0; i < deg; ++i) {
      double rad = (i % 2 == 0) ? 1.0 : 1.6;
      double th = 2.0 * M_PI * i / deg + 0.05 * u(rng);
      roots.push_back(std::polar(rad, th));
    }
    Complex lead(1.0 + 0.5 * u(rng), 0.3 * u(rng));
    CPoly p = from_roots(roots, lead);
    auto rs = roots_with_multiplicity(p);
    std::vector<Complex> flat;
    int total = 0;
    for (const auto& r : rs) {
      total += r.mult;
      for (int m = 0; m < r.mult; ++m) flat.push_back(r.root);
      double scale = 0.0;
      for (const auto& c : p.coeffs()) scale += std::abs(c) * std::pow(std::abs(r.root), &c - p.coeffs().data());
      EXPECT_LE(std::abs(p.eval(r.root)), 1e-10 * scale);
    }
    EXPECT_EQ(total, deg);
    CPoly q = from_roots(flat, p.leading());
    EXPECT_LE((q - p).max_abs_coeff() / p.max_abs_coeff(), 1e-8) << "degree " << deg;
  }
}

TEST(MPoly, RingAxiomsRandom) {
  auto reg = VarRegistry::indexed(3);
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> e(0, 2), c(-4, 4);
  auto rnd = [&] {
    QMPoly p(reg);
    for (int t = 0; t < 5; ++t) {
      Monomial m{e(rng), e(rng), e(rng)};
      p.add_term(m, Rational(c(rng)));
    }
    return p;
  };
  for (int t = 0; t < 25; ++t) {
    QMPoly a = rnd(), b = rnd(), d = rnd();
    EXPECT_EQ((a * b) * d, a * (b * d));
    EXPECT_EQ(a * (b + d), a * b + a * d);
    EXPECT_EQ(a * b, b * a);
    EXPECT_EQ((a + b) - b, a);
    if (!b.is_zero()) EXPECT_EQ(divide_exact(a * b, b), a);
  }
}

TEST(MPoly, RegistryMismatch) {
  auto r1 = VarRegistry::indexed(2);
  auto r2 = VarRegistry::indexed(3);
  QMPoly x = QMPoly::variable(r1, 0);
  QMPoly y = QMPoly::variable(r2, 0);
  EXPECT_THROW(x + y, RegistryMismatch);
  EXPECT_THROW(x * y, RegistryMismatch);
  // structurally equal registries are compatible
  auto r3 = VarRegistry::indexed(2);
  EXPECT_NO_THROW(x + QMPoly::variable(r3, 1));
}

TEST(MPoly, CanonicalOrderGivesStructuralEquality) {
  auto reg = VarRegistry::indexed(2);
  QMPoly x = QMPoly::variable(reg, 0), y = QMPoly::variable(reg, 1);
  QMPoly a = x * x + y * x + y;
  QMPoly b = y + x * y + x.pow(2);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_THROW(divide_exact(x + y, x), DomainError);
}
