#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "pairent/bounds.hpp"
#include "pairent/convexity.hpp"

using namespace pairent;

TEST(HalfChord, Examples) {
  const auto e = hc_and_f(0.5);
  EXPECT_NEAR(e.hc, 1.0, 1e-12);
  EXPECT_NEAR(e.f, 0.5, 1e-15);

  const auto z = hc_and_f(0.0);
  EXPECT_EQ(z.hc, 0.0);
  EXPECT_EQ(z.f, 0.0);
  const auto tiny = hc_and_f(1e-9);
  EXPECT_LT(tiny.hc, 1e-15);
  EXPECT_LT(tiny.f, 1e-17);

  const auto p = hc_and_f(0.4);
  EXPECT_NEAR(p.f, 0.2, 1e-15);
  EXPECT_NEAR(p.hc, 0.721928094887362348, 1e-14);  // H2(0.2)
  EXPECT_THROW(hc_and_f(0.51), Error);
  EXPECT_THROW(hc_and_f(-0.01), Error);
}

TEST(HalfChord, AnalyticDerivativesMatchFiniteDifferences) {
  const double h = 1e-6;
  for (int k = 1; k < 1000; ++k) {
    const double r = 0.01 + 0.48 * k / 1000.0;
    const auto t = hc_and_f(r);
    const auto p = hc_and_f(r + h);
    const auto m = hc_and_f(r - h);
    EXPECT_NEAR(t.hc1, (p.hc - m.hc) / (2 * h), 1e-5) << r;
    EXPECT_NEAR(t.f1, (p.f - m.f) / (2 * h), 1e-5) << r;
    // Second differences of values lose ~1e-4 at h = 1e-6; compare first derivatives instead.
    EXPECT_NEAR(t.hc2, (p.hc1 - m.hc1) / (2 * h), 1e-5 * std::max(1.0, std::abs(t.hc2))) << r;
    EXPECT_NEAR(t.f2, (p.f1 - m.f1) / (2 * h), 1e-5 * std::max(1.0, std::abs(t.f2))) << r;
  }
}

TEST(HalfChord, EndpointBandsUseOneSidedDifferences) {
  const auto near_half = hc_and_f(0.5 - 5e-7);
  EXPECT_TRUE(std::isfinite(near_half.hc1));
  EXPECT_GT(near_half.hc1, 0.0);
  const auto near_zero = hc_and_f(5e-7);
  EXPECT_TRUE(std::isfinite(near_zero.hc2));
  EXPECT_NEAR(near_zero.f1, 2 * 5e-7, 1e-6);
}

TEST(Sylvester, Examples) {
  for (double r : {0.05, 0.2, 0.4, 0.49}) {
    const auto p = sylvester_point(r, 1.0);
    EXPECT_EQ(p.beta, 0.0);
    EXPECT_NEAR(p.gamma_, p.eta, 1e-12);
    EXPECT_NEAR(p.det, p.alpha * p.gamma_ - p.beta * p.beta, 1e-15);
  }
  // mpmath: d^2/dr^2 H2((1 + sqrt(1 - 4 r^2))/2) at r = 0.4 is 2.48857361975225844 bits.
  const auto a = sylvester_point(0.4, 1.0);
  EXPECT_NEAR(a.alpha, 2.48857361975225844, 1e-10);
  EXPECT_NEAR(a.alpha, a.HC2, 1e-12);

  const auto q = sylvester_point(0.25, 0.5);
  EXPECT_GE(q.alpha, 0.0);
  EXPECT_GE(q.eta, 0.0);
  EXPECT_GE(q.det, 0.0);
  EXPECT_THROW(sylvester_point(0.5, 0.5), Error);
  EXPECT_THROW(sylvester_point(0.2, 0.0), Error);
}

TEST(Sylvester, GradientEntriesMatchFiniteDifferences) {
  // G_nm are derivatives of F_k(g1, g2) = g2^2 [H_C(g1) - f(g1) log g2^2] in nats.
  const auto fk = [](double g1, double g2) {
    const auto t = hc_and_f(g1, LogBase::natural);
    return g2 * g2 * (t.hc - t.f * std::log(g2 * g2));
  };
  const double h = 1e-5;
  for (double r : {0.1, 0.25, 0.4}) {
    for (double g : {0.3, 0.6, 0.9}) {
      const auto p = sylvester_point(r, g, LogBase::natural);
      EXPECT_NEAR(p.G10, (fk(r + h, g) - fk(r - h, g)) / (2 * h), 1e-6);
      EXPECT_NEAR(p.G01, (fk(r, g + h) - fk(r, g - h)) / (2 * h), 1e-6);
      EXPECT_NEAR(p.G20, (fk(r + h, g) - 2 * fk(r, g) + fk(r - h, g)) / (h * h), 1e-3);
      EXPECT_NEAR(p.G02, (fk(r, g + h) - 2 * fk(r, g) + fk(r, g - h)) / (h * h), 1e-3);
      EXPECT_NEAR(p.G11, (fk(r + h, g + h) - fk(r + h, g - h) - fk(r - h, g + h) + fk(r - h, g - h)) / (4 * h * h),
                  1e-3);
    }
  }
}

TEST(Sylvester, BaseOnlyScales) {
  const auto b2 = sylvester_point(0.3, 0.7, LogBase::two);
  const auto be = sylvester_point(0.3, 0.7, LogBase::natural);
  EXPECT_NEAR(be.alpha, b2.alpha * std::log(2.0), 1e-12);
  EXPECT_NEAR(be.eta, b2.eta * std::log(2.0), 1e-12);
  EXPECT_NEAR(be.det, b2.det * std::log(2.0) * std::log(2.0), 1e-12);
}

TEST(Grid, PassesAndIsStableUnderRefinement) {
  const auto c100 = scan_grid(100, 1e-6);
  const auto c200 = scan_grid(200, 1e-6);
  const auto coarse = scan_grid(120, 1e-3);
  EXPECT_TRUE(c100.pass);
  EXPECT_TRUE(c200.pass);
  EXPECT_TRUE(coarse.pass);
  EXPECT_TRUE(c100.failures.empty());
  EXPECT_GE(c200.min_G10, -1e-9);
  EXPECT_GE(c200.min_G01, -1e-9);
  EXPECT_EQ(c200.grid_size, 200u);
  EXPECT_THROW(scan_grid(99, 1e-6), Error);
  EXPECT_THROW(scan_grid(100, 2e-3), Error);
}

TEST(Grid, DumpOrderAndDeterminism) {
  std::vector<ConvexityPoint> a, b;
  scan_grid(100, 1e-6, LogBase::two, &a);
  scan_grid(100, 1e-6, LogBase::two, &b);
  ASSERT_EQ(a.size(), 10000u);
  EXPECT_EQ(a[0].r, grid_r(0, 100, 1e-6));
  EXPECT_EQ(a[1].g2, grid_g2(1, 100, 1e-6));
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].det, b[i].det);
}

TEST(Grid, SingleComponentLine) {
  for (int i = 1; i < 1000; ++i) {
    const double r = 0.5 * i / 1000.0;
    const auto p = sylvester_point(r, 1.0);
    EXPECT_GE(p.det, -1e-9);
    EXPECT_NEAR(p.det, p.alpha * p.eta, 1e-9 * std::max(1.0, std::abs(p.det)));
  }
}

TEST(EtaDecomposition, BothBracketsNonNegative) {
  for (int i = 1; i < 10000; ++i) {
    const double r = 0.5 * i / 10000.0;
    const auto t = hc_and_f(r, LogBase::natural);
    EXPECT_GE(r * t.f1 - 2 * t.f, -1e-9) << r;
    EXPECT_GE(r * t.hc1 - 2 * t.hc + 2 * t.f, -1e-9) << r;
  }
}

TEST(PofZ, EndpointsAndSign) {
  EXPECT_NEAR(p_of_z(0.5), 0.0, 1e-10);
  EXPECT_NEAR(p_of_z(1.0), 0.0, 1e-10);
  EXPECT_NEAR(p_of_z(0.75), 0.143756573533541556, 1e-12);  // mpmath, bracket in nats over ln 2
  for (int i = 0; i <= 10000; ++i) EXPECT_GE(p_of_z(0.5 + 0.5 * i / 10000.0), -1e-9);
  EXPECT_THROW(p_of_z(0.4), Error);
}

TEST(PofZ, MatchesUnreducedForm) {
  for (double z : {0.55, 0.7, 0.9, 0.99}) {
    const double r = std::sqrt(z * (1 - z));
    // The bracket mixes entropies with the probability f, so it only holds in nats.
    const auto t = hc_and_f(r, LogBase::natural);
    EXPECT_NEAR(p_of_z(z), (2 * z - 1) * (r * t.hc1 - 2 * t.hc + 2 * t.f) / std::log(2.0), 1e-9);
  }
}

TEST(FComponents, SumToF) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  for (std::size_t m = 1; m <= 6; ++m)
    for (int t = 0; t < 500; ++t) {
      std::vector<double> x(m);
      double q = 0.0;
      for (auto& v : x) {
        v = u(rng);
        q += v * v;
      }
      const double scale = 0.499 * u(rng) / std::sqrt(q);
      for (auto& v : x) v *= scale;
      double sum = 0.0;
      for (std::size_t k = 0; k < m; ++k) sum += f_component(x, k);
      EXPECT_NEAR(sum, bound_F_of_moduli(x), 1e-9);
    }
}

TEST(Hessian, Examples) {
  // d = 2: F(x) = H2((1 + sqrt(1 - 4x^2))/2) = H_C(x), so F'' = H_C''.
  const double one_d = hessian_fd_check(std::vector<double>{0.3});
  EXPECT_GE(one_d, 0.0);
  EXPECT_NEAR(one_d, hc_and_f(0.3).hc2, 1e-4);

  EXPECT_GE(hessian_fd_check(std::vector<double>(4, 1e-3)), -1e-6);
  EXPECT_THROW(hessian_fd_check(std::vector<double>{0.5}), Error);
  EXPECT_THROW(hessian_fd_check(std::vector<double>{0.2, 0.0}), Error);
}

TEST(Hessian, RandomInteriorPoints) {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t d = 3; d <= 5; ++d) {
    for (int t = 0; t < 50; ++t) {
      std::vector<double> x(d - 1);
      double q = 0.0;
      for (auto& v : x) {
        v = 0.05 + u(rng);
        q += v * v;
      }
      const double scale = std::sqrt((0.25 - 1e-3) * u(rng) / q);
      for (auto& v : x) v = std::max(2e-4, v * scale);
      EXPECT_GE(hessian_fd_check(x), -1e-6);
    }
  }
}
