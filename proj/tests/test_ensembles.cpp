#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <numeric>

#include "pairent/ensembles.hpp"
#include "pairent/parallel.hpp"

using namespace pairent;

TEST(SampleEnsemble, SingletonIsPure) {
  const auto s = sample_ensemble(4, 1, 99);
  ASSERT_EQ(s.members(), 1u);
  EXPECT_DOUBLE_EQ(s.weights[0], 1.0);
  EXPECT_NEAR(s.avg_entropy, entropy_pure(s.states[0]), 1e-15);
  const auto ev = hermitian_eigenvalues(s.rho.entries());
  EXPECT_NEAR(ev.back(), 1.0, 1e-12);
}

TEST(SampleEnsemble, Deterministic) {
  const auto a = sample_ensemble(5, 7, 1234);
  const auto b = sample_ensemble(5, 7, 1234);
  EXPECT_EQ(a.weights, b.weights);
  EXPECT_EQ(a.rho.entries().max_abs_diff(b.rho.entries()), 0.0);
  EXPECT_EQ(a.avg_entropy, b.avg_entropy);
  const auto c = sample_ensemble(5, 7, 1235);
  EXPECT_NE(a.weights, c.weights);
}

TEST(SampleEnsemble, ValidMixture) {
  const auto s = sample_ensemble(3, 6, 42);
  EXPECT_NO_THROW(validate_density(s.rho.entries()));
  EXPECT_NEAR(std::accumulate(s.weights.begin(), s.weights.end(), 0.0), 1.0, 1e-12);
  CMatrix rebuilt(3, 3);
  for (std::size_t k = 0; k < s.members(); ++k) {
    EXPECT_GE(s.weights[k], 0.0);
    const auto r = density_of_pure(s.states[k]);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) {
        rebuilt(i, j) += s.weights[k] * r(i, j);
        EXPECT_GE(s.states[k][i].real(), 0.0);
        EXPECT_EQ(s.states[k][i].imag(), 0.0);
      }
  }
  EXPECT_LE(rebuilt.max_abs_diff(s.rho.entries()), 1e-12);
}

TEST(KPolicy, Ranges) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const auto a = sample_ensemble(5, KPolicy{}, seed);
    EXPECT_GE(a.members(), 1u);
    EXPECT_LE(a.members(), 5u);
    const auto b = sample_ensemble(5, KPolicy::dim_to_twice_dim(), seed);
    EXPECT_GE(b.members(), 5u);
    EXPECT_LE(b.members(), 10u);
    EXPECT_EQ(sample_ensemble(5, KPolicy::fixed(3), seed).members(), 3u);
  }
  EXPECT_EQ(KPolicy{}.describe(), "uniform{1..d}");
  EXPECT_EQ(KPolicy::fixed(4).describe(), "fixed:4");
}

TEST(Seeds, DerivedPerSample) {
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
  static_assert(derive_seed(7, 3) == derive_seed(7, 3));
}

TEST(Fig1, NoViolationsAndEmptyRun) {
  for (std::size_t d : {3u, 4u, 5u}) {
    const auto r = run_fig1_experiment(d, 2000, KPolicy{}, 5);
    EXPECT_EQ(r.records.size(), 2000u);
    EXPECT_EQ(r.g_violations, 0u);
    EXPECT_EQ(r.f_violations, 0u);
    for (const auto& rec : r.records) EXPECT_LE(rec.F, rec.avg_entropy + 1e-9);
  }
  const auto wide = run_fig1_experiment(4, 1000, KPolicy::dim_to_twice_dim(), 6);
  EXPECT_EQ(wide.f_violations, 0u);
  EXPECT_EQ(wide.g_violations, 0u);
  const auto empty = run_fig1_experiment(3, 0, KPolicy{}, 5);
  EXPECT_TRUE(empty.records.empty());
  EXPECT_EQ(empty.g_violations, 0u);
}

TEST(Fig1, IndependentOfThreadCount) {
  const auto many = run_fig1_experiment(4, 300, KPolicy{}, 17);
  ::setenv("PAIRENT_THREADS", "1", 1);
  const auto one = run_fig1_experiment(4, 300, KPolicy{}, 17);
  ::unsetenv("PAIRENT_THREADS");
  ASSERT_EQ(many.records.size(), one.records.size());
  for (std::size_t i = 0; i < one.records.size(); ++i) {
    EXPECT_EQ(many.records[i].seed, one.records[i].seed);
    EXPECT_EQ(many.records[i].avg_entropy, one.records[i].avg_entropy);
    EXPECT_EQ(many.records[i].G, one.records[i].G);
  }
}

TEST(Fig2, SortedWithCurveAndFractions) {
  const auto r = run_fig2_experiment(3, 3000, 8);
  for (std::size_t i = 1; i < r.records.size(); ++i)
    EXPECT_LE(r.records[i - 1].negativity, r.records[i].negativity);
  ASSERT_EQ(r.s_curve.size(), kCurvePoints);
  EXPECT_EQ(r.s_curve.front().second, 0.0);
  EXPECT_NEAR(r.s_curve.back().second, std::log2(3.0), 1e-12);
  EXPECT_GE(r.frac_F + r.frac_G + r.frac_s, 1.0 - 1e-12);

  // Near the maximally entangled corner s is exact and dominates.
  std::size_t high = 0, s_wins = 0;
  for (const auto& rec : r.records)
    if (rec.negativity > 0.9) {
      ++high;
      if (rec.s >= rec.best - kTieSlack) ++s_wins;
    }
  ASSERT_GT(high, 0u);
  EXPECT_GT(2 * s_wins, high);
}

TEST(Fig2, SDecaysWithDimension) {
  double prev = 1e300;
  for (std::size_t d : {8u, 16u, 32u, 64u}) {
    const double s = bound_s(1.0, d);
    EXPECT_LT(s, prev);
    prev = s;
  }
}
