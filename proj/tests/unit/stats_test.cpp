#include <gtest/gtest.h>

#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <random>

#include "wristmood/error.hpp"
#include "wristmood/stats.hpp"

namespace wristmood::stats {
namespace {

TEST(Descriptive, MeanAndSampleStd) {
  EXPECT_DOUBLE_EQ(mean({1, 2, 3, 4}), 2.5);
  EXPECT_NEAR(sample_std({2, 4, 4, 4, 5, 5, 7, 9}), std::sqrt(32.0 / 7.0), 1e-12);
  EXPECT_EQ(sample_std({3.0}), 0.0);
}

TEST(Anova, HandExample) {
  const auto r = one_way_anova({{0, 2}, {1, 3}});
  EXPECT_DOUBLE_EQ(r.F, 0.5);
  EXPECT_EQ(r.df_between, 1);
  EXPECT_EQ(r.df_within, 2);
  EXPECT_NEAR(r.p, 0.5528, 1e-3);
  // two-sided t test with pooled variance on the same data
  boost::math::students_t t(2);
  const double p_t = 2.0 * boost::math::cdf(boost::math::complement(t, std::sqrt(0.5)));
  EXPECT_NEAR(r.p, p_t, 1e-10);
}

TEST(Anova, FEqualsTSquared) {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> g;
  std::uniform_int_distribution<int> size(2, 12);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> a(size(rng)), b(size(rng));
    for (auto& v : a) v = g(rng);
    for (auto& v : b) v = g(rng) + 0.5;
    const double na = a.size(), nb = b.size();
    const double ma = mean(a), mb = mean(b);
    double ss = 0;
    for (double v : a) ss += (v - ma) * (v - ma);
    for (double v : b) ss += (v - mb) * (v - mb);
    const double df = na + nb - 2;
    const double sp2 = ss / df;
    const double tstat = (ma - mb) / std::sqrt(sp2 * (1 / na + 1 / nb));
    const auto r = one_way_anova({a, b});
    EXPECT_NEAR(r.F, tstat * tstat, 1e-9 * std::max(1.0, r.F));
    boost::math::students_t dist(df);
    const double p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(tstat)));
    EXPECT_NEAR(r.p, p, 1e-9);
  }
}

TEST(Anova, DegenerateAndErrors) {
  const auto same = one_way_anova({{1, 1}, {1, 1}});
  EXPECT_TRUE(same.degenerate);
  EXPECT_EQ(same.p, 1.0);
  const auto apart = one_way_anova({{1, 1}, {2, 2}});
  EXPECT_TRUE(apart.degenerate);
  EXPECT_EQ(apart.p, 0.0);
  EXPECT_THROW(one_way_anova({{1, 2}}), Error);
  EXPECT_THROW(one_way_anova({{1, 2}, {3}}), Error);
}

TEST(StudentizedRange, PublishedCriticalValues) {
  // Harter (1960) / standard HSD tables
  EXPECT_NEAR(studentized_range_quantile(0.05, 3, 12), 3.773, 0.01);
  EXPECT_NEAR(studentized_range_quantile(0.05, 4, 20), 3.958, 0.01);
  EXPECT_NEAR(studentized_range_quantile(0.01, 3, 12), 5.046, 0.01);
  EXPECT_NEAR(studentized_range_quantile(0.05, 5, 60), 3.977, 0.01);
  EXPECT_NEAR(studentized_range_quantile(0.001, 3, 30), 5.695, 0.02);
}

TEST(StudentizedRange, TwoMeansReduceToT) {
  for (double df : {3.0, 8.0, 25.0}) {
    boost::math::students_t t(df);
    for (double alpha : {0.05, 0.01}) {
      const double expected = std::sqrt(2.0) * boost::math::quantile(boost::math::complement(t, alpha / 2));
      EXPECT_NEAR(studentized_range_quantile(alpha, 2, df), expected, 1e-4 * expected);
    }
  }
}

TEST(StudentizedRange, CdfMonotone) {
  double prev = 0.0;
  for (double q = 0.0; q <= 8.0; q += 0.25) {
    const double p = studentized_range_cdf(q, 4, 15);
    EXPECT_GE(p, prev - 1e-9);
    EXPECT_GE(p, 0.0);
    EXPECT_LE(p, 1.0);
    prev = p;
  }
  EXPECT_NEAR(studentized_range_cdf(0.0, 3, 10), 0.0, 1e-12);
  EXPECT_GT(studentized_range_cdf(20.0, 3, 10), 0.9999);
}

TEST(Tukey, PairsAndSignificance) {
  const std::vector<std::vector<double>> groups = {
      {0.50, 0.52, 0.49, 0.51}, {0.51, 0.50, 0.52, 0.49}, {0.80, 0.82, 0.79, 0.81}};
  const auto r = tukey_hsd(groups);
  ASSERT_EQ(r.pairs.size(), 3u);
  ASSERT_EQ(r.critical.size(), 3u);
  EXPECT_LT(r.critical[0], r.critical[1]);
  EXPECT_LT(r.critical[1], r.critical[2]);
  EXPECT_EQ(r.pairs[0].i, 0u);
  EXPECT_EQ(r.pairs[0].j, 1u);
  EXPECT_FALSE(r.pairs[0].significant[0]);
  EXPECT_TRUE(r.pairs[1].significant[0]);
  EXPECT_TRUE(r.pairs[2].significant[2]);
  EXPECT_NEAR(r.pairs[1].mean_diff, 0.505 - 0.805, 1e-12);
  EXPECT_NEAR(r.critical[0], studentized_range_quantile(0.05, 3, 9), 1e-12);
}

TEST(Tukey, UnequalSizesUseKramer) {
  const std::vector<std::vector<double>> groups = {{1, 2, 3}, {2, 3, 4, 5, 6}};
  const auto r = tukey_hsd(groups);
  // q = |d| / sqrt(MSW/2 (1/n1 + 1/n2)); MSW = (2 + 10) / 6 = 2
  EXPECT_NEAR(r.pairs[0].q, 2.0 / std::sqrt(1.0 * (1.0 / 3 + 1.0 / 5)), 1e-12);
}

}  // namespace
}  // namespace wristmood::stats
