#include <cmath>

#include <gtest/gtest.h>

#include "gcrp/error.hpp"
#include "gcrp/rng.hpp"
#include "gcrp/stats.hpp"

using namespace gcrp;
using namespace gcrp::stats;

TEST(Wilson, ReferenceInterval) {
  const auto w = wilson_interval(5, 100);
  EXPECT_NEAR(w.lo, 0.021543679154367972817, 1e-14);
  EXPECT_NEAR(w.hi, 0.11175046923191913568, 1e-14);
}

TEST(Wilson, Extremes) {
  const auto zero = wilson_interval(0, 50);
  EXPECT_EQ(zero.lo, 0.0);
  EXPECT_GT(zero.hi, 0.0);
  const auto all = wilson_interval(50, 50);
  EXPECT_NEAR(all.hi, 1.0, 1e-15);
  EXPECT_LT(all.lo, 1.0);
}

TEST(LinearFit, ExactLine) {
  const auto f = linear_fit({1, 2, 3, 4}, {3, 5, 7, 9});
  EXPECT_NEAR(f.slope, 2.0, 1e-14);
  EXPECT_NEAR(f.intercept, 1.0, 1e-14);
  EXPECT_NEAR(f.r_squared, 1.0, 1e-14);
  EXPECT_NEAR(f.slope_stderr, 0.0, 1e-12);
  EXPECT_THROW(linear_fit({1, 1}, {2, 3}), DomainError);
}

TEST(Summary, QuantilesAndMoments) {
  const std::vector<double> v{4, 1, 3, 2};
  EXPECT_EQ(median(v), 2.5);
  EXPECT_EQ(quantile(v, 0.0), 1.0);
  EXPECT_EQ(quantile(v, 1.0), 4.0);
  EXPECT_NEAR(quantile(v, 0.9), 3.7, 1e-15);
  EXPECT_EQ(mean(v), 2.5);
  EXPECT_NEAR(stddev(v), std::sqrt(5.0 / 3.0), 1e-15);
}

TEST(TotalVariation, DisjointAndEqual) {
  EXPECT_EQ(tv_distance({{1, 1.0}}, {{2, 1.0}}), 1.0);
  EXPECT_EQ(tv_distance({{1, 0.5}, {2, 0.5}}, {{1, 0.5}, {2, 0.5}}), 0.0);
  EXPECT_NEAR(tv_distance({{1, 0.7}, {2, 0.3}}, {{1, 0.5}, {2, 0.5}}), 0.2, 1e-15);
}

TEST(ChiSquare, SurvivalReference) {
  EXPECT_NEAR(chi_square_survival(3.5, 4), 0.47787834448872409837, 1e-14);
}

TEST(ChiSquare, UniformDieIsAccepted) {
  Rng rng(8);
  std::map<int, std::int64_t> obs;
  std::map<int, double> probs;
  for (int f = 0; f < 6; ++f) probs[f] = 1.0 / 6.0;
  for (int i = 0; i < 60000; ++i) ++obs[static_cast<int>(rng.uniform() * 6)];
  const auto r = chi_square_gof(obs, probs);
  EXPECT_EQ(r.dof, 5);
  EXPECT_GT(r.p_value, 1e-3);
}

TEST(ChiSquare, PoolsSmallCells) {
  std::map<int, std::int64_t> obs{{0, 50}, {1, 48}, {2, 2}};
  std::map<int, double> probs{{0, 0.5}, {1, 0.48}, {2, 0.02}};
  const auto r = chi_square_gof(obs, probs);
  EXPECT_EQ(r.dof, 1);  // the expected-2 cell is merged into its neighbour
  EXPECT_NEAR(r.statistic, 0.0, 1e-12);
}

TEST(ChiSquare, UnexpectedCellForcesRejection) {
  std::map<int, std::int64_t> obs{{0, 100}, {7, 1}};
  std::map<int, double> probs{{0, 1.0}};
  EXPECT_EQ(chi_square_gof(obs, probs).p_value, 0.0);
}
