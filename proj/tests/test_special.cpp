#include <cmath>

#include <gtest/gtest.h>

#include "gcrp/special.hpp"

using namespace gcrp::special;

// Reference values computed with mpmath at 40 digits.
TEST(LogGammaRatio, LargeArgumentKeepsDigits) {
  EXPECT_NEAR(log_gamma_ratio(1e7, 0.5), 8.0590478129791598941, 1e-13);
  EXPECT_NEAR(log_gamma_ratio(1e6 + 0.5, -0.25), -3.4538776082410763385, 1e-13);
}

TEST(LogGammaRatio, SmallArgumentsMatchLogGamma) {
  for (double x : {0.1, 0.5, 1.0, 2.5, 7.0}) {
    for (double a : {-0.05, 0.3, 1.0, 4.5}) {
      EXPECT_NEAR(log_gamma_ratio(x, a), std::lgamma(x + a) - std::lgamma(x), 1e-12) << x << " " << a;
    }
  }
}

TEST(LogGammaRatio, ZeroShiftIsZero) { EXPECT_EQ(log_gamma_ratio(123.4, 0.0), 0.0); }

TEST(LogGamma, HalfIsLogSqrtPi) { EXPECT_NEAR(log_gamma(0.5), 0.5 * std::log(M_PI), 1e-15); }

TEST(Binet, MatchesReference) {
  EXPECT_NEAR(binet_remainder(1.0), 0.08106146679532725822, 1e-14);
  EXPECT_NEAR(binet_remainder(10.0), 0.0083305634333628712565, 1e-15);
}

TEST(Binet, BoundedByOneOverTwelveX) {
  for (double x = 0.1; x < 1e4; x *= 1.37) {
    const double mu = binet_remainder(x);
    EXPECT_GT(mu, 0.0);
    EXPECT_LE(mu, 1.0 / (12.0 * x));
  }
}

TEST(LogAddExp, StableForLargeGaps) {
  EXPECT_NEAR(log_add_exp(0.0, 0.0), std::log(2.0), 1e-15);
  EXPECT_EQ(log_add_exp(1000.0, -1000.0), 1000.0);
  EXPECT_NEAR(log_add_exp(-INFINITY, 3.0), 3.0, 0.0);
}
