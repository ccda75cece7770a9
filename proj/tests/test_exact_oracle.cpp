#include <cmath>

#include <gtest/gtest.h>

#include "gcrp/ensemble.hpp"
#include "gcrp/error.hpp"
#include "gcrp/exact_oracle.hpp"
#include "gcrp/normalizers.hpp"

using namespace gcrp;

// Exact rational laws at alpha = theta = 1/2, from an independent
// fraction-arithmetic enumeration.
TEST(Enumerate, RationalLawAtThree) {
  const auto laws = enumerate(validate_params(0.5, 0.5), 3);
  const auto& law = laws[2];
  EXPECT_NEAR(law.probs.at({1, 1, 1}), 0.4, 1e-15);
  EXPECT_NEAR(law.probs.at({2, 1}), 0.4, 1e-15);
  EXPECT_NEAR(law.probs.at({3}), 0.2, 1e-15);
  EXPECT_NEAR(law.mean_v, 2.2, 1e-15);
}

TEST(Enumerate, RationalLawAtFour) {
  const auto law = enumerate(validate_params(0.5, 0.5), 4).back();
  EXPECT_EQ(law.probs.size(), 5u);
  EXPECT_NEAR(law.probs.at({1, 1, 1, 1}), 8.0 / 35, 1e-15);
  EXPECT_NEAR(law.probs.at({2, 1, 1}), 12.0 / 35, 1e-15);
  EXPECT_NEAR(law.probs.at({2, 2}), 2.0 / 35, 1e-15);
  EXPECT_NEAR(law.probs.at({3, 1}), 8.0 / 35, 1e-15);
  EXPECT_NEAR(law.probs.at({4}), 1.0 / 7, 1e-15);
  EXPECT_NEAR(law.mean_v, 93.0 / 35, 1e-14);
  EXPECT_NEAR(law.count_marginal.at(1).at(2), 12.0 / 35, 1e-15);
  EXPECT_NEAR(law.count_marginal.at(1).at(0), 0.2, 1e-15);
}

TEST(Enumerate, LawsAreNormalisedAndMartingalesCentred) {
  for (const auto& p : {validate_params(0.5, 0.5), validate_params(0.25, 1.0), validate_params(0.75, -0.25)}) {
    const auto laws = enumerate(p, 10);
    for (const auto& law : laws) {
      EXPECT_NEAR(law.total(), 1.0, 1e-14);
      EXPECT_NEAR(law.mean_martingale, 0.0, 1e-14);
      EXPECT_NEAR(law.mean_v_over_phi, theta_seq_V(law.n, p), 1e-13);
      for (const auto& [shape, prob] : law.probs) {
        std::int64_t sum = 0;
        for (auto s : shape) sum += s;
        ASSERT_EQ(sum, law.n);
        ASSERT_GT(prob, 0.0);
      }
    }
  }
}

TEST(Enumerate, MeanFirstClassMatchesDrift) {
  // E[N_n(1)]/psi_n(1) = theta_n(1) + alpha sum E[V_i]/((i+theta) psi_{i+1}(1)).
  const auto p = validate_params(0.5, 0.5);
  const auto laws = enumerate(p, 8);
  double lagged = 0.0;
  for (std::int64_t n = 1; n <= 8; ++n) {
    const auto& law = laws[n - 1];
    const double lhs = law.mean_count.at(1) / std::exp(log_psi(n, 1, p));
    EXPECT_NEAR(lhs, theta_seq_1(n, p) + lagged, 1e-12) << n;
    lagged += p.alpha() * law.mean_v / ((n + p.theta()) * std::exp(log_psi(n + 1, 1, p)));
  }
}

TEST(Enumerate, OtherRegimes) {
  const auto bounded = enumerate(validate_params(-0.5, 1.5), 8);
  for (const auto& [shape, prob] : bounded.back().probs) EXPECT_LE(shape.size(), 3u);
  EXPECT_NEAR(bounded.back().total(), 1.0, 1e-14);
  const auto logarithmic = enumerate(validate_params(0.0, 2.0), 6);
  // Ewens: E[V_n] = sum_{i<n} theta/(theta+i).
  double ev = 0;
  for (int i = 0; i < 6; ++i) ev += 2.0 / (2.0 + i);
  EXPECT_NEAR(logarithmic.back().mean_v, ev, 1e-14);
}

TEST(Enumerate, CapExceeded) {
  EXPECT_THROW(enumerate(validate_params(0.5, 0.5), 13), CapExceeded);
  EXPECT_NO_THROW(enumerate(validate_params(0.5, 0.5), 4, 4));
}

TEST(Enumerate, PushForwardChains) {
  const auto p = validate_params(0.25, 1.0);
  const auto laws = enumerate(p, 6);
  const auto next = push_forward(laws[4], p);
  ASSERT_EQ(next.probs.size(), laws[5].probs.size());
  for (const auto& [s, prob] : laws[5].probs) EXPECT_NEAR(next.probs.at(s), prob, 1e-15);
}

TEST(Shapes, RoundTrip) {
  const Shape s{4, 2, 2, 1};
  const auto st = shape_to_state(s);
  EXPECT_EQ(st.n, 9);
  EXPECT_EQ(st.num_parts, 4);
  EXPECT_EQ(st.count(2), 2);
  EXPECT_EQ(state_to_shape(st), s);
}

TEST(CompareToMc, SimulatorMatchesOracle) {
  const auto p = validate_params(0.5, 0.5);
  const auto laws = enumerate(p, 6);
  const auto hists = run_shape_histograms(p, 6, 200000, 31);
  for (std::int64_t n = 2; n <= 6; ++n) {
    const auto cmp = compare_to_mc(laws[n - 1], hists[n - 1]);
    EXPECT_EQ(cmp.samples, 200000);
    EXPECT_LT(cmp.tv_v, 0.01);
    EXPECT_LT(cmp.tv_n1, 0.01);
    EXPECT_GT(cmp.chi_square_p_shape, 1e-4);
  }
}

TEST(CompareToMc, DetectsWrongParameters) {
  const auto laws = enumerate(validate_params(0.5, 0.5), 6);
  const auto hists = run_shape_histograms(validate_params(0.4, 0.5), 6, 100000, 3);
  const auto cmp = compare_to_mc(laws[5], hists[5]);
  EXPECT_LT(cmp.chi_square_p_shape, 1e-6);
}
