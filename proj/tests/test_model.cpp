#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "gcrp/error.hpp"
#include "gcrp/model.hpp"

using namespace gcrp;

TEST(ValidateParams, ClassifiesRegimes) {
  EXPECT_EQ(validate_params(0.5, 0.5).regime(), Regime::Polynomial);
  EXPECT_EQ(validate_params(0.0, 1.0).regime(), Regime::Logarithmic);
  const auto bounded = validate_params(-0.5, 1.5);
  EXPECT_EQ(bounded.regime(), Regime::BoundedParts);
  EXPECT_EQ(bounded.part_limit(), 3);
}

TEST(ValidateParams, RejectsOutsideRegimes) {
  EXPECT_THROW(validate_params(0.5, -0.6), InvalidRegime);
  EXPECT_THROW(validate_params(0.5, -0.5), InvalidRegime);
  EXPECT_THROW(validate_params(1.0, 0.5), InvalidRegime);
  EXPECT_THROW(validate_params(0.0, 0.0), InvalidRegime);
  EXPECT_THROW(validate_params(-0.5, 1.2), InvalidRegime);
  EXPECT_THROW(validate_params(NAN, 1.0), InvalidRegime);
}

TEST(ValidateParams, ErrorCarriesRegimeTable) {
  try {
    validate_params(1.0, 0.5);
    FAIL();
  } catch (const InvalidRegime& e) {
    EXPECT_NE(std::string(e.what()).find(regime_table()), std::string::npos);
  }
}

TEST(ValidateParams, SnapsBoundedTheta) {
  const auto p = validate_params(-0.1, 0.30000000000000004);
  EXPECT_EQ(p.part_limit(), 3);
  EXPECT_EQ(p.theta(), -3 * p.alpha());
}

TEST(InitialState, SingleCustomer) {
  const auto s = initial_state();
  EXPECT_EQ(s.n, 1);
  EXPECT_EQ(s.num_parts, 1);
  EXPECT_EQ(s.count(1), 1);
  EXPECT_TRUE(s.valid());
}

TEST(TransitionLaw, SpecExamples) {
  const auto p = validate_params(0.5, 0.5);
  SizeClassState s{2, {{2, 1}}, 1};
  auto law = transition_law(s, p);
  EXPECT_NEAR(law.join_weight.at(2), 0.6, 1e-15);
  EXPECT_NEAR(law.new_part_prob, 0.4, 1e-15);

  law = transition_law(initial_state(), p);
  EXPECT_NEAR(law.join_weight.at(1), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(law.new_part_prob, 2.0 / 3.0, 1e-15);
}

TEST(ApplyMove, SpecExamples) {
  SizeClassState s{2, {{2, 1}}, 1};
  const auto s3 = apply_move(s, Move::new_part());
  EXPECT_EQ(s3, (SizeClassState{3, {{1, 1}, {2, 1}}, 2}));
  const auto s4 = apply_move(s3, Move::join(2));
  EXPECT_EQ(s4, (SizeClassState{4, {{1, 1}, {3, 1}}, 2}));
  EXPECT_THROW(apply_move(s3, Move::join(3)), IllegalMove);
}

// Random walks in every regime: invariants hold and the law sums to one.
TEST(ModelProperty, RandomWalksKeepInvariants) {
  std::mt19937_64 gen(12345);
  for (const auto& p : {validate_params(0.5, 0.5), validate_params(0.25, -0.2), validate_params(0.0, 2.0),
                        validate_params(-0.5, 1.5), validate_params(-1.0, 5.0)}) {
    for (int walk = 0; walk < 20; ++walk) {
      auto s = initial_state();
      for (int step = 0; step < 300; ++step) {
        const auto law = transition_law(s, p);
        EXPECT_NEAR(law.total(), 1.0, 1e-12);
        EXPECT_GE(law.new_part_prob, 0.0);
        if (p.regime() == Regime::BoundedParts && s.num_parts == p.part_limit()) {
          EXPECT_EQ(law.new_part_prob, 0.0);
        }
        std::uniform_real_distribution<double> u(0.0, law.total());
        double x = u(gen);
        Move m = Move::new_part();
        for (const auto& [k, w] : law.join_weight) {
          EXPECT_GE(w, 0.0);
          if (x < w) {
            m = Move::join(k);
            break;
          }
          x -= w;
        }
        s = apply_move(s, m);
        ASSERT_TRUE(s.valid());
      }
    }
  }
}
