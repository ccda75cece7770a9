#include <cmath>

#include <gtest/gtest.h>

#include "gcrp/checks.hpp"
#include "gcrp/error.hpp"

using namespace gcrp;

namespace {

EnsembleSummary ensemble(double a, double t, std::int64_t horizon, std::int64_t replicas, std::uint64_t seed,
                         std::int64_t kmax, std::vector<std::int64_t> checkpoints = {}) {
  EnsembleConfig c;
  c.horizon = horizon;
  c.replicas = replicas;
  c.base_seed = seed;
  c.kmax = kmax;
  c.checkpoints = std::move(checkpoints);
  return run_ensemble(validate_params(a, t), c);
}

const ModelParams kHalf = validate_params(0.5, 0.5);

}  // namespace

TEST(EventRow, VerdictUsesWilsonLowerEnd) {
  const auto pass = make_event_row("x", 6, 100, 0.05);  // freq 0.06 but lower end below 0.05
  EXPECT_TRUE(pass.pass);
  EXPECT_EQ(pass.frequency, 0.06);
  const auto fail = make_event_row("x", 30, 100, 0.05);
  EXPECT_FALSE(fail.pass);
  EXPECT_TRUE(make_range_check("r", 1.0, 0.0, 2.0).pass);
  EXPECT_FALSE(make_range_check("r", 3.0, 0.0, 2.0).pass);
}

TEST(ThmV, PreconditionAndPass) {
  const auto e = ensemble(0.5, 0.5, 20000, 200, 1, 1);
  const auto c = compute_constants(kHalf);
  EXPECT_THROW(check_thm_V(e, std::exp(-c.K), c), DomainError);
  const auto rep = check_thm_V(e, 0.5 * std::exp(-c.K), c);
  EXPECT_TRUE(rep.passed());
  EXPECT_EQ(rep.replicas, 200);
  EXPECT_EQ(rep.rows.size(), 1u);
}

TEST(VmTail, PassAndFaultInjection) {
  auto e = ensemble(0.5, 0.5, 20000, 300, 2, 1);
  const auto c = compute_constants(kHalf);
  EXPECT_THROW(check_vm_tail(e, {c.K - 0.5}, c), DomainError);
  EXPECT_TRUE(check_vm_tail(e, {c.K, c.K + 1}, c).passed());
  inject_phi_fault(e, 0.1);
  EXPECT_FALSE(check_vm_tail(e, {c.K, c.K + 1}, c).passed());
}

TEST(Events, ReportShape) {
  const auto e = ensemble(0.5, 0.5, 5000, 400, 3, 5);
  const auto c = compute_constants(kHalf);
  const auto s = coefficients(5, kHalf, c);
  const auto rep = check_enk_events(e, {0.0, 1.0, 2.0}, 5, c, s);
  EXPECT_EQ(rep.rows.size(), 3u);
  EXPECT_FALSE(rep.notes.empty());  // A below K is flagged
  for (const auto& row : rep.rows) EXPECT_EQ(row.trials, 400);
}

TEST(Main, CalibratedConstantOnHeldOutEnsemble) {
  const auto calib = ensemble(0.5, 0.5, 20000, 300, 10, 10, {20000});
  const auto test = ensemble(0.5, 0.5, 20000, 300, 11, 10, {20000});
  const double c_emp = fit_main_constant(calib, 0.25, 2.0);
  EXPECT_GT(c_emp, 0.0);
  const auto rep = check_main(test, 0.25, 2.0, c_emp);
  EXPECT_TRUE(rep.passed());
  EXPECT_EQ(rep.metrics.at("C_emp"), c_emp);
  EXPECT_NEAR(rep.metrics.at("k1_ratio_median"), 1.0, 0.1);
  // The fitted constant is an upper confidence bound on the 1 - e^{-A} quantile,
  // so it sits at or above the plain calibration quantile.
  const auto self = check_main(calib, 0.25, 2.0, c_emp);
  EXPECT_LE(self.rows[0].frequency, std::exp(-2.0));
  EXPECT_GE(c_emp, self.metrics.at("C_this_ensemble"));
  EXPECT_THROW(fit_main_constant(calib, 0.25, 2.0, 1.0), DomainError);
}

TEST(Main, DomainErrors) {
  const auto e = ensemble(0.5, 0.5, 1000, 10, 1, 3, {1000});
  EXPECT_THROW(main_statistics(e, 0.6, 1.0, 1), DomainError);
  EXPECT_THROW(main_statistics(e, 0.25, 1.0, 4), ConfigError);  // beyond recorded kmax
}

TEST(Lln, ReportsTargetAndPitmanLimit) {
  const auto e = ensemble(0.5, 0.5, 50000, 40, 4, 30, {50000});
  const auto rep = check_lln_ratio(e, 5, 0.05);
  EXPECT_EQ(rep.ranges.size(), 5u);
  // Limit of N_n(k)/V_n is alpha Gamma(k-alpha)/(Gamma(1-alpha) Gamma(k+1)); the
  // sample is small, so only the well-populated classes are held to 5%.
  for (int k = 1; k <= 5; ++k) {
    const auto ks = std::to_string(k);
    const double tol = k <= 2 ? 0.05 : 0.2;
    EXPECT_NEAR(rep.metrics.at("median_ratio_k=" + ks) / rep.metrics.at("pitman_limit_k=" + ks), 1.0, tol);
  }
  EXPECT_NEAR(rep.metrics.at("pitman_limit_k=1"), 0.5, 1e-15);
}

TEST(PowerLaw, SlopeIsNegative) {
  const auto e = ensemble(0.5, 0.5, 100000, 20, 5, 30, {100000});
  const auto rep = power_law_slope(e, 2, 10);
  ASSERT_EQ(rep.ranges.size(), 1u);
  EXPECT_LT(rep.ranges[0].value, -1.0);
  EXPECT_GT(rep.ranges[0].value, -2.0);
  EXPECT_THROW(power_law_slope(e, 5, 4), DomainError);
}

TEST(Envelope, NeedsRangeInsideHorizon) {
  const auto e = ensemble(0.5, 0.5, 10000, 50, 6, 1);
  EXPECT_THROW(envelope_slope(e, 100, 10000), DomainError);
  const auto rep = envelope_slope(e, 10, 1000);
  EXPECT_EQ(rep.ranges.size(), 1u);
}

TEST(Corollary, WideWindowCoversEverything) {
  const auto e = ensemble(0.5, 0.5, 10000, 50, 7, 10, {10000});
  const auto rep = check_corollary(e, 1.0, 0.9, 1e6);
  EXPECT_EQ(rep.metrics.at("coverage"), 1.0);
  EXPECT_TRUE(rep.passed());
  const double narrow = check_corollary(e, 1.0, 0.5, 1.0).metrics.at("xi_n");
  const double wide = check_corollary(e, 1.0, 0.8, 1.0).metrics.at("xi_n");
  EXPECT_LT(narrow, wide);
}

TEST(KRange, UnrestrictedFormula) {
  // ceil(0.9 * 10^{6/10} / (ln 10^6)^{0.4}) = ceil(0.9 * 3.981 / 2.853) = 2
  EXPECT_EQ(k_range_unrestricted(0.9, 1000000, 0.5), 2);
  EXPECT_EQ(k_range_unrestricted(0.1, 1000000, 0.5), k_epsilon_n(0.1, 1000000, kHalf));
}

TEST(Checks, RejectNonPolynomialEnsembles) {
  const auto e = ensemble(0.0, 2.0, 1000, 10, 1, 5, {1000});
  EXPECT_THROW(check_lln_ratio(e, 3), DomainError);
  EXPECT_THROW(power_law_slope(e, 2, 4), DomainError);
}
