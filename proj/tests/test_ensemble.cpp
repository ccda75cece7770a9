#include <cstdlib>

#include <gtest/gtest.h>

#include "gcrp/ensemble.hpp"
#include "gcrp/error.hpp"
#include "gcrp/normalizers.hpp"

using namespace gcrp;

namespace {
EnsembleConfig small_config(int threads) {
  EnsembleConfig c;
  c.horizon = 3000;
  c.replicas = 37;
  c.base_seed = 5;
  c.kmax = 6;
  c.threads = threads;
  return c;
}
}  // namespace

TEST(Ensemble, ParallelEqualsSerial) {
  const auto p = validate_params(0.5, 0.5);
  const auto serial = run_ensemble_serial(p, small_config(0));
  for (int threads : {1, 2, 4}) {
    const auto par = run_ensemble(p, small_config(threads));
    ASSERT_EQ(par.replicas.size(), serial.replicas.size());
    for (std::size_t r = 0; r < par.size(); ++r) EXPECT_EQ(par.replicas[r], serial.replicas[r]) << r;
    EXPECT_EQ(par.checkpoints, serial.checkpoints);
  }
}

TEST(Ensemble, ReplicaMatchesStandaloneRun) {
  const auto p = validate_params(0.25, 1.0);
  const auto cfg = small_config(2);
  const auto e = run_ensemble(p, cfg);
  EXPECT_EQ(e.replicas[11], run_replica(p, cfg, e.checkpoints, 11));
}

TEST(Ensemble, SupAndEstimate) {
  const auto p = validate_params(0.5, 0.5);
  const auto e = run_ensemble(p, small_config(0));
  for (std::size_t r = 0; r < e.size(); ++r) {
    const auto& rep = e.replicas[r];
    EXPECT_GE(rep.sup_v_over_phi, rep.v_star_hat);
    EXPECT_GE(rep.sup_v_over_phi, 1.0);  // V_1/phi_1 = 1
    for (std::size_t c = 0; c < e.checkpoints.size(); ++c) EXPECT_LE(e.v_over_phi(r, c), rep.sup_v_over_phi);
    EXPECT_DOUBLE_EQ(e.v_over_phi(r, e.checkpoints.size() - 1), rep.v_star_hat);
  }
}

TEST(Ensemble, NonPolynomialHasNoNormalisedFields) {
  const auto e = run_ensemble(validate_params(0.0, 2.0), small_config(0));
  EXPECT_TRUE(std::isnan(e.replicas[0].sup_v_over_phi));
  EXPECT_TRUE(std::isnan(e.replicas[0].v_star_hat));
}

TEST(Ensemble, PhiFaultRescales) {
  const auto p = validate_params(0.5, 0.5);
  auto e = run_ensemble(p, small_config(0));
  const double before = e.replicas[3].sup_v_over_phi;
  const double v0 = e.v_over_phi(3, 5);
  inject_phi_fault(e, 0.5);
  EXPECT_DOUBLE_EQ(e.replicas[3].sup_v_over_phi, 2 * before);
  EXPECT_DOUBLE_EQ(e.v_over_phi(3, 5), 2 * v0);
  EXPECT_THROW(inject_phi_fault(e, 0.0), ConfigError);
}

TEST(Ensemble, ConfigValidation) {
  const auto p = validate_params(0.5, 0.5);
  auto c = small_config(0);
  c.checkpoints = {10, 100};
  EXPECT_THROW(run_ensemble(p, c), ConfigError);
  c = small_config(0);
  c.replicas = 0;
  EXPECT_THROW(run_ensemble(p, c), ConfigError);
  c = small_config(-1);
  EXPECT_THROW(run_ensemble(p, c), ConfigError);
}

TEST(Ensemble, ShapeHistogramsParallelEqualsSerial) {
  const auto p = validate_params(0.75, -0.25);
  const auto a = run_shape_histograms(p, 5, 5000, 9, 3);
  const auto b = run_shape_histograms_serial(p, 5, 5000, 9);
  ASSERT_EQ(a.size(), 5u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].n, static_cast<std::int64_t>(i) + 1);
    EXPECT_EQ(a[i].counts, b[i].counts);
    EXPECT_EQ(a[i].total(), 5000);
  }
}

TEST(Ensemble, ThreadsFromEnvironment) {
  setenv("GCRP_THREADS", "3", 1);
  EXPECT_EQ(threads_from_env(), 3);
  setenv("GCRP_THREADS", "junk", 1);
  EXPECT_EQ(threads_from_env(), 0);
  unsetenv("GCRP_THREADS");
  EXPECT_EQ(threads_from_env(), 0);
}
