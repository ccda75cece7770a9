#include <gtest/gtest.h>

#include "gcrp/error.hpp"
#include "gcrp/simulate.hpp"

using namespace gcrp;

TEST(Checkpoints, GeometricGrid) {
  const auto g = geometric_checkpoints(100);
  EXPECT_EQ(g.front(), 1);
  EXPECT_EQ(g.back(), 100);
  EXPECT_TRUE(std::is_sorted(g.begin(), g.end()));
  EXPECT_EQ(std::adjacent_find(g.begin(), g.end()), g.end());
  // ceil(2^{j/2}): 1, 2, 3, 4, 6, 8, 12, 16, 23, 32, 46, 64, 91, then the horizon.
  const std::vector<std::int64_t> expected{1, 2, 3, 4, 6, 8, 12, 16, 23, 32, 46, 64, 91, 100};
  EXPECT_EQ(g, expected);
}

TEST(Checkpoints, DefaultKmax) {
  EXPECT_EQ(default_kmax(1000000, 0.5), 4);  // ceil(10^{0.6}) = ceil(3.98)
  EXPECT_EQ(default_kmax(1, 0.5), 1);
  EXPECT_EQ(default_kmax(10000, -0.5), 1);
}

TEST(Simulate, HorizonOneIsInitialState) {
  const auto p = validate_params(0.5, 0.5);
  const auto t = simulate(p, SimConfig{1, {1}, 3, 7, 0});
  ASSERT_EQ(t.records.size(), 1u);
  EXPECT_EQ(t.records[0].n, 1);
  EXPECT_EQ(t.records[0].num_parts, 1);
  EXPECT_EQ(t.records[0].counts, (std::vector<std::int64_t>{1, 0, 0}));
  EXPECT_EQ(t.records[0].tail_count, 0);
}

TEST(Simulate, PureFunctionOfConfig) {
  const auto p = validate_params(0.5, 0.5);
  const SimConfig cfg{20000, geometric_checkpoints(20000), 10, 7, 3};
  const auto a = simulate(p, cfg);
  const auto b = simulate(p, cfg);
  EXPECT_EQ(a.records, b.records);
  auto other = cfg;
  other.replica_id = 4;
  EXPECT_NE(simulate(p, other).records, a.records);
}

TEST(Simulate, RecordsAreConsistent) {
  const auto p = validate_params(0.25, 1.0);
  const auto t = simulate(p, SimConfig{5000, {10, 100, 5000}, 5, 1, 0});
  for (const auto& r : t.records) {
    std::int64_t parts = r.tail_count;
    for (auto c : r.counts) parts += c;
    EXPECT_EQ(parts, r.num_parts);
  }
}

TEST(Simulate, BoundedPartsNeverExceedsLimit) {
  const auto p = validate_params(-0.5, 1.5);
  for (std::uint64_t r = 0; r < 20; ++r) {
    const auto t = simulate(p, SimConfig{2000, geometric_checkpoints(2000), 1, 3, r});
    for (const auto& rec : t.records) EXPECT_LE(rec.num_parts, 3);
  }
}

TEST(Simulate, RejectsBadConfig) {
  const auto p = validate_params(0.5, 0.5);
  EXPECT_THROW(simulate(p, SimConfig{0, {}, 1, 0, 0}), ConfigError);
  EXPECT_THROW(simulate(p, SimConfig{10, {5, 3}, 1, 0, 0}), ConfigError);
  EXPECT_THROW(simulate(p, SimConfig{10, {11}, 1, 0, 0}), ConfigError);
}

namespace {
struct CountingObserver : StepObserver {
  std::int64_t steps = 0;
  std::int64_t new_parts = 0;
  bool started = false;
  void on_start(const Chain&) override { started = true; }
  void on_step(const Chain& before, const Move& m) override {
    EXPECT_EQ(before.n(), steps + 1);
    ++steps;
    if (m.is_new_part()) ++new_parts;
  }
};
}  // namespace

TEST(Simulate, ObserverSeesEveryStep) {
  const auto p = validate_params(0.5, 0.5);
  CountingObserver obs;
  StepObserver* list[] = {&obs};
  const auto t = simulate(p, SimConfig{1000, {1000}, 1, 9, 0}, list);
  EXPECT_TRUE(obs.started);
  EXPECT_EQ(obs.steps, 999);
  EXPECT_EQ(obs.new_parts + 1, t.records.back().num_parts);
}
