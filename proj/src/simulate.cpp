#include "gcrp/simulate.hpp"

#include <algorithm>
#include <cmath>

#include "gcrp/error.hpp"

namespace gcrp {

void SimConfig::validate() const {
  if (horizon < 1) throw ConfigError("horizon must be >= 1");
  if (kmax_tracked < 1) throw ConfigError("kmax must be >= 1");
  if (!std::is_sorted(checkpoints.begin(), checkpoints.end()) ||
      std::adjacent_find(checkpoints.begin(), checkpoints.end()) != checkpoints.end()) {
    throw ConfigError("checkpoints must be strictly increasing");
  }
  if (!checkpoints.empty() && (checkpoints.front() < 1 || checkpoints.back() > horizon)) {
    throw ConfigError("checkpoints must lie in [1, horizon]");
  }
}

std::vector<std::int64_t> geometric_checkpoints(std::int64_t horizon, int per_octave) {
  if (horizon < 1) throw ConfigError("horizon must be >= 1");
  if (per_octave < 1) throw ConfigError("per_octave must be >= 1");
  std::vector<std::int64_t> grid;
  for (int j = 0;; ++j) {
    const auto m = static_cast<std::int64_t>(std::ceil(std::exp2(static_cast<double>(j) / per_octave)));
    if (m > horizon) break;
    if (grid.empty() || grid.back() != m) grid.push_back(m);
  }
  if (grid.back() != horizon) grid.push_back(horizon);
  return grid;
}

std::int64_t default_kmax(std::int64_t horizon, double alpha) {
  if (alpha <= 0.0) return 1;
  const double k = std::ceil(std::pow(static_cast<double>(horizon), alpha / (2.0 * alpha + 4.0)));
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(k));
}

CheckpointRecord snapshot(const Chain& chain, std::int64_t kmax) {
  CheckpointRecord rec{chain.n(), chain.num_parts(), std::vector<std::int64_t>(kmax), 0};
  std::int64_t tracked = 0;
  for (std::int64_t k = 1; k <= kmax; ++k) {
    rec.counts[k - 1] = chain.count(k);
    tracked += rec.counts[k - 1];
  }
  rec.tail_count = chain.num_parts() - tracked;
  return rec;
}

Trajectory simulate(const ModelParams& params, const SimConfig& config,
                    std::span<StepObserver* const> observers) {
  config.validate();
  Trajectory traj{params, config, {}};
  traj.records.reserve(config.checkpoints.size());

  Rng rng(derive_replica_seed(config.seed, config.replica_id));
  Chain chain(params);
  for (auto* obs : observers) obs->on_start(chain);

  auto next_cp = config.checkpoints.begin();
  auto record_if_due = [&] {
    if (next_cp != config.checkpoints.end() && *next_cp == chain.n()) {
      traj.records.push_back(snapshot(chain, config.kmax_tracked));
      ++next_cp;
    }
  };
  record_if_due();
  while (chain.n() < config.horizon) {
    const Move move = chain.sample(rng);
    for (auto* obs : observers) obs->on_step(chain, move);
    chain.apply(move);
    record_if_due();
  }
  return traj;
}

}  // namespace gcrp
