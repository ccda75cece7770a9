#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gcrp/chain.hpp"
#include "gcrp/model.hpp"

namespace gcrp {

struct SimConfig {
  std::int64_t horizon = 1;
  std::vector<std::int64_t> checkpoints;  // sorted, unique, within [1, horizon]
  std::int64_t kmax_tracked = 1;
  std::uint64_t seed = 0;
  std::uint64_t replica_id = 0;

  /// Throws ConfigError when an invariant is broken.
  void validate() const;
};

/// {ceil(2^{j/per_octave})} intersected with [1, horizon], plus the horizon.
std::vector<std::int64_t> geometric_checkpoints(std::int64_t horizon, int per_octave = 2);

/// ceil(horizon^{alpha/(2 alpha + 4)}), at least 1.
std::int64_t default_kmax(std::int64_t horizon, double alpha);

struct CheckpointRecord {
  std::int64_t n = 0;
  std::int64_t num_parts = 0;
  std::vector<std::int64_t> counts;  // counts[k-1] = N_n(k), k <= kmax
  std::int64_t tail_count = 0;       // parts larger than kmax

  friend bool operator==(const CheckpointRecord&, const CheckpointRecord&) = default;
};

struct Trajectory {
  ModelParams params;
  SimConfig config;
  std::vector<CheckpointRecord> records;
};

/// Receives every transition in order: the state before the step and the move
/// drawn from its law (query the law through chain.new_part_prob/join_prob).
class StepObserver {
 public:
  virtual ~StepObserver() = default;
  virtual void on_start(const Chain& initial) { (void)initial; }
  virtual void on_step(const Chain& before, const Move& move) = 0;
};

CheckpointRecord snapshot(const Chain& chain, std::int64_t kmax);

/// Runs one trajectory from the initial state to config.horizon.
/// Deterministic in (params, config).
Trajectory simulate(const ModelParams& params, const SimConfig& config,
                    std::span<StepObserver* const> observers = {});

}  // namespace gcrp
