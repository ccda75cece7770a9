#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "gcrp/exact_oracle.hpp"
#include "gcrp/model.hpp"
#include "gcrp/simulate.hpp"

namespace gcrp {

struct EnsembleConfig {
  std::int64_t horizon = 1;
  std::int64_t replicas = 1;
  std::uint64_t base_seed = 0;
  std::vector<std::int64_t> checkpoints;  // empty: geometric grid
  std::int64_t kmax = 1;                  // size classes recorded at every checkpoint
  int threads = 0;                        // 0: OpenMP default

  void validate() const;
};

struct ReplicaRecord {
  std::vector<CheckpointRecord> records;  // one per checkpoint
  /// sup_{j <= horizon} V_j/phi_j over every step (polynomial regime; NaN otherwise).
  double sup_v_over_phi = 0;
  /// V_horizon/phi_horizon (polynomial regime; NaN otherwise).
  double v_star_hat = 0;

  friend bool operator==(const ReplicaRecord&, const ReplicaRecord&) = default;
};

struct EnsembleSummary {
  ModelParams params;
  EnsembleConfig config;
  std::vector<std::int64_t> checkpoints;
  std::vector<ReplicaRecord> replicas;
  /// Multiplier applied to every phi_m; 1 except under fault injection.
  double phi_scale = 1.0;

  std::int64_t horizon() const { return config.horizon; }
  std::size_t size() const { return replicas.size(); }
  /// V_m/phi_m for replica r at checkpoint index c.
  double v_over_phi(std::size_t r, std::size_t c) const;
  const CheckpointRecord& final_record(std::size_t r) const { return replicas[r].records.back(); }
};

/// Replica r uses derive_replica_seed(base_seed, r). Results do not depend on
/// the thread count.
EnsembleSummary run_ensemble(const ModelParams& params, const EnsembleConfig& config);
/// Single-threaded reference; must agree exactly with run_ensemble.
EnsembleSummary run_ensemble_serial(const ModelParams& params, const EnsembleConfig& config);

/// Fault injection: pretend phi_m was computed as scale * phi_m. Rescales the
/// stored sup and V* estimates so every downstream check sees the corrupted normalizer.
void inject_phi_fault(EnsembleSummary& ensemble, double scale);

ReplicaRecord run_replica(const ModelParams& params, const EnsembleConfig& config,
                          const std::vector<std::int64_t>& checkpoints, std::uint64_t replica_id);

/// Shape histograms at n = 1..n_max from `replicas` short runs.
std::vector<ShapeHistogram> run_shape_histograms(const ModelParams& params, std::int64_t n_max,
                                                 std::int64_t replicas, std::uint64_t base_seed,
                                                 int threads = 0);
std::vector<ShapeHistogram> run_shape_histograms_serial(const ModelParams& params, std::int64_t n_max,
                                                        std::int64_t replicas, std::uint64_t base_seed);

/// Thread count from GCRP_THREADS if set and positive, else 0.
int threads_from_env();

}  // namespace gcrp
