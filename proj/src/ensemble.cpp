#include "gcrp/ensemble.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>

#include <omp.h>

#include "gcrp/error.hpp"
#include "gcrp/normalizers.hpp"

namespace gcrp {
namespace {

// Exact running sup of V_j/phi_j with phi updated multiplicatively.
class SupObserver final : public StepObserver {
 public:
  explicit SupObserver(const ModelParams& params) : alpha_(params.alpha()), theta_(params.theta()) {}
  void on_start(const Chain& initial) override {
    phi_ = 1.0;
    sup_ = static_cast<double>(initial.num_parts());
  }
  void on_step(const Chain& before, const Move& move) override {
    phi_ *= 1.0 + alpha_ / (static_cast<double>(before.n()) + theta_);
    const auto v = static_cast<double>(before.num_parts() + (move.is_new_part() ? 1 : 0));
    sup_ = std::max(sup_, v / phi_);
  }
  double sup() const { return sup_; }

 private:
  double alpha_, theta_;
  double phi_ = 1.0;
  double sup_ = 0.0;
};

std::vector<std::int64_t> resolve_checkpoints(const EnsembleConfig& config) {
  return config.checkpoints.empty() ? geometric_checkpoints(config.horizon) : config.checkpoints;
}

EnsembleSummary make_summary(const ModelParams& params, const EnsembleConfig& config) {
  config.validate();
  EnsembleSummary s{params, config, resolve_checkpoints(config), {}};
  s.replicas.resize(static_cast<std::size_t>(config.replicas));
  return s;
}

}  // namespace

void EnsembleConfig::validate() const {
  if (horizon < 1) throw ConfigError("ensemble horizon must be >= 1");
  if (replicas < 1) throw ConfigError("ensemble needs at least one replica");
  if (kmax < 1) throw ConfigError("ensemble kmax must be >= 1");
  if (threads < 0) throw ConfigError("thread count must be >= 0");
  if (!checkpoints.empty() && checkpoints.back() != horizon) {
    throw ConfigError("explicit checkpoints must end at the horizon");
  }
}

double EnsembleSummary::v_over_phi(std::size_t r, std::size_t c) const {
  const auto& rec = replicas.at(r).records.at(c);
  return static_cast<double>(rec.num_parts) / (phi_scale * phi(rec.n, params));
}

void inject_phi_fault(EnsembleSummary& ensemble, double scale) {
  if (!(scale > 0) || !std::isfinite(scale)) throw ConfigError("phi fault scale must be positive and finite");
  ensemble.phi_scale *= scale;
  for (auto& rec : ensemble.replicas) {
    rec.sup_v_over_phi /= scale;
    rec.v_star_hat /= scale;
  }
}

ReplicaRecord run_replica(const ModelParams& params, const EnsembleConfig& config,
                          const std::vector<std::int64_t>& checkpoints, std::uint64_t replica_id) {
  SimConfig sim{config.horizon, checkpoints, config.kmax, config.base_seed, replica_id};
  ReplicaRecord rec;
  if (params.polynomial()) {
    SupObserver sup(params);
    StepObserver* observers[] = {&sup};
    rec.records = simulate(params, sim, observers).records;
    rec.sup_v_over_phi = sup.sup();
    rec.v_star_hat = static_cast<double>(rec.records.back().num_parts) / phi(config.horizon, params);
  } else {
    rec.records = simulate(params, sim).records;
    rec.sup_v_over_phi = std::numeric_limits<double>::quiet_NaN();
    rec.v_star_hat = std::numeric_limits<double>::quiet_NaN();
  }
  return rec;
}

EnsembleSummary run_ensemble(const ModelParams& params, const EnsembleConfig& config) {
  EnsembleSummary s = make_summary(params, config);
  const auto count = static_cast<std::int64_t>(s.replicas.size());
  const int threads = config.threads > 0 ? config.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (std::int64_t r = 0; r < count; ++r) {
    s.replicas[static_cast<std::size_t>(r)] =
        run_replica(params, config, s.checkpoints, static_cast<std::uint64_t>(r));
  }
  return s;
}

EnsembleSummary run_ensemble_serial(const ModelParams& params, const EnsembleConfig& config) {
  EnsembleSummary s = make_summary(params, config);
  for (std::size_t r = 0; r < s.replicas.size(); ++r) {
    s.replicas[r] = run_replica(params, config, s.checkpoints, r);
  }
  return s;
}

namespace {

void shape_run(const ModelParams& params, std::int64_t n_max, std::uint64_t base_seed,
               std::uint64_t replica, std::vector<ShapeHistogram>& out) {
  Rng rng(derive_replica_seed(base_seed, replica));
  Chain chain(params);
  ++out[0].counts[{1}];
  for (std::int64_t n = 2; n <= n_max; ++n) {
    chain.apply(chain.sample(rng));
    ++out[static_cast<std::size_t>(n - 1)].counts[state_to_shape(chain.to_state())];
  }
}

std::vector<ShapeHistogram> empty_histograms(std::int64_t n_max) {
  std::vector<ShapeHistogram> h(static_cast<std::size_t>(n_max));
  for (std::int64_t n = 1; n <= n_max; ++n) h[static_cast<std::size_t>(n - 1)].n = n;
  return h;
}

}  // namespace

std::vector<ShapeHistogram> run_shape_histograms(const ModelParams& params, std::int64_t n_max,
                                                 std::int64_t replicas, std::uint64_t base_seed,
                                                 int threads) {
  if (n_max < 1 || replicas < 1) throw ConfigError("shape histograms need n_max >= 1 and replicas >= 1");
  const int nthreads = threads > 0 ? threads : omp_get_max_threads();
  std::vector<std::vector<ShapeHistogram>> partial(static_cast<std::size_t>(nthreads),
                                                   empty_histograms(n_max));
#pragma omp parallel num_threads(nthreads)
  {
    auto& mine = partial[static_cast<std::size_t>(omp_get_thread_num())];
#pragma omp for schedule(static)
    for (std::int64_t r = 0; r < replicas; ++r) {
      shape_run(params, n_max, base_seed, static_cast<std::uint64_t>(r), mine);
    }
  }
  auto merged = empty_histograms(n_max);
  for (const auto& part : partial) {
    for (std::size_t i = 0; i < part.size(); ++i) {
      for (const auto& [shape, c] : part[i].counts) merged[i].counts[shape] += c;
    }
  }
  return merged;
}

std::vector<ShapeHistogram> run_shape_histograms_serial(const ModelParams& params, std::int64_t n_max,
                                                        std::int64_t replicas, std::uint64_t base_seed) {
  if (n_max < 1 || replicas < 1) throw ConfigError("shape histograms need n_max >= 1 and replicas >= 1");
  auto h = empty_histograms(n_max);
  for (std::int64_t r = 0; r < replicas; ++r) {
    shape_run(params, n_max, base_seed, static_cast<std::uint64_t>(r), h);
  }
  return h;
}

int threads_from_env() {
  const char* env = std::getenv("GCRP_THREADS");
  if (env == nullptr) return 0;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || v <= 0) return 0;
  return static_cast<int>(v);
}

}  // namespace gcrp
