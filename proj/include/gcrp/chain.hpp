#pragma once

#include <cstdint>

#include "gcrp/model.hpp"
#include "gcrp/rng.hpp"
#include "gcrp/size_class_sampler.hpp"

namespace gcrp {

/// Mutable simulation state of one trajectory. Holds the same information as
/// SizeClassState in dense form, plus the sampling tree.
class Chain {
 public:
  explicit Chain(const ModelParams& params, std::int64_t capacity_hint = 16);

  const ModelParams& params() const { return params_; }
  std::int64_t n() const { return n_; }
  std::int64_t num_parts() const { return num_parts_; }
  std::int64_t count(std::int64_t k) const { return sampler_.count(k); }
  std::int64_t max_size() const { return sampler_.max_size(); }
  const SizeClassSampler& sampler() const { return sampler_; }

  /// (alpha V_n + theta) / (n + theta).
  double new_part_prob() const;
  /// (k - alpha) N_n(k) / (n + theta).
  double join_prob(std::int64_t k) const;

  /// Draws the next move with probability proportional to the transition law.
  Move sample(Rng& rng) const;
  /// Throws IllegalMove when joining an empty class.
  void apply(const Move& move);

  SizeClassState to_state() const;

 private:
  ModelParams params_;
  std::int64_t n_ = 1;
  std::int64_t num_parts_ = 1;
  SizeClassSampler sampler_;
};

}  // namespace gcrp
