#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

namespace gcrp {

enum class Regime { BoundedParts, Logarithmic, Polynomial };

std::string_view to_string(Regime regime);

/// Validated (alpha, theta). Only obtainable through validate_params, so every
/// instance lies in one of the three admissible regimes.
class ModelParams {
 public:
  double alpha() const { return alpha_; }
  double theta() const { return theta_; }
  Regime regime() const { return regime_; }
  /// Limit number of parts m for BoundedParts (theta = -m alpha); 0 otherwise.
  std::int64_t part_limit() const { return part_limit_; }
  bool polynomial() const { return regime_ == Regime::Polynomial; }

  friend bool operator==(const ModelParams&, const ModelParams&) = default;

 private:
  friend ModelParams validate_params(double alpha, double theta);
  ModelParams(double alpha, double theta, Regime regime, std::int64_t m)
      : alpha_(alpha), theta_(theta), regime_(regime), part_limit_(m) {}

  double alpha_;
  double theta_;
  Regime regime_;
  std::int64_t part_limit_;
};

/// Classify (alpha, theta); throws InvalidRegime outside the admissible sets.
/// In the BoundedParts regime theta is snapped to exactly -m * alpha.
ModelParams validate_params(double alpha, double theta);

/// Human-readable table of admissible regimes, used in error messages.
std::string regime_table();

/// Partition of [n] summarised by its size classes: counts[k] = N_n(k) > 0.
/// Every observable of the process (V_n, N_n(k), all martingales) is a
/// function of this summary, so labeled tables are never materialised.
struct SizeClassState {
  std::int64_t n = 0;
  std::map<std::int64_t, std::int64_t> counts;
  std::int64_t num_parts = 0;

  std::int64_t count(std::int64_t k) const;
  /// Checks sum k N(k) = n, sum N(k) = V, positivity and range of sizes.
  bool valid() const;

  friend bool operator==(const SizeClassState&, const SizeClassState&) = default;
};

SizeClassState initial_state();

enum class MoveKind { JoinSize, NewPart };

struct Move {
  MoveKind kind = MoveKind::NewPart;
  std::int64_t size = 0;  // size of the joined part (JoinSize only)

  static Move join(std::int64_t k) { return {MoveKind::JoinSize, k}; }
  static Move new_part() { return {MoveKind::NewPart, 0}; }
  bool is_new_part() const { return kind == MoveKind::NewPart; }

  friend bool operator==(const Move&, const Move&) = default;
};

/// Conditional law of the next customer's choice, on size classes.
struct TransitionLaw {
  std::map<std::int64_t, double> join_weight;  // size k -> P(join some part of size k)
  double new_part_prob = 0.0;

  double total() const;
};

TransitionLaw transition_law(const SizeClassState& state, const ModelParams& params);

/// Throws IllegalMove when joining an empty size class.
SizeClassState apply_move(const SizeClassState& state, const Move& move);

}  // namespace gcrp
