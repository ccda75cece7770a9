#include "gcrp/model.hpp"

#include <cmath>
#include <sstream>

#include "gcrp/error.hpp"

namespace gcrp {

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::BoundedParts: return "BoundedParts";
    case Regime::Logarithmic: return "Logarithmic";
    case Regime::Polynomial: return "Polynomial";
  }
  return "?";
}

std::string regime_table() {
  return "admissible regimes:\n"
         "  Polynomial    0 < alpha < 1 and theta > -alpha\n"
         "  Logarithmic   alpha = 0 and theta > 0\n"
         "  BoundedParts  alpha < 0 and theta = -m*alpha, m a positive integer\n";
}

ModelParams validate_params(double alpha, double theta) {
  if (!std::isfinite(alpha) || !std::isfinite(theta)) {
    throw InvalidRegime("alpha and theta must be finite\n" + regime_table());
  }
  if (alpha > 0.0 && alpha < 1.0 && theta > -alpha) {
    return ModelParams(alpha, theta, Regime::Polynomial, 0);
  }
  if (alpha == 0.0 && theta > 0.0) {
    return ModelParams(alpha, theta, Regime::Logarithmic, 0);
  }
  if (alpha < 0.0) {
    const double ratio = theta / -alpha;
    const double m = std::round(ratio);
    if (m >= 1.0 && std::abs(ratio - m) <= 1e-12 * m) {
      const auto parts = static_cast<std::int64_t>(m);
      return ModelParams(alpha, -static_cast<double>(parts) * alpha, Regime::BoundedParts, parts);
    }
  }
  std::ostringstream msg;
  msg << "InvalidRegime: (alpha=" << alpha << ", theta=" << theta << ") is not admissible\n"
      << regime_table();
  throw InvalidRegime(msg.str());
}

std::int64_t SizeClassState::count(std::int64_t k) const {
  auto it = counts.find(k);
  return it == counts.end() ? 0 : it->second;
}

bool SizeClassState::valid() const {
  if (n < 1 || num_parts < 1) return false;
  std::int64_t mass = 0;
  std::int64_t parts = 0;
  for (auto [k, c] : counts) {
    if (k < 1 || k > n || c <= 0) return false;
    mass += k * c;
    parts += c;
  }
  return mass == n && parts == num_parts;
}

SizeClassState initial_state() { return SizeClassState{1, {{1, 1}}, 1}; }

double TransitionLaw::total() const {
  double sum = new_part_prob;
  for (auto [k, w] : join_weight) sum += w;
  return sum;
}

TransitionLaw transition_law(const SizeClassState& state, const ModelParams& params) {
  const double alpha = params.alpha();
  const double denom = static_cast<double>(state.n) + params.theta();
  TransitionLaw law;
  for (auto [k, c] : state.counts) {
    law.join_weight[k] = (static_cast<double>(k) - alpha) * static_cast<double>(c) / denom;
  }
  law.new_part_prob = (alpha * static_cast<double>(state.num_parts) + params.theta()) / denom;
  return law;
}

SizeClassState apply_move(const SizeClassState& state, const Move& move) {
  SizeClassState next = state;
  next.n += 1;
  if (move.is_new_part()) {
    next.counts[1] += 1;
    next.num_parts += 1;
    return next;
  }
  auto it = next.counts.find(move.size);
  if (it == next.counts.end()) {
    throw IllegalMove("IllegalMove: no part of size " + std::to_string(move.size));
  }
  if (--it->second == 0) next.counts.erase(it);
  next.counts[move.size + 1] += 1;
  return next;
}

}  // namespace gcrp
