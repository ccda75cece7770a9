#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "gcrp/model.hpp"

namespace gcrp {

/// Partition shape: part sizes in nonincreasing order.
using Shape = std::vector<std::int64_t>;

SizeClassState shape_to_state(const Shape& shape);
Shape state_to_shape(const SizeClassState& state);

/// Exact law of the size-class state at time n.
struct ExactLaw {
  std::int64_t n = 0;
  std::map<Shape, double> probs;
  std::map<std::int64_t, double> v_marginal;               // P(V_n = v)
  std::map<std::int64_t, std::map<std::int64_t, double>> count_marginal;  // k -> P(N_n(k) = c)
  double mean_v = 0;
  std::map<std::int64_t, double> mean_count;  // E[N_n(k)]
  /// E[M_n] from exact summation of the conditional increment means
  /// (polynomial regime only; zero otherwise).
  double mean_martingale = 0;
  /// E[V_n/phi_n] (polynomial regime only).
  double mean_v_over_phi = 0;
  double total() const;
};

inline constexpr std::int64_t kDefaultEnumerationCap = 12;

/// Laws for n = 1..n_max by dynamic programming over shapes.
/// Throws CapExceeded when n_max > cap.
std::vector<ExactLaw> enumerate(const ModelParams& params, std::int64_t n_max,
                                std::int64_t cap = kDefaultEnumerationCap);

/// One DP step: the law at n+1 obtained by pushing `law` through the transition law.
ExactLaw push_forward(const ExactLaw& law, const ModelParams& params);

/// Monte Carlo counts of shapes at a fixed n.
struct ShapeHistogram {
  std::int64_t n = 0;
  std::map<Shape, std::int64_t> counts;
  std::int64_t total() const;
};

struct OracleComparison {
  double tv_v = 0;
  double tv_n1 = 0;
  double tv_shape = 0;
  double chi_square_p_v = 1;
  double chi_square_p_shape = 1;
  std::int64_t samples = 0;
};

OracleComparison compare_to_mc(const ExactLaw& exact, const ShapeHistogram& samples);

}  // namespace gcrp
