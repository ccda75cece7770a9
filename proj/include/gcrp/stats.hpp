#pragma once

#include <cstdint>
#include <map>
#include <vector>

namespace gcrp::stats {

struct Interval {
  double lo = 0;
  double hi = 0;
};

/// Wilson score interval for a binomial proportion (default 95%).
Interval wilson_interval(std::int64_t successes, std::int64_t trials, double z = 1.959963984540054);

struct LinearFit {
  double slope = 0;
  double intercept = 0;
  double slope_stderr = 0;
  double r_squared = 0;
  std::size_t points = 0;
};

/// Ordinary least squares y = intercept + slope x. Needs at least two distinct x.
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

double mean(const std::vector<double>& v);
/// Sample standard deviation (n - 1 denominator).
double stddev(const std::vector<double>& v);
/// Linear-interpolation quantile (type 7), q in [0, 1].
double quantile(std::vector<double> v, double q);
double median(std::vector<double> v);

/// Total variation distance between two distributions on integer support.
double tv_distance(const std::map<std::int64_t, double>& p, const std::map<std::int64_t, double>& q);

struct ChiSquare {
  double statistic = 0;
  int dof = 0;
  double p_value = 1;
};

/// Pearson goodness of fit of counts against probabilities. Cells with expected
/// count below min_expected are pooled (in key order) until they reach it.
/// Cells present only in observed are counted against zero probability, which
/// forces p = 0.
template <class Key>
ChiSquare chi_square_gof(const std::map<Key, std::int64_t>& observed, const std::map<Key, double>& probs,
                         double min_expected = 5.0);

/// Upper tail of the chi-square distribution.
double chi_square_survival(double statistic, int dof);

}  // namespace gcrp::stats

#include "gcrp/stats_impl.hpp"
