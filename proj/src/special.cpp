#include "gcrp/special.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gcrp/error.hpp"

namespace gcrp::special {
namespace {

constexpr double kAsymptoticFloor = 10.0;

// Stirling series for mu(x), x >= 10. Truncation error below 1e-17.
double binet_series(double x) {
  static constexpr double kCoeff[] = {
      1.0 / 12.0,         -1.0 / 360.0, 1.0 / 1260.0,  -1.0 / 1680.0,
      1.0 / 1188.0,       -691.0 / 360360.0, 1.0 / 156.0,
  };
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  double term = inv;
  double sum = 0.0;
  for (double c : kCoeff) {
    sum += c * term;
    term *= inv2;
  }
  return sum;
}

}  // namespace

double log_gamma(double x) {
  if (!(x > 0.0)) throw DomainError("log_gamma: argument must be positive");
#if defined(__GLIBC__)
  int sign = 0;
  return ::lgamma_r(x, &sign);
#else
  return std::lgamma(x);
#endif
}

double log_stirling(double x) {
  return 0.5 * std::log(2.0 * std::numbers::pi) - x + (x - 0.5) * std::log(x);
}

double binet_remainder(double x) {
  if (!(x > 0.0)) throw DomainError("binet_remainder: argument must be positive");
  if (x >= kAsymptoticFloor) return binet_series(x);
  // mu(x) = mu(x + s) + [S(x + s) - S(x)] - sum_{i<s} ln(x + i), S the
  // Stirling main term; evaluated in extended precision.
  const int shift = static_cast<int>(std::ceil(kAsymptoticFloor - x));
  const long double xl = x;
  const long double xs = xl + shift;
  long double main_diff = (xs - 0.5L) * std::log(xs) - (xl - 0.5L) * std::log(xl) - shift;
  long double log_prod = 0.0L;
  for (int i = 0; i < shift; ++i) log_prod += std::log(xl + i);
  return static_cast<double>(binet_series(static_cast<double>(xs)) + main_diff - log_prod);
}

double log_gamma_ratio(double x, double a) {
  if (!(x > 0.0) || !(x + a > 0.0)) {
    throw DomainError("log_gamma_ratio: arguments must be positive");
  }
  if (a == 0.0) return 0.0;
  const double lo = std::min(x, x + a);
  double correction = 0.0;
  if (lo < kAsymptoticFloor) {
    const int shift = static_cast<int>(std::ceil(kAsymptoticFloor - lo));
    for (int i = 0; i < shift; ++i) correction += std::log1p(a / (x + i));
    x += shift;
  }
  const double y = x + a;
  const double value = (x - 0.5) * std::log1p(a / x) + a * std::log(y) - a +
                       (binet_series(y) - binet_series(x));
  return value - correction;
}

double log_add_exp(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == -INFINITY) return a;
  return a + std::log1p(std::exp(b - a));
}

}  // namespace gcrp::special
