#pragma once

// Log-Gamma helpers. Differences of log-Gamma values at large arguments lose
// all their significant digits when taken naively (lgamma(1e7) ~ 1.5e8), so
// ratios are evaluated through an asymptotic expansion of the difference.

namespace gcrp::special {

/// ln Gamma(x) for x > 0. Thread-safe.
double log_gamma(double x);

/// ln Gamma(x + a) - ln Gamma(x), for x > 0 and x + a > 0.
/// Relative accuracy ~1e-15 * (1 + |a|) for all argument sizes.
double log_gamma_ratio(double x, double a);

/// Binet remainder mu(x) = ln Gamma(x) - [(x - 1/2) ln x - x + ln(2 pi)/2], x > 0.
double binet_remainder(double x);

/// ln of the Stirling main term sqrt(2 pi) e^{-x} x^{x - 1/2}.
double log_stirling(double x);

/// log(exp(a) + exp(b)) without overflow.
double log_add_exp(double a, double b);

}  // namespace gcrp::special
