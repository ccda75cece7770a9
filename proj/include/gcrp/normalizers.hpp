#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gcrp/model.hpp"

namespace gcrp {

// Deterministic normalizers of the polynomial regime. All functions throw
// DomainError when called with params outside that regime.

/// ln phi_n, where phi_n = prod_{j<n} (1 + alpha/(j+theta)).
double log_phi(std::int64_t n, const ModelParams& params);
double phi(std::int64_t n, const ModelParams& params);

/// ln psi_n(k) from the Gamma form
/// Gamma(k+theta) Gamma(n-k+alpha+theta) / (Gamma(alpha+theta) Gamma(n+theta)).
/// Defined for 1 <= k <= n only.
double log_psi(std::int64_t n, std::int64_t k, const ModelParams& params);

/// Drift of V_n/phi_n: 1 + sum_{j<n} theta/((j+theta) phi_{j+1}).
/// The sum telescopes, giving 1 + theta/alpha - theta/(alpha phi_n).
double theta_seq_V(std::int64_t n, const ModelParams& params);

/// lim theta_seq_V = 1 + theta/alpha.
double theta_inf(const ModelParams& params);

/// Upper bound on |theta_inf - theta_seq_V(m)|:
/// 4 Gamma(1+theta+alpha)|theta| / (alpha Gamma(1+theta)) (m+theta)^{-alpha}.
double theta_tail_bound(std::int64_t m, const ModelParams& params);

/// Drift of X_n(1): 1 + sum_{j<n} theta/((j+theta) psi_{j+1}(1)), in closed form.
double theta_seq_1(std::int64_t n, const ModelParams& params);

/// 1 + 2 theta Gamma(alpha+theta) / ((1-alpha) Gamma(1+theta)) (n+theta)^{1-alpha}.
double theta_seq_1_bound(std::int64_t n, const ModelParams& params);

/// alpha Gamma(1+theta) / (Gamma(1-alpha) Gamma(1+alpha+theta)).
double c_main(const ModelParams& params);

/// ln(Gamma(k - alpha) / Gamma(k + 1)).
double log_size_weight(std::int64_t k, double alpha);

/// ceil(eps n^{alpha/(2 alpha+4)} / (ln n)^{1/(alpha+2)}); requires n >= 2, eps in (0, 1/2).
std::int64_t k_epsilon_n(double epsilon, std::int64_t n, const ModelParams& params);

struct ConstantOverrides {
  std::optional<double> c3;
  std::optional<double> cM;
};

struct ConstantsTable {
  double K = 0;
  double R = 0;
  double c1 = 0;
  double c2 = 0;
  double c3 = 0;
  double cV = 0;
  double c_star = 0;
  double cM = 0;
  double h = 0;
  double c_main = 0;
  double theta_inf = 0;
  double sup_theta = 0;  // sup_j theta_seq_V(j)
  double C_U = 0;        // fitted over k <= cu_fit_kmax
  double D = 0;          // 2/cV + C_U
  std::int64_t cu_fit_kmax = 0;
  std::map<std::string, std::string> provenance;
};

inline constexpr std::int64_t kDefaultCuFitKmax = 1000;

ConstantsTable compute_constants(const ModelParams& params, const ConstantOverrides& overrides = {},
                                 std::int64_t cu_fit_kmax = kDefaultCuFitKmax);

/// Coefficients a_0(k), a_1(k), k = 1..k_max, stored as logarithms because
/// a_0(k) decays like 1/k! and underflows for k in the hundreds.
struct CoefficientSeries {
  std::vector<double> log_a0;  // index k-1
  std::vector<double> log_a1;

  std::int64_t k_max() const { return static_cast<std::int64_t>(log_a0.size()); }
  double a0(std::int64_t k) const;
  double a1(std::int64_t k) const;
};

CoefficientSeries coefficients(std::int64_t k_max, const ModelParams& params,
                               const ConstantsTable& constants);

/// ln a_0(k) from the Gamma closed form (independent of the recursion).
double log_a0_closed_form(std::int64_t k, const ModelParams& params);

/// ln f_n(k) = ln a_0(k) + ln psi_n(k) + k ln n, for k <= min(n, coeffs.k_max()).
double log_f_n_k(std::int64_t n, std::int64_t k, const ModelParams& params,
                 const CoefficientSeries& coeffs);
double f_n_k(std::int64_t n, std::int64_t k, const ModelParams& params,
             const CoefficientSeries& coeffs);

}  // namespace gcrp
