#include "gcrp/normalizers.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gcrp/error.hpp"
#include "gcrp/special.hpp"

namespace gcrp {
namespace {

using special::log_gamma;
using special::log_gamma_ratio;

void require_polynomial(const ModelParams& params, const char* what) {
  if (!params.polynomial()) {
    throw DomainError(std::string(what) + ": defined only in the polynomial regime (0 < alpha < 1, theta > -alpha)");
  }
}

}  // namespace

double log_phi(std::int64_t n, const ModelParams& params) {
  require_polynomial(params, "log_phi");
  if (n < 1) throw DomainError("log_phi: n must be >= 1");
  if (n == 1) return 0.0;
  const double a = params.alpha();
  const double t = params.theta();
  return log_gamma_ratio(static_cast<double>(n) + t, a) - log_gamma_ratio(1.0 + t, a);
}

double phi(std::int64_t n, const ModelParams& params) { return std::exp(log_phi(n, params)); }

double log_psi(std::int64_t n, std::int64_t k, const ModelParams& params) {
  require_polynomial(params, "log_psi");
  if (k < 1 || n < k) throw DomainError("log_psi: requires 1 <= k <= n");
  const double a = params.alpha();
  const double t = params.theta();
  const double kd = static_cast<double>(k);
  return log_gamma_ratio(a + t, kd - a) + log_gamma_ratio(static_cast<double>(n) + t, a - kd);
}

double theta_seq_V(std::int64_t n, const ModelParams& params) {
  require_polynomial(params, "theta_seq_V");
  if (n < 1) throw DomainError("theta_seq_V: n must be >= 1");
  const double ratio = params.theta() / params.alpha();
  // 1 - 1/phi_n, kept accurate when phi_n is close to 1.
  const double one_minus_inv_phi = -std::expm1(-log_phi(n, params));
  return 1.0 + ratio * one_minus_inv_phi;
}

double theta_inf(const ModelParams& params) {
  require_polynomial(params, "theta_inf");
  return 1.0 + params.theta() / params.alpha();
}

double theta_tail_bound(std::int64_t m, const ModelParams& params) {
  require_polynomial(params, "theta_tail_bound");
  if (m < 1) throw DomainError("theta_tail_bound: m must be >= 1");
  const double a = params.alpha();
  const double t = params.theta();
  return 4.0 * std::exp(log_gamma_ratio(1.0 + t, a)) * std::abs(t) / a *
         std::pow(static_cast<double>(m) + t, -a);
}

double theta_seq_1(std::int64_t n, const ModelParams& params) {
  require_polynomial(params, "theta_seq_1");
  if (n < 1) throw DomainError("theta_seq_1: n must be >= 1");
  if (n == 1) return 1.0;
  const double a = params.alpha();
  const double t = params.theta();
  // sum_{j=1}^{n-1} G(j+t)/G(j+t+a) = [g(n) - g(1)]/(1-a), g(j) = G(j+t)/G(j-1+t+a),
  // and the prefactor t G(a+t)/G(1+t) maps g(1) to exactly t.
  const double log_pref = log_gamma_ratio(1.0 + t, a - 1.0);  // ln G(a+t)/G(1+t)
  const double log_gn = log_gamma_ratio(static_cast<double>(n) - 1.0 + t + a, 1.0 - a);
  return 1.0 + t * (std::exp(log_pref + log_gn) - 1.0) / (1.0 - a);
}

double theta_seq_1_bound(std::int64_t n, const ModelParams& params) {
  require_polynomial(params, "theta_seq_1_bound");
  const double a = params.alpha();
  const double t = params.theta();
  return 1.0 + 2.0 * t * std::exp(log_gamma_ratio(1.0 + t, a - 1.0)) / (1.0 - a) *
                   std::pow(static_cast<double>(n) + t, 1.0 - a);
}

double c_main(const ModelParams& params) {
  require_polynomial(params, "c_main");
  const double a = params.alpha();
  return a * std::exp(-log_gamma_ratio(1.0 + params.theta(), a) - log_gamma(1.0 - a));
}

double log_size_weight(std::int64_t k, double alpha) {
  if (k < 1) throw DomainError("log_size_weight: k must be >= 1");
  return -log_gamma_ratio(static_cast<double>(k) - alpha, 1.0 + alpha);
}

std::int64_t k_epsilon_n(double epsilon, std::int64_t n, const ModelParams& params) {
  require_polynomial(params, "k_epsilon_n");
  if (n < 2) throw DomainError("k_epsilon_n: n must be >= 2");
  if (!(epsilon > 0.0 && epsilon < 0.5)) throw DomainError("k_epsilon_n: epsilon must lie in (0, 1/2)");
  const double a = params.alpha();
  const double ln_n = std::log(static_cast<double>(n));
  const double v = epsilon * std::exp(a / (2.0 * a + 4.0) * ln_n) / std::pow(ln_n, 1.0 / (a + 2.0));
  return static_cast<std::int64_t>(std::ceil(v));
}

double CoefficientSeries::a0(std::int64_t k) const { return std::exp(log_a0.at(k - 1)); }
double CoefficientSeries::a1(std::int64_t k) const { return std::exp(log_a1.at(k - 1)); }

double log_a0_closed_form(std::int64_t k, const ModelParams& params) {
  require_polynomial(params, "log_a0_closed_form");
  if (k < 1) throw DomainError("log_a0_closed_form: k must be >= 1");
  const double a = params.alpha();
  const double t = params.theta();
  const double kd = static_cast<double>(k);
  // G(k-a)/G(1-a) * G(1+t)/G(k+t) / k! * a/(a+t)
  return log_gamma_ratio(1.0 - a, kd - 1.0) - log_gamma_ratio(1.0 + t, kd - 1.0) -
         log_gamma(kd + 1.0) + std::log(a / (a + t));
}

CoefficientSeries coefficients(std::int64_t k_max, const ModelParams& params,
                               const ConstantsTable& constants) {
  require_polynomial(params, "coefficients");
  if (k_max < 1) throw DomainError("coefficients: k_max must be >= 1");
  const double a = params.alpha();
  const double t = params.theta();
  const double log_h = std::log(constants.h);

  const double a1_first = constants.h / std::exp(log_gamma(1.0 + t)) +
                          a / (constants.cV * (a + t) * (1.0 - a / 2.0)) + 1.0 +
                          2.0 * t * std::exp(log_gamma_ratio(1.0 + t, a - 1.0)) / (1.0 - a);
  if (!(a1_first > 0.0)) throw DomainError("coefficients: a1(1) is not positive");

  CoefficientSeries s;
  s.log_a0.resize(static_cast<std::size_t>(k_max));
  s.log_a1.resize(static_cast<std::size_t>(k_max));
  s.log_a0[0] = std::log(a / (a + t));
  s.log_a1[0] = std::log(a1_first);
  for (std::int64_t k = 2; k <= k_max; ++k) {
    const double kd = static_cast<double>(k);
    const double log_step = std::log(kd - 1.0 - a) - std::log(kd - 1.0 + t);
    s.log_a0[k - 1] = s.log_a0[k - 2] + log_step - std::log(kd);
    s.log_a1[k - 1] = special::log_add_exp(log_h - log_gamma(kd + t),
                                           log_step - std::log(kd - a / 2.0) + s.log_a1[k - 2]);
  }
  return s;
}

double log_f_n_k(std::int64_t n, std::int64_t k, const ModelParams& params,
                 const CoefficientSeries& coeffs) {
  if (k > n) throw DomainError("f_n_k: requires k <= n");
  if (k < 1 || k > coeffs.k_max()) throw DomainError("f_n_k: k outside coefficient range");
  return coeffs.log_a0[k - 1] + log_psi(n, k, params) +
         static_cast<double>(k) * std::log(static_cast<double>(n));
}

double f_n_k(std::int64_t n, std::int64_t k, const ModelParams& params,
             const CoefficientSeries& coeffs) {
  return std::exp(log_f_n_k(n, k, params, coeffs));
}

ConstantsTable compute_constants(const ModelParams& params, const ConstantOverrides& overrides,
                                 std::int64_t cu_fit_kmax) {
  require_polynomial(params, "compute_constants");
  if (cu_fit_kmax < 1) throw DomainError("compute_constants: cu_fit_kmax must be >= 1");
  const double a = params.alpha();
  const double t = params.theta();
  const double ratio_up = std::exp(log_gamma_ratio(1.0 + t, a));  // G(1+t+a)/G(1+t)

  ConstantsTable c;
  auto& prov = c.provenance;

  c.theta_inf = theta_inf(params);
  prov["theta_inf"] = "closed form 1 + theta/alpha (telescoped drift sum)";
  c.sup_theta = t >= 0.0 ? c.theta_inf : 1.0;
  prov["sup_theta"] = t >= 0.0 ? "theta_inf (drift nondecreasing for theta >= 0)"
                               : "theta_1 = 1 (drift nonincreasing for theta < 0)";
  c.K = t / a + c.sup_theta;
  prov["K"] = "theta/alpha + sup_j theta_j";

  c.R = 2.0 * ratio_up * std::pow(1.0 + t, -a);
  prov["R"] = "2 Gamma(1+theta+alpha)/Gamma(1+theta) (1+theta)^-alpha";
  c.c1 = 2.0 / c.R;
  prov["c1"] = "2/R";
  c.c2 = 1.0 / (2.0 * c.c1 + 2.0 / 3.0);
  prov["c2"] = "1/(2 c1 + 2/3)";
  if (overrides.c3) {
    if (!(*overrides.c3 > 0.0)) throw DomainError("c3 override must be positive");
    c.c3 = *overrides.c3;
    prov["c3"] = "user override";
  } else {
    c.c3 = c.c2;
    prov["c3"] = "default c3 = c2 (unspecified constant)";
  }
  c.cV = std::numbers::ln2 * std::min(c.c2, c.c3);
  prov["cV"] = "ln 2 min(c2, c3)";
  c.c_star = 32.0 / c.cV;
  prov["c_star"] = "32/cV";
  if (overrides.cM) {
    if (!(*overrides.cM > 0.0)) throw DomainError("cM override must be positive");
    c.cM = *overrides.cM;
    prov["cM"] = "user override";
  } else {
    c.cM = std::numbers::ln2 * std::min(3.0 / 8.0, c.cV);
    prov["cM"] = "default ln 2 min(3/8, cV) (unspecified constant)";
  }
  c.h = 2.0 * std::numbers::sqrt2 * std::exp(1.0 / 12.0) / c.cM * std::exp(log_gamma(a + t)) *
        std::max(1.0, 2.0 / std::sqrt(ratio_up));
  prov["h"] = "(2 sqrt2 e^{1/12}/cM) Gamma(alpha+theta) max{1, 2 sqrt(Gamma(1+theta)/Gamma(1+theta+alpha))}";
  c.c_main = c_main(params);
  prov["c_main"] = "alpha Gamma(1+theta)/(Gamma(1-alpha) Gamma(1+alpha+theta))";

  c.cu_fit_kmax = cu_fit_kmax;
  const CoefficientSeries coeffs = coefficients(cu_fit_kmax, params, c);
  double best = -INFINITY;
  for (std::int64_t k = 1; k <= cu_fit_kmax; ++k) {
    const double v = coeffs.log_a1[k - 1] - coeffs.log_a0[k - 1] -
                     (a + 2.0) * std::log(static_cast<double>(k));
    best = std::max(best, v);
  }
  c.C_U = std::exp(best);
  prov["C_U"] = "fitted: max_{k<=" + std::to_string(cu_fit_kmax) + "} a1(k)/(a0(k) k^{alpha+2})";
  c.D = 2.0 / c.cV + c.C_U;
  prov["D"] = "2/cV + C_U";
  return c;
}

}  // namespace gcrp
