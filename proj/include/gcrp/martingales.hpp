#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gcrp/normalizers.hpp"
#include "gcrp/simulate.hpp"

namespace gcrp {

/// Running tally of a per-step inequality lhs <= rhs.
struct BoundAudit {
  std::string name;
  std::int64_t checks = 0;
  std::int64_t violations = 0;
  double max_ratio = 0.0;  // max lhs/rhs seen
  std::int64_t argmax_step = 0;

  void record(double lhs, double rhs, std::int64_t step);
  bool passed() const { return violations == 0; }
};

/// Residual tally for an exact identity: |r| <= rel_tol * scale or |r| <= abs_tol,
/// where scale is the sum of magnitudes of the identity's terms.
struct IdentityAudit {
  std::string name;
  std::int64_t checks = 0;
  std::int64_t failures = 0;
  double max_rel = 0.0;  // max |r|/scale
  double max_abs = 0.0;

  static constexpr double kRelTol = 1e-9;
  static constexpr double kAbsTol = 1e-12;

  void record(double residual, double scale);
  bool passed() const { return failures == 0; }
};

struct VSnapshot {
  std::int64_t n = 0;
  std::int64_t num_parts = 0;
  double v_over_phi = 0;
  double martingale = 0;
  double quad_var = 0;
  double drift = 0;
  double residual = 0;
};

/// Tracks V_n/phi_n = M_n + theta_n along a path, the predictable quadratic
/// variation W_n, and the per-step increment and variance bounds.
class VMartingaleTracker final : public StepObserver {
 public:
  /// anchors: extra times m at which V_n/phi_n - V_m/phi_m = (M_n - M_m) + (theta_n - theta_m)
  /// is checked for every later n. checkpoints: times to snapshot.
  VMartingaleTracker(const ModelParams& params, const ConstantsTable& constants,
                     std::vector<std::int64_t> checkpoints = {},
                     std::vector<std::int64_t> anchors = {});

  void on_start(const Chain& initial) override;
  void on_step(const Chain& before, const Move& move) override;

  std::int64_t n() const { return n_; }
  double martingale() const { return m_; }
  double quad_var() const { return w_; }
  bool quad_var_monotone() const { return w_monotone_; }

  const IdentityAudit& identity() const { return identity_; }
  const IdentityAudit& anchored_identity() const { return anchored_; }
  const IdentityAudit& zero_mean() const { return zero_mean_; }
  const BoundAudit& increment_bound() const { return increment_; }
  const BoundAudit& variance_bound() const { return variance_; }
  const std::vector<VSnapshot>& snapshots() const { return snapshots_; }

 private:
  struct Anchor {
    std::int64_t m;
    bool set = false;
    double v_over_phi = 0, martingale = 0, drift = 0;
  };

  ModelParams params_;
  double R_;
  double variance_prefactor_;
  std::vector<std::int64_t> checkpoints_;
  std::size_t next_checkpoint_ = 0;
  std::vector<Anchor> anchors_;

  std::int64_t n_ = 1;
  double m_ = 0.0;
  double w_ = 0.0;
  bool w_monotone_ = true;

  IdentityAudit identity_{"V: V_n/phi_n = M_n + theta_n"};
  IdentityAudit anchored_{"V: anchored recurrence from time m"};
  IdentityAudit zero_mean_{"V: conditional mean of increment is zero"};
  BoundAudit increment_{"V: |dM_j| <= R"};
  BoundAudit variance_{"V: E[dM_j^2|F] <= 2 alpha G(1+t+a)/G(1+t) (j+t)^(-a-1) (V+t/a)/phi_{j-1}"};
  std::vector<VSnapshot> snapshots_;

  void after_step(std::int64_t num_parts);
};

struct XSnapshot {
  std::int64_t n = 0;
  std::int64_t k = 0;
  std::int64_t count = 0;
  double x = 0;
  double martingale = 0;
  double quad_var = 0;
  double residual = 0;
};

/// Tracks the decompositions of X_n(k) = N_n(k)/psi_n(k) for k = 1..k_max.
class XMartingaleTracker final : public StepObserver {
 public:
  /// audit_horizon: the n in the increment bound e^{1/12} G(a+t)/G(k+t) (n+t)^{k-a}.
  XMartingaleTracker(const ModelParams& params, std::int64_t k_max, std::int64_t audit_horizon,
                     std::vector<std::int64_t> checkpoints = {});

  void on_start(const Chain& initial) override;
  void on_step(const Chain& before, const Move& move) override;

  std::int64_t k_max() const { return k_max_; }
  double martingale(std::int64_t k) const { return m_.at(k - 1); }
  double quad_var(std::int64_t k) const { return w_.at(k - 1); }

  const IdentityAudit& identity_k1() const { return identity_k1_; }
  const IdentityAudit& identity_k() const { return identity_k_; }
  const IdentityAudit& zero_mean() const { return zero_mean_; }
  const BoundAudit& increment_bound() const { return increment_; }
  /// Same increment bound with (j-1+theta) in place of (n+theta); informational.
  const BoundAudit& increment_bound_stepwise() const { return increment_stepwise_; }
  /// The reciprocal normalizer bound 1/psi_j(k) <= e^{1/12} G(a+t)/G(k+t) (j+t)^{k-a} alone.
  const BoundAudit& inverse_psi_bound() const { return inverse_psi_; }
  /// Horizon increment bound with the factor |dN - E[dN|F]| <= 2 restored.
  const BoundAudit& increment_bound_doubled() const { return increment_doubled_; }
  const BoundAudit& variance_bound_first() const { return variance_first_; }
  const BoundAudit& variance_bound_final() const { return variance_final_; }
  const std::vector<XSnapshot>& snapshots() const { return snapshots_; }

 private:
  ModelParams params_;
  std::int64_t k_max_;
  double log_incr_horizon_;  // ln(audit_horizon + theta)
  std::vector<double> log_gamma_k_theta_;  // ln G(k+theta)
  double log_gamma_a_t_;
  double log_var_final_pref_;  // ln[G(1+t) G(a+t)^2 / G(1+t+a)]
  std::vector<std::int64_t> checkpoints_;
  std::size_t next_checkpoint_ = 0;

  std::int64_t n_ = 1;
  std::vector<double> m_, w_;
  std::vector<double> base_;       // X_k(k), set when n reaches k
  std::vector<double> lagged_sum_; // sum_{j=k}^{n-1} X_j(k-1)
  double drift_sum_1_ = 0.0;       // sum_{i<n} alpha V_i/((i+t) psi_{i+1}(1))
  std::vector<double> log_psi_now_;

  IdentityAudit identity_k1_{"X(1): X_n(1) = M_n(1) + drift + theta_n(1)"};
  IdentityAudit identity_k_{"X(k): X_n(k) = M_n(k) + X_k(k) + c_k sum X_j(k-1)"};
  IdentityAudit zero_mean_{"X: conditional mean of increment is zero"};
  BoundAudit increment_{"X: |dM_j(k)| <= e^{1/12} G(a+t)/G(k+t) (n+t)^{k-a}"};
  BoundAudit increment_stepwise_{"X: |dM_j(k)| <= e^{1/12} G(a+t)/G(k+t) (j-1+t)^{k-a}"};
  BoundAudit inverse_psi_{"X: 1/psi_j(k) <= e^{1/12} G(a+t)/G(k+t) (j+t)^{k-a}"};
  BoundAudit increment_doubled_{"X: |dM_j(k)| <= 2 e^{1/12} G(a+t)/G(k+t) (n+t)^{k-a}"};
  BoundAudit variance_first_{"X: E[dM_j(k)^2|F] <= 4/(psi^2 (j-1+t)) [...]"};
  BoundAudit variance_final_{"X: E[dM_j(k)^2|F] <= final display of the variance lemma"};
  std::vector<XSnapshot> snapshots_;

  void fill_log_psi(std::int64_t n);
  void after_step(const std::vector<std::int64_t>& counts);
};

/// exp(-lambda^2 / (2 sigma^2 + 2 R lambda / 3)), clamped to [0, 1].
double freedman_bound(double lambda, double sigma_sq, double R);
/// Variant with 2 sigma (not 2 sigma^2) in the denominator, as printed in the
/// source statement; reported alongside the standard form.
double freedman_bound_printed(double lambda, double sigma_sq, double R);
/// min(1, 2 exp(-lambda/(2 c1 + 2/3)) + tail_W).
double aux_bound(double lambda, double c1, double tail_W);

}  // namespace gcrp
