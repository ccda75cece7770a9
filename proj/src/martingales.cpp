#include "gcrp/martingales.hpp"

#include <algorithm>
#include <cmath>

#include "gcrp/error.hpp"
#include "gcrp/special.hpp"

namespace gcrp {
namespace {

using special::log_gamma;
using special::log_gamma_ratio;

// Ratio lhs/rhs from logarithms; lhs == 0 is encoded as -inf.
double ratio_from_logs(double log_lhs, double log_rhs) {
  if (log_lhs == -INFINITY) return 0.0;
  return std::exp(log_lhs - log_rhs);
}

}  // namespace

void BoundAudit::record(double lhs, double rhs, std::int64_t step) {
  ++checks;
  const double ratio = lhs <= 0.0 ? 0.0 : lhs / rhs;
  if (ratio > 1.0) ++violations;
  if (ratio > max_ratio) {
    max_ratio = ratio;
    argmax_step = step;
  }
}

void IdentityAudit::record(double residual, double scale) {
  ++checks;
  const double r = std::abs(residual);
  if (!(r <= kRelTol * scale || r <= kAbsTol)) ++failures;
  max_abs = std::max(max_abs, r);
  if (scale > 0.0) max_rel = std::max(max_rel, r / scale);
}

// ---------------------------------------------------------------------------

VMartingaleTracker::VMartingaleTracker(const ModelParams& params, const ConstantsTable& constants,
                                       std::vector<std::int64_t> checkpoints,
                                       std::vector<std::int64_t> anchors)
    : params_(params),
      R_(constants.R),
      variance_prefactor_(2.0 * params.alpha() *
                          std::exp(log_gamma_ratio(1.0 + params.theta(), params.alpha()))),
      checkpoints_(std::move(checkpoints)) {
  if (!params.polynomial()) throw DomainError("V martingale tracking requires the polynomial regime");
  std::sort(checkpoints_.begin(), checkpoints_.end());
  for (auto m : anchors) {
    if (m < 1) throw ConfigError("anchor times must be >= 1");
    anchors_.push_back({m});
  }
}

void VMartingaleTracker::on_start(const Chain& initial) {
  n_ = initial.n();
  m_ = 0.0;
  w_ = 0.0;
  next_checkpoint_ = 0;
  after_step(initial.num_parts());
}

void VMartingaleTracker::after_step(std::int64_t num_parts) {
  const double v_over_phi = static_cast<double>(num_parts) / phi(n_, params_);
  const double drift = theta_seq_V(n_, params_);
  const double residual = v_over_phi - m_ - drift;
  identity_.record(residual, std::abs(v_over_phi) + std::abs(m_) + std::abs(drift));

  for (auto& a : anchors_) {
    if (a.m == n_) {
      a.set = true;
      a.v_over_phi = v_over_phi;
      a.martingale = m_;
      a.drift = drift;
    } else if (a.set) {
      const double r = (v_over_phi - a.v_over_phi) - (m_ - a.martingale) - (drift - a.drift);
      anchored_.record(r, std::abs(v_over_phi) + std::abs(a.v_over_phi) + std::abs(m_) +
                              std::abs(a.martingale) + std::abs(drift) + std::abs(a.drift));
    }
  }

  while (next_checkpoint_ < checkpoints_.size() && checkpoints_[next_checkpoint_] < n_) ++next_checkpoint_;
  if (next_checkpoint_ < checkpoints_.size() && checkpoints_[next_checkpoint_] == n_) {
    snapshots_.push_back({n_, num_parts, v_over_phi, m_, w_, drift, residual});
    ++next_checkpoint_;
  }
}

void VMartingaleTracker::on_step(const Chain& before, const Move& move) {
  const std::int64_t j = before.n() + 1;
  const double p = before.new_part_prob();
  const double dv = move.is_new_part() ? 1.0 : 0.0;
  const double phi_j = phi(j, params_);
  const double phi_prev = phi(j - 1, params_);
  const auto v_prev = static_cast<double>(before.num_parts());

  const double zeta = (dv - p) / phi_j;
  const double var = p * (1.0 - p) / (phi_j * phi_j);

  zero_mean_.record(p * (1.0 - p) + (1.0 - p) * (0.0 - p), 2.0 * p * (1.0 - p));
  increment_.record(std::abs(zeta), R_, j);
  const double t = params_.theta();
  const double a = params_.alpha();
  variance_.record(var, variance_prefactor_ * std::pow(static_cast<double>(j) + t, -a - 1.0) *
                            (v_prev + t / a) / phi_prev,
                   j);

  m_ += zeta;
  const double w_next = w_ + var;
  if (w_next < w_) w_monotone_ = false;
  w_ = w_next;
  n_ = j;
  after_step(before.num_parts() + (move.is_new_part() ? 1 : 0));
}

// ---------------------------------------------------------------------------

XMartingaleTracker::XMartingaleTracker(const ModelParams& params, std::int64_t k_max,
                                       std::int64_t audit_horizon,
                                       std::vector<std::int64_t> checkpoints)
    : params_(params), k_max_(k_max), checkpoints_(std::move(checkpoints)) {
  if (!params.polynomial()) throw DomainError("X martingale tracking requires the polynomial regime");
  if (k_max < 1) throw ConfigError("k_max must be >= 1");
  if (audit_horizon < 1) throw ConfigError("audit horizon must be >= 1");
  std::sort(checkpoints_.begin(), checkpoints_.end());
  const double a = params.alpha();
  const double t = params.theta();
  log_incr_horizon_ = std::log(static_cast<double>(audit_horizon) + t);
  log_gamma_a_t_ = log_gamma(a + t);
  log_gamma_k_theta_.resize(static_cast<std::size_t>(k_max));
  for (std::int64_t k = 1; k <= k_max; ++k) log_gamma_k_theta_[k - 1] = log_gamma(static_cast<double>(k) + t);
  log_var_final_pref_ = -log_gamma_ratio(1.0 + t, a) + 2.0 * log_gamma_a_t_;
  const auto size = static_cast<std::size_t>(k_max);
  m_.assign(size, 0.0);
  w_.assign(size, 0.0);
  base_.assign(size, 0.0);
  lagged_sum_.assign(size, 0.0);
  log_psi_now_.assign(size, 0.0);
}

void XMartingaleTracker::fill_log_psi(std::int64_t n) {
  const double a = params_.alpha();
  const double t = params_.theta();
  const std::int64_t top = std::min(k_max_, n);
  log_psi_now_[0] = log_psi(n, 1, params_);
  for (std::int64_t k = 2; k <= top; ++k) {
    const double kd = static_cast<double>(k);
    log_psi_now_[k - 1] = log_psi_now_[k - 2] + std::log(kd - 1.0 + t) -
                          std::log(static_cast<double>(n) - kd + a + t);
  }
}

void XMartingaleTracker::on_start(const Chain& initial) {
  n_ = initial.n();
  std::fill(m_.begin(), m_.end(), 0.0);
  std::fill(w_.begin(), w_.end(), 0.0);
  std::fill(lagged_sum_.begin(), lagged_sum_.end(), 0.0);
  drift_sum_1_ = 0.0;
  next_checkpoint_ = 0;
  fill_log_psi(n_);
  std::vector<std::int64_t> counts(static_cast<std::size_t>(std::min(k_max_, n_)));
  for (std::size_t i = 0; i < counts.size(); ++i) counts[i] = initial.count(static_cast<std::int64_t>(i) + 1);
  after_step(counts);
}

void XMartingaleTracker::after_step(const std::vector<std::int64_t>& counts) {
  // counts[k-1] = N_n(k) at time n_; log_psi_now_ filled for n_.
  const double a = params_.alpha();
  const double t = params_.theta();
  const std::int64_t top = std::min(k_max_, n_);
  std::vector<double> x(static_cast<std::size_t>(top));
  for (std::int64_t k = 1; k <= top; ++k) {
    x[k - 1] = static_cast<double>(counts[k - 1]) * std::exp(-log_psi_now_[k - 1]);
  }

  const double drift1 = theta_seq_1(n_, params_);
  const double r1 = x[0] - m_[0] - drift_sum_1_ - drift1;
  identity_k1_.record(r1, std::abs(x[0]) + std::abs(m_[0]) + std::abs(drift_sum_1_) + std::abs(drift1));

  for (std::int64_t k = 2; k <= top; ++k) {
    if (n_ == k) {
      base_[k - 1] = x[k - 1];
      continue;
    }
    const double kd = static_cast<double>(k);
    const double lagged = (kd - 1.0 - a) / (kd - 1.0 + t) * lagged_sum_[k - 1];
    const double r = x[k - 1] - m_[k - 1] - base_[k - 1] - lagged;
    identity_k_.record(r, std::abs(x[k - 1]) + std::abs(m_[k - 1]) + std::abs(base_[k - 1]) +
                              std::abs(lagged));
  }
  for (std::int64_t k = 2; k <= top; ++k) lagged_sum_[k - 1] += x[k - 2];

  while (next_checkpoint_ < checkpoints_.size() && checkpoints_[next_checkpoint_] < n_) ++next_checkpoint_;
  if (next_checkpoint_ < checkpoints_.size() && checkpoints_[next_checkpoint_] == n_) {
    for (std::int64_t k = 1; k <= top; ++k) {
      double residual = 0.0;
      if (k == 1) {
        residual = r1;
      } else if (n_ > k) {
        const double kd = static_cast<double>(k);
        residual = x[k - 1] - m_[k - 1] - base_[k - 1] -
                   (kd - 1.0 - a) / (kd - 1.0 + t) * (lagged_sum_[k - 1] - x[k - 2]);
      }
      snapshots_.push_back({n_, k, counts[k - 1], x[k - 1], m_[k - 1], w_[k - 1], residual});
    }
    ++next_checkpoint_;
  }
}

void XMartingaleTracker::on_step(const Chain& before, const Move& move) {
  const std::int64_t j = before.n() + 1;
  const double a = params_.alpha();
  const double t = params_.theta();
  const double denom = static_cast<double>(j - 1) + t;
  const double log_denom = std::log(denom);
  const double phi_prev = phi(j - 1, params_);
  const auto v_prev = static_cast<double>(before.num_parts());

  fill_log_psi(j);
  drift_sum_1_ += a * v_prev / denom * std::exp(-log_psi_now_[0]);

  const std::int64_t top = std::min(k_max_, j - 1);
  for (std::int64_t k = 1; k <= top; ++k) {
    const double kd = static_cast<double>(k);
    double p_up = 0.0;
    double p_dn = 0.0;
    double dn = 0.0;
    const auto n_k = static_cast<double>(before.count(k));
    if (k == 1) {
      p_up = before.new_part_prob();
      p_dn = (1.0 - a) * n_k / denom;
      if (move.is_new_part()) dn = 1.0;
    } else {
      p_up = (kd - 1.0 - a) * static_cast<double>(before.count(k - 1)) / denom;
      p_dn = (kd - a) * n_k / denom;
      if (!move.is_new_part() && move.size == k - 1) dn = 1.0;
    }
    if (!move.is_new_part() && move.size == k) dn = -1.0;

    const double lpsi = log_psi_now_[k - 1];
    const double inv_psi = std::exp(-lpsi);
    const double mean = p_up - p_dn;
    const double zeta = (dn - mean) * inv_psi;
    const double raw_var = std::max(0.0, p_up + p_dn - mean * mean);
    const double var = raw_var * inv_psi * inv_psi;

    zero_mean_.record(p_up * (1.0 - mean) + p_dn * (-1.0 - mean) + (1.0 - p_up - p_dn) * (-mean),
                      p_up + p_dn);

    const double log_abs_zeta = zeta == 0.0 ? -INFINITY : std::log(std::abs(zeta));
    const double log_incr_pref = 1.0 / 12.0 + log_gamma_a_t_ - log_gamma_k_theta_[k - 1];
    auto log_record = [&](BoundAudit& audit, double log_lhs, double log_rhs) {
      const double ratio = ratio_from_logs(log_lhs, log_rhs);
      audit.record(ratio, 1.0, j);
    };
    log_record(increment_, log_abs_zeta, log_incr_pref + (kd - a) * log_incr_horizon_);
    log_record(increment_stepwise_, log_abs_zeta, log_incr_pref + (kd - a) * log_denom);
    log_record(inverse_psi_, -lpsi, log_incr_pref + (kd - a) * std::log(static_cast<double>(j) + t));
    log_record(increment_doubled_, log_abs_zeta,
               std::log(2.0) + log_incr_pref + (kd - a) * log_incr_horizon_);

    const double log_var = raw_var == 0.0 ? -INFINITY : std::log(raw_var) - 2.0 * lpsi;
    if (k == 1) {
      log_record(variance_first_, log_var,
                 std::log(4.0) - 2.0 * lpsi + std::log(v_prev + t) - log_denom);
      log_record(variance_final_, log_var,
                 std::log(4.0 * (2.0 - a)) + 1.0 / 6.0 + log_var_final_pref_ -
                     2.0 * log_gamma_k_theta_[0] + (1.0 - a) * log_denom +
                     std::log((v_prev + t) / phi_prev));
    } else {
      const double mix = static_cast<double>(before.count(k - 1)) * (kd - 1.0 - a) + n_k * (kd - a);
      log_record(variance_first_, log_var, std::log(4.0 * mix) - 2.0 * lpsi - log_denom);
      log_record(variance_final_, log_var,
                 std::log(4.0 * (2.0 * kd - a)) + log_var_final_pref_ -
                     2.0 * log_gamma_k_theta_[k - 1] + (2.0 * kd - a - 1.0) * log_denom +
                     std::log(v_prev / phi_prev));
    }

    m_[k - 1] += zeta;
    w_[k - 1] += var;
  }

  n_ = j;
  std::vector<std::int64_t> counts(static_cast<std::size_t>(std::min(k_max_, j)));
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const auto k = static_cast<std::int64_t>(i) + 1;
    counts[i] = before.count(k);
    if (move.is_new_part()) {
      if (k == 1) ++counts[i];
    } else {
      if (move.size == k) --counts[i];
      if (move.size + 1 == k) ++counts[i];
    }
  }
  after_step(counts);
}

// ---------------------------------------------------------------------------

double freedman_bound(double lambda, double sigma_sq, double R) {
  if (!(lambda >= 0.0) || !(sigma_sq >= 0.0) || !(R > 0.0)) {
    throw DomainError("freedman_bound: requires lambda >= 0, sigma^2 >= 0, R > 0");
  }
  if (lambda == 0.0) return 1.0;
  return std::clamp(std::exp(-lambda * lambda / (2.0 * sigma_sq + 2.0 * R * lambda / 3.0)), 0.0, 1.0);
}

double freedman_bound_printed(double lambda, double sigma_sq, double R) {
  if (!(lambda >= 0.0) || !(sigma_sq >= 0.0) || !(R > 0.0)) {
    throw DomainError("freedman_bound_printed: requires lambda >= 0, sigma^2 >= 0, R > 0");
  }
  if (lambda == 0.0) return 1.0;
  return std::clamp(std::exp(-lambda * lambda / (2.0 * std::sqrt(sigma_sq) + 2.0 * R * lambda / 3.0)),
                    0.0, 1.0);
}

double aux_bound(double lambda, double c1, double tail_W) {
  if (!(lambda > 0.0) || !(c1 > 0.0) || !(tail_W >= 0.0 && tail_W <= 1.0)) {
    throw DomainError("aux_bound: requires lambda > 0, c1 > 0, tail_W in [0, 1]");
  }
  return std::min(1.0, 2.0 * std::exp(-lambda / (2.0 * c1 + 2.0 / 3.0)) + tail_W);
}

}  // namespace gcrp
