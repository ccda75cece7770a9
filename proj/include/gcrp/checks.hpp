#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gcrp/ensemble.hpp"
#include "gcrp/normalizers.hpp"

namespace gcrp {

/// Empirical frequency of a bad event against its theoretical probability bound.
struct EventRow {
  std::string label;
  std::int64_t violations = 0;
  std::int64_t trials = 0;
  double frequency = 0;
  double wilson_lo = 0;
  double wilson_hi = 0;
  double bound = 0;
  bool pass = false;  // wilson_lo <= bound
};

EventRow make_event_row(std::string label, std::int64_t violations, std::int64_t trials, double bound);

/// A fitted or summarised quantity that must land in [lo, hi].
struct RangeCheck {
  std::string label;
  double value = 0;
  double lo = 0;
  double hi = 0;
  bool pass = false;
};

RangeCheck make_range_check(std::string label, double value, double lo, double hi);

struct EventReport {
  std::string event;  // ThmV | Vm | Enk | Main | LLN | Corollary | Envelope | PowerLaw
  ModelParams params;
  std::int64_t horizon = 0;
  std::int64_t replicas = 0;
  std::uint64_t base_seed = 0;
  std::vector<EventRow> rows;
  std::vector<RangeCheck> ranges;
  std::map<std::string, double> metrics;  // informational, never affect the verdict
  std::vector<std::string> notes;

  bool passed() const;
};

/// Theorem on V_n/phi_n: sup over checkpoints of
/// |V_m/phi_m - V*| (m+theta)^{alpha/2} / (c_* [ln ln(m+2) + ln(1/delta)]) > 1,
/// with V* estimated at the horizon. Requires delta < e^{-K}.
EventReport check_thm_V(const EnsembleSummary& ensemble, double delta, const ConstantsTable& constants);

/// Slope of ln std(V_m/phi_m - V*) against ln m over checkpoints in [m_lo, m_hi];
/// expected -alpha/2 within tolerance.
EventReport envelope_slope(const EnsembleSummary& ensemble, std::int64_t m_lo, std::int64_t m_hi,
                           double tolerance = 0.15);

/// P(sup_j V_j/phi_j >= A) against exp(-cV A) for each A (all A >= K).
EventReport check_vm_tail(const EnsembleSummary& ensemble, const std::vector<double>& a_grid,
                          const ConstantsTable& constants);

/// Complement of the joint upper/lower control event over checkpoints m <= n and
/// sizes s <= k_max, against (k_max/n) e^{-A}.
EventReport check_enk_events(const EnsembleSummary& ensemble, const std::vector<double>& a_grid,
                             std::int64_t k_max, const ConstantsTable& constants,
                             const CoefficientSeries& coeffs);

/// Per-replica statistic of the main theorem before the constant:
/// max_{k <= k_range} |N_n(k) - c g_k V* n^a| / (g_k n^a eps^{a+2} (1 + A/ln n)),
/// g_k = Gamma(k-a)/Gamma(k+1).
std::vector<double> main_statistics(const EnsembleSummary& ensemble, double epsilon, double A,
                                    std::int64_t k_range);

/// Distribution-free upper confidence bound (level `confidence`) on the
/// 1 - e^{-A} quantile of the statistic: the smallest order statistic X_(r) with
/// P(Binomial(R, 1 - e^{-A}) <= r - 1) >= confidence. A held-out ensemble then
/// exceeds it with probability at most e^{-A}, up to the stated confidence.
double fit_main_constant(const EnsembleSummary& calibration, double epsilon, double A, double confidence = 0.95);

/// Held-out check of the fitted constant: frequency of statistic > c_emp vs e^{-A}.
/// Also reports the k=1 ratio N_n(1)/(c g_1 n^a V*) and an informational sweep
/// over the conjectured range k <= n^{a/(1+a)}.
EventReport check_main(const EnsembleSummary& ensemble, double epsilon, double A, double c_emp);

/// Slope of ln median N_n(k) on ln k over k in [k_lo, k_hi]; expected -(1+alpha) +- tolerance.
EventReport power_law_slope(const EnsembleSummary& ensemble, std::int64_t k_lo, std::int64_t k_hi,
                            double tolerance = 0.1);

/// median_r N_n(k)/V_n against c(alpha,theta) Gamma(k-alpha)/Gamma(k+1), k <= k_max,
/// relative tolerance rel_tol. The Pitman limit alpha Gamma(k-alpha)/(Gamma(1-alpha) Gamma(k+1))
/// is reported alongside as a metric.
EventReport check_lln_ratio(const EnsembleSummary& ensemble, std::int64_t k_max = 5, double rel_tol = 0.05);

/// Window V* +- xi_n, xi_n = (c_emp/c) eps_n^{a+2} (1 + C_n), for all k <= k_{eps_n,n};
/// misses against n^{-C_n}.
EventReport check_corollary(const EnsembleSummary& ensemble, double c_emp, double eps_n, double c_n);

/// k range ceil(eps n^{a/(2a+4)} / (ln n)^{1/(a+2)}) without the eps < 1/2 restriction.
std::int64_t k_range_unrestricted(double epsilon, std::int64_t n, double alpha);

}  // namespace gcrp
