#include "gcrp/checks.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/binomial.hpp>

#include "gcrp/error.hpp"
#include "gcrp/special.hpp"
#include "gcrp/stats.hpp"

namespace gcrp {
namespace {

void require_polynomial(const EnsembleSummary& e, const char* what) {
  if (!e.params.polynomial()) {
    throw DomainError(std::string(what) + ": theorem checks run only in the polynomial regime");
  }
  if (e.replicas.empty()) throw DomainError(std::string(what) + ": empty ensemble");
}

EventReport base_report(const char* event, const EnsembleSummary& e) {
  EventReport r{event, e.params, e.horizon(), static_cast<std::int64_t>(e.size()), e.config.base_seed, {}, {}, {}, {}};
  return r;
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

void require_kmax(const EnsembleSummary& e, std::int64_t k, const char* what) {
  if (e.config.kmax < k) {
    throw ConfigError(std::string(what) + ": ensemble records sizes up to " + std::to_string(e.config.kmax) +
                      ", need " + std::to_string(k));
  }
}

}  // namespace

EventRow make_event_row(std::string label, std::int64_t violations, std::int64_t trials, double bound) {
  EventRow row;
  row.label = std::move(label);
  row.violations = violations;
  row.trials = trials;
  row.frequency = static_cast<double>(violations) / static_cast<double>(trials);
  const auto ci = stats::wilson_interval(violations, trials);
  row.wilson_lo = ci.lo;
  row.wilson_hi = ci.hi;
  row.bound = bound;
  row.pass = row.wilson_lo <= bound;
  return row;
}

RangeCheck make_range_check(std::string label, double value, double lo, double hi) {
  return {std::move(label), value, lo, hi, value >= lo && value <= hi};
}

bool EventReport::passed() const {
  return std::all_of(rows.begin(), rows.end(), [](const EventRow& r) { return r.pass; }) &&
         std::all_of(ranges.begin(), ranges.end(), [](const RangeCheck& r) { return r.pass; });
}

EventReport check_thm_V(const EnsembleSummary& e, double delta, const ConstantsTable& constants) {
  require_polynomial(e, "check_thm_V");
  if (!(delta > 0.0) || !(delta < std::exp(-constants.K))) {
    throw DomainError("check_thm_V: the theorem on V_n/phi_n requires 0 < delta < e^{-K} = " +
                      fmt(std::exp(-constants.K)) + ", got " + fmt(delta));
  }
  EventReport rep = base_report("ThmV", e);
  const double a = e.params.alpha();
  const double t = e.params.theta();
  const double log_inv_delta = std::log(1.0 / delta);
  std::int64_t violations = 0;
  std::vector<double> sup_stats;
  sup_stats.reserve(e.size());
  for (std::size_t r = 0; r < e.size(); ++r) {
    const double v_star = e.replicas[r].v_star_hat;
    double sup = 0.0;
    for (std::size_t c = 0; c < e.checkpoints.size(); ++c) {
      const auto m = static_cast<double>(e.checkpoints[c]);
      const double envelope = constants.c_star * (std::log(std::log(m + 2.0)) + log_inv_delta) /
                              std::pow(m + t, a / 2.0);
      sup = std::max(sup, std::abs(e.v_over_phi(r, c) - v_star) / envelope);
    }
    sup_stats.push_back(sup);
    if (sup > 1.0) ++violations;
  }
  rep.rows.push_back(make_event_row("delta=" + fmt(delta), violations, rep.replicas, delta));
  rep.metrics["delta"] = delta;
  rep.metrics["c_star"] = constants.c_star;
  rep.metrics["max_statistic"] = *std::max_element(sup_stats.begin(), sup_stats.end());
  rep.metrics["median_statistic"] = stats::median(sup_stats);
  rep.notes.push_back("V* estimated by V_horizon/phi_horizon");
  return rep;
}

EventReport envelope_slope(const EnsembleSummary& e, std::int64_t m_lo, std::int64_t m_hi, double tolerance) {
  require_polynomial(e, "envelope_slope");
  if (e.size() < 2) throw DomainError("envelope_slope: needs at least two replicas");
  if (m_hi >= e.horizon()) throw DomainError("envelope_slope: fit window must end before the horizon");
  EventReport rep = base_report("Envelope", e);
  std::vector<double> lx, ly;
  for (std::size_t c = 0; c < e.checkpoints.size(); ++c) {
    const auto m = e.checkpoints[c];
    if (m < m_lo || m > m_hi) continue;
    std::vector<double> diffs(e.size());
    for (std::size_t r = 0; r < e.size(); ++r) diffs[r] = e.v_over_phi(r, c) - e.replicas[r].v_star_hat;
    const double sd = stats::stddev(diffs);
    if (sd <= 0.0) continue;
    lx.push_back(std::log(static_cast<double>(m)));
    ly.push_back(std::log(sd));
  }
  if (lx.size() < 2) throw DomainError("envelope_slope: fewer than two checkpoints in the fit window");
  const auto fit = stats::linear_fit(lx, ly);
  const double expected = -e.params.alpha() / 2.0;
  rep.ranges.push_back(make_range_check("slope of ln std(V_m/phi_m - V*) on ln m", fit.slope,
                                        expected - tolerance, expected + tolerance));
  rep.metrics["expected_slope"] = expected;
  rep.metrics["slope_stderr"] = fit.slope_stderr;
  rep.metrics["r_squared"] = fit.r_squared;
  rep.metrics["points"] = static_cast<double>(fit.points);
  rep.metrics["m_lo"] = static_cast<double>(m_lo);
  rep.metrics["m_hi"] = static_cast<double>(m_hi);
  return rep;
}

EventReport check_vm_tail(const EnsembleSummary& e, const std::vector<double>& a_grid,
                          const ConstantsTable& constants) {
  require_polynomial(e, "check_vm_tail");
  if (a_grid.empty()) throw DomainError("check_vm_tail: empty A grid");
  EventReport rep = base_report("Vm", e);
  for (double A : a_grid) {
    if (!(A >= constants.K)) {
      throw DomainError("check_vm_tail: the tail theorem requires A >= K = " + fmt(constants.K) +
                        ", got " + fmt(A));
    }
    std::int64_t hits = 0;
    for (const auto& rec : e.replicas) {
      if (rec.sup_v_over_phi >= A) ++hits;
    }
    rep.rows.push_back(make_event_row("A=" + fmt(A), hits, rep.replicas, std::exp(-constants.cV * A)));
  }
  rep.metrics["K"] = constants.K;
  rep.metrics["cV"] = constants.cV;
  rep.notes.push_back("sup taken over every step j <= horizon");
  return rep;
}

EventReport check_enk_events(const EnsembleSummary& e, const std::vector<double>& a_grid, std::int64_t k_max,
                             const ConstantsTable& constants, const CoefficientSeries& coeffs) {
  require_polynomial(e, "check_enk_events");
  if (k_max < 1 || k_max > e.horizon()) throw DomainError("check_enk_events: requires 1 <= k_max <= n");
  if (coeffs.k_max() < k_max) throw DomainError("check_enk_events: coefficient series too short");
  require_kmax(e, k_max, "check_enk_events");
  EventReport rep = base_report("Enk", e);
  const double a = e.params.alpha();
  const double t = e.params.theta();
  const double n = static_cast<double>(e.horizon());
  const double log_n = std::log(n);

  // Per (checkpoint, size): ln psi, ln of the V*-free main terms and the spread term.
  struct Cell {
    std::size_t c;
    std::int64_t s;
    double log_psi, log_up, log_dn, log_spread;
  };
  std::vector<Cell> cells;
  for (std::size_t c = 0; c < e.checkpoints.size(); ++c) {
    const auto m = e.checkpoints[c];
    for (std::int64_t s = 1; s <= std::min(k_max, m); ++s) {
      const double sd = static_cast<double>(s);
      const double md = static_cast<double>(m);
      Cell cell{c, s, log_psi(m, s, e.params), 0, 0, 0};
      cell.log_up = coeffs.log_a0[s - 1] + sd * std::log(md - 1.0);  // -inf at m = 1
      cell.log_dn = coeffs.log_a0[s - 1] + sd * std::log(md - sd);   // -inf at m = s
      cell.log_spread = coeffs.log_a1[s - 1] + (sd - a / 2.0) * std::log(md + t);
      cells.push_back(cell);
    }
  }

  for (double A : a_grid) {
    if (!(A >= 0.0)) throw DomainError("check_enk_events: A must be >= 0");
    const double log_width = std::log(A + log_n);
    std::int64_t misses = 0;
    double worst = -INFINITY;  // max over replicas of max violation margin ln(N / threshold)
    for (const auto& rec : e.replicas) {
      const double log_v = std::log(rec.v_star_hat);
      bool ok = true;
      for (const auto& cell : cells) {
        const auto count = static_cast<double>(rec.records[cell.c].counts[cell.s - 1]);
        const double spread = std::exp(cell.log_spread + log_width + cell.log_psi);
        const double upper = std::exp(cell.log_up + log_v + cell.log_psi) + spread;
        const double lower = std::exp(cell.log_dn + log_v + cell.log_psi) - spread;
        if (count > upper || count < lower) ok = false;
        if (count > 0.0) worst = std::max(worst, std::log(count / upper));
      }
      if (!ok) ++misses;
    }
    rep.rows.push_back(make_event_row("A=" + fmt(A), misses, rep.replicas,
                                      static_cast<double>(k_max) / n * std::exp(-A)));
    rep.metrics["max_log_upper_margin_A=" + fmt(A)] = worst;
    if (A < constants.K) {
      rep.notes.push_back("A=" + fmt(A) + " is below K=" + fmt(constants.K) +
                          "; the theorem assumes A > K, row kept for the default grid");
    }
  }
  rep.metrics["k_max"] = static_cast<double>(k_max);
  rep.notes.push_back("events evaluated on checkpoints m <= n, V* estimated at the horizon");
  return rep;
}

std::vector<double> main_statistics(const EnsembleSummary& e, double epsilon, double A, std::int64_t k_range) {
  require_polynomial(e, "main_statistics");
  if (!(epsilon > 0.0 && epsilon < 0.5)) throw DomainError("check_main: epsilon must lie in (0, 1/2)");
  if (!(A >= 0.0)) throw DomainError("check_main: A must be >= 0");
  require_kmax(e, k_range, "check_main");
  const double a = e.params.alpha();
  const double n = static_cast<double>(e.horizon());
  const double c = c_main(e.params);
  const double n_a = std::pow(n, a);
  const double scale = std::pow(epsilon, a + 2.0) * (1.0 + A / std::log(n));
  std::vector<double> out;
  out.reserve(e.size());
  for (std::size_t r = 0; r < e.size(); ++r) {
    const auto& rec = e.final_record(r);
    double worst = 0.0;
    for (std::int64_t k = 1; k <= k_range; ++k) {
      const double g = std::exp(log_size_weight(k, a));
      const double dev = std::abs(static_cast<double>(rec.counts[k - 1]) - c * g * e.replicas[r].v_star_hat * n_a);
      worst = std::max(worst, dev / (g * n_a * scale));
    }
    out.push_back(worst);
  }
  return out;
}

double fit_main_constant(const EnsembleSummary& calibration, double epsilon, double A, double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0)) throw DomainError("fit_main_constant: confidence must lie in (0, 1)");
  const auto k_range = k_epsilon_n(epsilon, calibration.horizon(), calibration.params);
  auto stat = main_statistics(calibration, epsilon, A, k_range);
  std::sort(stat.begin(), stat.end());
  const auto reps = static_cast<double>(stat.size());
  const boost::math::binomial_distribution<double> below(reps, 1.0 - std::exp(-A));
  std::size_t r = 1;
  while (r < stat.size() && boost::math::cdf(below, static_cast<double>(r - 1)) < confidence) ++r;
  return stat[r - 1];
}

EventReport check_main(const EnsembleSummary& e, double epsilon, double A, double c_emp) {
  require_polynomial(e, "check_main");
  EventReport rep = base_report("Main", e);
  const auto k_range = k_epsilon_n(epsilon, e.horizon(), e.params);
  const auto statistic = main_statistics(e, epsilon, A, k_range);
  const auto misses = std::count_if(statistic.begin(), statistic.end(), [&](double s) { return s > c_emp; });
  rep.rows.push_back(make_event_row("eps=" + fmt(epsilon) + " A=" + fmt(A) + " C=" + fmt(c_emp), misses,
                                    rep.replicas, std::exp(-A)));
  rep.metrics["k_eps_n"] = static_cast<double>(k_range);
  rep.metrics["C_emp"] = c_emp;
  rep.metrics["C_this_ensemble"] = stats::quantile(statistic, 1.0 - std::exp(-A));
  rep.metrics["statistic_median"] = stats::median(statistic);

  const double a = e.params.alpha();
  const double n = static_cast<double>(e.horizon());
  const double lead = c_main(e.params) * std::exp(log_size_weight(1, a)) * std::pow(n, a);
  std::vector<double> ratio;
  for (std::size_t r = 0; r < e.size(); ++r) {
    ratio.push_back(static_cast<double>(e.final_record(r).counts[0]) / (lead * e.replicas[r].v_star_hat));
  }
  rep.metrics["k1_ratio_median"] = stats::median(ratio);

  const auto conj = std::min<std::int64_t>(e.config.kmax,
                                           static_cast<std::int64_t>(std::floor(std::pow(n, a / (1.0 + a)))));
  if (conj > k_range) {
    const auto wide = main_statistics(e, epsilon, A, conj);
    const auto wide_misses = std::count_if(wide.begin(), wide.end(), [&](double s) { return s > c_emp; });
    rep.metrics["conjectured_range_kmax"] = static_cast<double>(conj);
    rep.metrics["conjectured_range_miss_frequency"] =
        static_cast<double>(wide_misses) / static_cast<double>(e.size());
    rep.notes.push_back("conjectured range: k up to n^{a/(1+a)} reported, not asserted");
  }
  rep.notes.push_back("constant C calibrated on a separate ensemble; V* estimated at the horizon");
  return rep;
}

EventReport power_law_slope(const EnsembleSummary& e, std::int64_t k_lo, std::int64_t k_hi, double tolerance) {
  require_polynomial(e, "power_law_slope");
  if (k_lo < 1 || k_hi <= k_lo) throw DomainError("power_law_slope: need 1 <= k_lo < k_hi");
  require_kmax(e, k_hi, "power_law_slope");
  EventReport rep = base_report("PowerLaw", e);
  std::vector<double> lx, ly;
  std::int64_t skipped = 0;
  for (std::int64_t k = k_lo; k <= k_hi; ++k) {
    std::vector<double> counts(e.size());
    for (std::size_t r = 0; r < e.size(); ++r) counts[r] = static_cast<double>(e.final_record(r).counts[k - 1]);
    const double med = stats::median(counts);
    if (med <= 0.0) {
      ++skipped;
      continue;
    }
    lx.push_back(std::log(static_cast<double>(k)));
    ly.push_back(std::log(med));
  }
  if (lx.size() < 2) throw DomainError("power_law_slope: fewer than two sizes with positive median");
  const auto fit = stats::linear_fit(lx, ly);
  const double expected = -(1.0 + e.params.alpha());
  rep.ranges.push_back(make_range_check("slope of ln median N_n(k) on ln k", fit.slope, expected - tolerance,
                                        expected + tolerance));
  rep.metrics["expected_slope"] = expected;
  rep.metrics["slope_stderr"] = fit.slope_stderr;
  rep.metrics["sizes_skipped_zero_median"] = static_cast<double>(skipped);
  return rep;
}

EventReport check_lln_ratio(const EnsembleSummary& e, std::int64_t k_max, double rel_tol) {
  require_polynomial(e, "check_lln_ratio");
  require_kmax(e, k_max, "check_lln_ratio");
  EventReport rep = base_report("LLN", e);
  const double a = e.params.alpha();
  const double c = c_main(e.params);
  const double lg1a = special::log_gamma(1.0 - a);
  for (std::int64_t k = 1; k <= k_max; ++k) {
    std::vector<double> ratio(e.size());
    for (std::size_t r = 0; r < e.size(); ++r) {
      const auto& rec = e.final_record(r);
      ratio[r] = static_cast<double>(rec.counts[k - 1]) / static_cast<double>(rec.num_parts);
    }
    const double med = stats::median(ratio);
    const double g = std::exp(log_size_weight(k, a));
    const double target = c * g;
    const double pitman = a * std::exp(log_size_weight(k, a) - lg1a);
    const std::string ks = std::to_string(k);
    rep.ranges.push_back(make_range_check("k=" + ks + " |median N/V / (c g_k) - 1|",
                                          std::abs(med / target - 1.0), 0.0, rel_tol));
    rep.metrics["median_ratio_k=" + ks] = med;
    rep.metrics["target_k=" + ks] = target;
    rep.metrics["pitman_limit_k=" + ks] = pitman;
    rep.metrics["gap_to_pitman_limit_k=" + ks] = std::abs(med / pitman - 1.0);
  }
  rep.notes.push_back(
      "target c(a,t) Gamma(k-a)/Gamma(k+1) differs from the Pitman limit a Gamma(k-a)/(Gamma(1-a) Gamma(k+1)) "
      "by the factor Gamma(1+t)/Gamma(1+a+t); both are reported");
  return rep;
}

std::int64_t k_range_unrestricted(double epsilon, std::int64_t n, double alpha) {
  if (n < 2) throw DomainError("k range requires n >= 2");
  if (!(epsilon > 0.0)) throw DomainError("k range requires epsilon > 0");
  const double ln_n = std::log(static_cast<double>(n));
  return static_cast<std::int64_t>(std::ceil(epsilon * std::exp(alpha / (2.0 * alpha + 4.0) * ln_n) /
                                             std::pow(ln_n, 1.0 / (alpha + 2.0))));
}

EventReport check_corollary(const EnsembleSummary& e, double c_emp, double eps_n, double c_n) {
  require_polynomial(e, "check_corollary");
  if (!(eps_n > 0.0) || !(c_n >= 0.0) || !(c_emp > 0.0)) {
    throw DomainError("check_corollary: requires eps_n > 0, C_n >= 0, C > 0");
  }
  EventReport rep = base_report("Corollary", e);
  const double a = e.params.alpha();
  const double n = static_cast<double>(e.horizon());
  const double c = c_main(e.params);
  const double xi = c_emp / c * std::pow(eps_n, a + 2.0) * (1.0 + c_n);
  const auto k_range = k_range_unrestricted(eps_n, e.horizon(), a);
  require_kmax(e, k_range, "check_corollary");
  std::int64_t misses = 0;
  for (std::size_t r = 0; r < e.size(); ++r) {
    const auto& rec = e.final_record(r);
    bool covered = true;
    for (std::int64_t k = 1; k <= k_range; ++k) {
      const double est = static_cast<double>(rec.counts[k - 1]) /
                         (c * std::exp(log_size_weight(k, a)) * std::pow(n, a));
      if (!(std::abs(est - e.replicas[r].v_star_hat) < xi)) covered = false;
    }
    if (!covered) ++misses;
  }
  rep.rows.push_back(make_event_row("eps_n=" + fmt(eps_n) + " C_n=" + fmt(c_n), misses, rep.replicas,
                                    std::pow(n, -c_n)));
  rep.metrics["xi_n"] = xi;
  rep.metrics["k_range"] = static_cast<double>(k_range);
  rep.metrics["coverage"] = 1.0 - static_cast<double>(misses) / static_cast<double>(e.size());
  if (eps_n >= 0.5) rep.notes.push_back("eps_n >= 1/2 at this n; k range computed from the same formula");
  return rep;
}

}  // namespace gcrp
