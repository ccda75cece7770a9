#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gcrp/model.hpp"

namespace gcrp {

/// Result of sweeping one inequality (or one asymptotic claim) over a grid.
///
/// Inequalities LHS <= RHS are measured as ln(LHS/RHS); max_violation <= 0 passes.
/// Asymptotic O(.) claims fit the implied constant on the full grid and on the
/// grid shrunk by one decade; max_violation = extension_ratio - 2, so a constant
/// that more than doubles when the grid is extended counts as a violation.
struct AuditResult {
  std::string lemma;
  std::string item;
  std::string grid;
  std::int64_t points = 0;
  double max_violation = -INFINITY;
  std::map<std::string, double> argmax;
  std::optional<double> fitted_constant;
  std::optional<double> extension_ratio;
  bool informational = false;

  bool pass() const { return max_violation <= 0.0; }
};

struct AuditSuite {
  std::vector<AuditResult> results;
  std::vector<std::string> missing_lemmas;  // registry ids with no audit

  /// No missing lemma and every non-informational audit passes.
  bool passed() const;
  std::int64_t violations() const;
};

/// Lemma ids that the suite must cover.
const std::vector<std::string>& lemma_registry();

/// Parameter grid for the normalizer audits.
std::vector<ModelParams> default_audit_params();

AuditResult audit_stirling();
AuditResult audit_approx_stirling();
std::vector<AuditResult> audit_gamma_ratios();
std::vector<AuditResult> audit_binom_expon();
AuditResult audit_gammagamma(const ModelParams& params);
std::vector<AuditResult> audit_ord_phin(const ModelParams& params);
std::vector<AuditResult> audit_bound_psik(const ModelParams& params);
std::vector<AuditResult> audit_phipsi(const ModelParams& params);
AuditResult audit_exponential_bound();
std::vector<AuditResult> audit_gammaka();

AuditSuite run_all_audits(const std::vector<ModelParams>& params_grid = default_audit_params());

}  // namespace gcrp
