#include "gcrp/gamma_audit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "gcrp/normalizers.hpp"
#include "gcrp/special.hpp"

namespace gcrp {
namespace {

using special::binet_remainder;
using special::log_gamma;
using special::log_gamma_ratio;

std::vector<double> log_grid(double lo, double hi, int per_decade) {
  std::vector<double> g;
  const double step = 1.0 / per_decade;
  for (double e = std::log10(lo);; e += step) {
    const double x = std::pow(10.0, e);
    if (x > hi * (1.0 + 1e-12)) break;
    g.push_back(x);
  }
  if (g.empty() || g.back() < hi) g.push_back(hi);
  return g;
}

// Integers in [lo, hi]: all of them up to `dense`, then log spaced.
std::vector<std::int64_t> int_grid(std::int64_t lo, std::int64_t hi, std::int64_t dense, int per_decade) {
  std::set<std::int64_t> s;
  for (std::int64_t i = lo; i <= std::min(hi, dense); ++i) s.insert(i);
  if (hi > dense) {
    for (double x : log_grid(static_cast<double>(std::max(lo, dense)), static_cast<double>(hi), per_decade)) {
      s.insert(std::clamp(static_cast<std::int64_t>(std::llround(x)), lo, hi));
    }
  }
  return {s.begin(), s.end()};
}

std::string params_tag(const ModelParams& p) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "alpha=%g theta=%g", p.alpha(), p.theta());
  return buf;
}

class Sweep {
 public:
  Sweep(std::string lemma, std::string item, std::string grid) {
    r_.lemma = std::move(lemma);
    r_.item = std::move(item);
    r_.grid = std::move(grid);
  }
  void point(double violation, std::map<std::string, double> at) {
    ++r_.points;
    if (violation > r_.max_violation || r_.points == 1) {
      r_.max_violation = violation;
      r_.argmax = std::move(at);
    }
  }
  AuditResult done(bool informational = false) {
    r_.informational = informational;
    return r_;
  }

 private:
  AuditResult r_;
};

// Fit of an O(.) constant: sup of ratio over the full grid and over the subgrid
// flagged `inner`.
class ConstantFit {
 public:
  ConstantFit(std::string lemma, std::string item, std::string grid) {
    r_.lemma = std::move(lemma);
    r_.item = std::move(item);
    r_.grid = std::move(grid);
  }
  void point(double ratio, bool inner, std::map<std::string, double> at) {
    ++r_.points;
    if (ratio > full_) {
      full_ = ratio;
      r_.argmax = std::move(at);
    }
    if (inner) inner_ = std::max(inner_, ratio);
  }
  AuditResult done(bool informational = false) {
    r_.fitted_constant = full_;
    const double ext = inner_ > 0.0 ? full_ / inner_ : (full_ > 0.0 ? INFINITY : 1.0);
    r_.extension_ratio = ext;
    r_.max_violation = std::isfinite(full_) ? ext - 2.0 : INFINITY;
    r_.informational = informational;
    return r_;
  }

 private:
  AuditResult r_;
  double full_ = 0.0;
  double inner_ = 0.0;
};

}  // namespace

bool AuditSuite::passed() const {
  if (!missing_lemmas.empty()) return false;
  return std::all_of(results.begin(), results.end(),
                     [](const AuditResult& r) { return r.informational || r.pass(); });
}

std::int64_t AuditSuite::violations() const {
  return std::count_if(results.begin(), results.end(),
                       [](const AuditResult& r) { return !r.informational && !r.pass(); });
}

const std::vector<std::string>& lemma_registry() {
  static const std::vector<std::string> ids = {
      "Stirling", "Approx:Stirling", "gamma", "BinomExpon", "gammagamma", "Ord:phin", "Bound:psik", "phipsi",
  };
  return ids;
}

std::vector<ModelParams> default_audit_params() {
  return {validate_params(0.25, 0.5), validate_params(0.5, 0.5),  validate_params(0.75, 0.5),
          validate_params(0.5, 0.0),  validate_params(0.25, 1.0), validate_params(0.75, -0.25),
          validate_params(0.5, -0.25), validate_params(0.5, 2.0), validate_params(0.1, 5.0)};
}

AuditResult audit_stirling() {
  // sqrt(2 pi) e^-x x^{x-1/2} <= Gamma(x) <= same e^{1/(12x)}  <=>  0 <= mu(x) <= 1/(12x).
  Sweep s("Stirling", "lower and upper bound", "x log-spaced in [0.1, 1e4], 200 per decade");
  for (double x : log_grid(0.1, 1e4, 200)) {
    const double mu = binet_remainder(x);
    s.point(std::max(-mu, mu - 1.0 / (12.0 * x)), {{"x", x}});
  }
  return s.done();
}

AuditResult audit_approx_stirling() {
  // Gamma(x) = S(x)(1 + O(1/x)): fitted C = sup x |Gamma(x)/S(x) - 1|.
  ConstantFit f("Approx:Stirling", "Gamma(x)/S(x) - 1 = O(1/x)",
                "x log-spaced in [0.1, 1e4]; inner grid [1, 1e4]");
  for (double x : log_grid(0.1, 1e4, 200)) {
    f.point(x * std::expm1(binet_remainder(x)), x >= 1.0, {{"x", x}});
  }
  return f.done();
}

std::vector<AuditResult> audit_gamma_ratios() {
  Sweep one("gamma", "item 1: Gamma(b-l)/Gamma(b) <= e^{1/(12(b-l))} (b/(b-l))^{1/2} (b-l)^{-l}",
            "l log-spaced in [0.01, 3]; b = l + d, d log-spaced in [0.1, 1e4]");
  Sweep two("gamma", "item 2: Gamma(b)/Gamma(b-l) <= e^{1/(12b)} ((b-l)/b)^{1/2} b^l",
            "l log-spaced in [0.01, 3]; b = l + d, d log-spaced in [0.1, 1e4]");
  for (double l : log_grid(0.01, 3.0, 20)) {
    for (double d : log_grid(0.1, 1e4, 40)) {
      const double b = l + d;
      const double lr = log_gamma_ratio(d, l);  // ln Gamma(b) - ln Gamma(b - l)
      one.point(-lr - (1.0 / (12.0 * d) + 0.5 * std::log(b / d) - l * std::log(d)), {{"beta", b}, {"lambda", l}});
      two.point(lr - (1.0 / (12.0 * b) + 0.5 * std::log(d / b) + l * std::log(b)), {{"beta", b}, {"lambda", l}});
    }
  }
  return {one.done(), two.done()};
}

std::vector<AuditResult> audit_binom_expon() {
  // (1-x)^y e^{xy} - 1 against y x^2 (audited form) and y^2 x^3 (printed form).
  ConstantFit main("BinomExpon", "(1-x)^y e^{xy} = 1 + O(y x^2)",
                   "x log-spaced in [1e-3, 0.9], y log-spaced in [0.1, 1e4]; inner x >= 1e-2, y <= 1e3");
  ConstantFit printed("BinomExpon", "printed form (1-x)^y e^{xy} = 1 + O(y^2 x^3)",
                      "x log-spaced in [1e-3, 0.9], y log-spaced in [0.1, 1e4]; inner x >= 1e-2, y <= 1e3");
  for (double x : log_grid(1e-3, 0.9, 40)) {
    for (double y : log_grid(0.1, 1e4, 20)) {
      const double dev = std::abs(std::expm1(y * (std::log1p(-x) + x)));
      const bool inner = x >= 1e-2 && y <= 1e3;
      main.point(dev / (y * x * x), inner, {{"x", x}, {"y", y}});
      printed.point(dev / (y * y * x * x * x), inner, {{"x", x}, {"y", y}});
    }
  }
  return {main.done(), printed.done(true)};
}

AuditResult audit_gammagamma(const ModelParams& params) {
  const double a = params.alpha();
  const double t = params.theta();
  ConstantFit f("gammagamma",
                "|Gamma(n+t-k+a)/Gamma(n+t) n^{k-a} - 1| = O(k^2/(n-k)) [" + params_tag(params) + "]",
                "n log-spaced in [1e2, 1e7], k <= 2 ceil(n^{a/(2a+4)}); inner n <= 1e6");
  for (double nd : log_grid(1e2, 1e7, 10)) {
    const auto n = static_cast<std::int64_t>(std::llround(nd));
    const auto kcap = 2 * static_cast<std::int64_t>(std::ceil(std::pow(nd, a / (2.0 * a + 4.0))));
    for (std::int64_t k = 1; k <= kcap; ++k) {
      const double kd = static_cast<double>(k);
      const double x = static_cast<double>(n);
      const double dev = std::abs(std::expm1(log_gamma_ratio(x + t, a - kd) + (kd - a) * std::log(x)));
      f.point(dev / (kd * kd / (x - kd)), n <= 1000000, {{"n", x}, {"k", kd}});
    }
  }
  return f.done();
}

std::vector<AuditResult> audit_ord_phin(const ModelParams& params) {
  const double a = params.alpha();
  const double t = params.theta();
  const std::string tag = " [" + params_tag(params) + "]";
  const std::string grid = "j = 1..1e4 then log-spaced to 1e7";
  Sweep one("Ord:phin", "item 1: 1/phi_j < 2 G(1+t+a)/(G(1+t) (j+t)^a)" + tag, grid);
  Sweep two("Ord:phin", "item 2: 1/((j+t) phi_{j+1}) < 2 G(1+t+a)/(G(1+t) (j+t)^{1+a})" + tag, grid);
  ConstantFit three("Ord:phin", "item 3: phi_j <= C_phi j^a" + tag, grid + "; inner j <= 1e6");
  const double log_pref = std::log(2.0) + log_gamma_ratio(1.0 + t, a);
  for (auto j : int_grid(1, 10000000, 10000, 20)) {
    const double jd = static_cast<double>(j);
    const double lp = log_phi(j, params);
    one.point(-lp - (log_pref - a * std::log(jd + t)), {{"j", jd}});
    two.point(-std::log(jd + t) - log_phi(j + 1, params) - (log_pref - (1.0 + a) * std::log(jd + t)),
              {{"j", jd}});
    three.point(std::exp(lp - a * std::log(jd)), j <= 1000000, {{"j", jd}});
  }
  return {one.done(), two.done(), three.done()};
}

std::vector<AuditResult> audit_bound_psik(const ModelParams& params) {
  const double a = params.alpha();
  const double t = params.theta();
  const std::string tag = " [" + params_tag(params) + "]";
  Sweep one("Bound:psik", "item 1: psi_n(k) <= 2 G(k+t)/G(a+t) (n+t-k+a)^{-(k-a)}, n >= 2k" + tag,
            "k = 1..50, n from 2k, dense to 2k+200 then log-spaced to 1e6");
  Sweep below("Bound:psik", "item 1 below its range (k <= n < 2k), informational" + tag, "k = 1..50, n in [k, 2k)");
  Sweep two("Bound:psik", "item 2: 1/psi_n(k) <= e^{1/12} G(a+t)/G(k+t) (n+t)^{k-a}" + tag,
            "k = 1..50, n from k, dense to k+200 then log-spaced to 1e6");
  const double lg_at = log_gamma(a + t);
  for (std::int64_t k = 1; k <= 50; ++k) {
    const double kd = static_cast<double>(k);
    const double lg_kt = log_gamma(kd + t);
    for (auto n : int_grid(k, 1000000, k + 200, 20)) {
      const double nd = static_cast<double>(n);
      const double lpsi = log_psi(n, k, params);
      const double item1 = lpsi - (std::log(2.0) + lg_kt - lg_at - (kd - a) * std::log(nd + t - kd + a));
      if (n >= 2 * k) {
        one.point(item1, {{"n", nd}, {"k", kd}});
      } else {
        below.point(item1, {{"n", nd}, {"k", kd}});
      }
      two.point(-lpsi - (1.0 / 12.0 + lg_at - lg_kt + (kd - a) * std::log(nd + t)), {{"n", nd}, {"k", kd}});
    }
  }
  std::vector<AuditResult> out{one.done(), two.done()};
  out.push_back(below.done(true));
  return out;
}

std::vector<AuditResult> audit_phipsi(const ModelParams& params) {
  const double a = params.alpha();
  const double t = params.theta();
  const std::string tag = " [" + params_tag(params) + "]";
  const std::string grid = "k = 1..20, j from max(1, k-1), dense for 200 steps then log-spaced to 1e6";
  Sweep stated("phipsi", "phi_j/(psi_{j+1}(k)^2 (j+t)) <= G(1+t)G(a+t)^2/(G(1+t+a)G(k+t)^2) (j+t)^{2k-a-1}" + tag,
               grid);
  Sweep e12("phipsi", "same with an extra factor e^{1/12}, informational" + tag, grid);
  Sweep e16("phipsi", "same with an extra factor e^{1/6}, informational" + tag, grid);
  const double log_pref = -log_gamma_ratio(1.0 + t, a) + 2.0 * log_gamma(a + t);
  for (std::int64_t k = 1; k <= 20; ++k) {
    const double kd = static_cast<double>(k);
    const double lg_kt = log_gamma(kd + t);
    const std::int64_t j0 = std::max<std::int64_t>(1, k - 1);
    for (auto j : int_grid(j0, 1000000, j0 + 200, 20)) {
      const double jd = static_cast<double>(j);
      const double lhs = log_phi(j, params) - 2.0 * log_psi(j + 1, k, params) - std::log(jd + t);
      const double rhs = log_pref - 2.0 * lg_kt + (2.0 * kd - a - 1.0) * std::log(jd + t);
      stated.point(lhs - rhs, {{"j", jd}, {"k", kd}});
      e12.point(lhs - rhs - 1.0 / 12.0, {{"j", jd}, {"k", kd}});
      e16.point(lhs - rhs - 1.0 / 6.0, {{"j", jd}, {"k", kd}});
    }
  }
  return {stated.done(), e12.done(true), e16.done(true)};
}

AuditResult audit_exponential_bound() {
  // (n+t)^g <= e^{t g/n} n^g for g >= 0, i.e. ln(1 + x) <= x with x = t/n > -1.
  Sweep s("bound:exponential", "(n+t)^g <= e^{t g/n} n^g", "n log-spaced in [1, 1e7], t in [-0.9, 10], g in [0, 50]");
  for (double n : log_grid(1.0, 1e7, 10)) {
    for (double t : {-0.9, -0.5, -0.1, 0.0, 0.5, 1.0, 2.0, 5.0, 10.0}) {
      for (double g : {0.0, 0.25, 0.5, 1.0, 2.5, 10.0, 50.0}) {
        const double x = t / n;
        s.point(g * (std::log1p(x) - x), {{"n", n}, {"theta", t}, {"gamma", g}});
      }
    }
  }
  return s.done();
}

std::vector<AuditResult> audit_gammaka() {
  std::vector<AuditResult> out;
  auto sweep = [](const std::vector<double>& alphas, bool informational, const std::string& item) {
    Sweep s("gammaka", item, "k = 1..1e4");
    for (double a : alphas) {
      for (std::int64_t k = 1; k <= 10000; ++k) {
        const double kd = static_cast<double>(k);
        s.point(log_size_weight(k, a) - (std::log(4.0) - (1.0 + a) * std::log(kd)), {{"alpha", a}, {"k", kd}});
      }
    }
    return s.done(informational);
  };
  out.push_back(sweep({0.1, 0.25, 0.5, 0.75}, false, "G(k-a)/G(k+1) <= 4/k^{1+a}, a in {0.1, 0.25, 0.5, 0.75}"));
  out.push_back(sweep({0.8, 0.9, 0.95, 0.99}, true, "same for a in {0.8, 0.9, 0.95, 0.99}, informational"));
  return out;
}

AuditSuite run_all_audits(const std::vector<ModelParams>& params_grid) {
  AuditSuite suite;
  auto add = [&](auto&& r) {
    if constexpr (std::is_same_v<std::decay_t<decltype(r)>, AuditResult>) {
      suite.results.push_back(r);
    } else {
      suite.results.insert(suite.results.end(), r.begin(), r.end());
    }
  };
  add(audit_stirling());
  add(audit_approx_stirling());
  add(audit_gamma_ratios());
  add(audit_binom_expon());
  add(audit_exponential_bound());
  add(audit_gammaka());
  for (const auto& p : params_grid) {
    add(audit_gammagamma(p));
    add(audit_ord_phin(p));
    add(audit_bound_psik(p));
    add(audit_phipsi(p));
  }
  for (const auto& id : lemma_registry()) {
    const bool covered = std::any_of(suite.results.begin(), suite.results.end(),
                                     [&](const AuditResult& r) { return r.lemma == id; });
    if (!covered) suite.missing_lemmas.push_back(id);
  }
  return suite;
}

}  // namespace gcrp
