#include "gcrp/json_io.hpp"

#include <cstdio>
#include <sstream>

namespace gcrp {
namespace {

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string dump_json(const Json& j) { return j.dump(2); }

std::string shape_key(const Shape& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += '+';
    out += std::to_string(s[i]);
  }
  return out;
}

Json to_json(const ModelParams& p) {
  Json j;
  j["alpha"] = p.alpha();
  j["theta"] = p.theta();
  j["regime"] = std::string(to_string(p.regime()));
  if (p.regime() == Regime::BoundedParts) j["part_limit"] = p.part_limit();
  return j;
}

Json to_json(const ConstantsTable& c) {
  Json j;
  auto put = [&](const char* name, double v) {
    j[name] = {{"value", v}, {"provenance", c.provenance.at(name)}};
  };
  put("K", c.K);
  put("R", c.R);
  put("c1", c.c1);
  put("c2", c.c2);
  put("c3", c.c3);
  put("cV", c.cV);
  put("c_star", c.c_star);
  put("cM", c.cM);
  put("h", c.h);
  put("c_main", c.c_main);
  put("theta_inf", c.theta_inf);
  put("sup_theta", c.sup_theta);
  put("C_U", c.C_U);
  put("D", c.D);
  return j;
}

Json to_json(const CoefficientSeries& s) {
  Json j = Json::array();
  for (std::int64_t k = 1; k <= s.k_max(); ++k) {
    j.push_back({{"k", k}, {"log_a0", s.log_a0[k - 1]}, {"log_a1", s.log_a1[k - 1]}});
  }
  return j;
}

Json to_json(const CheckpointRecord& r) {
  return {{"n", r.n}, {"V", r.num_parts}, {"counts", r.counts}, {"tail", r.tail_count}};
}

Json to_json(const ExactLaw& law) {
  Json j;
  j["n"] = law.n;
  Json states = Json::array();
  for (const auto& [s, p] : law.probs) states.push_back({{"shape", shape_key(s)}, {"p", p}});
  j["states"] = states;
  Json v = Json::object();
  for (const auto& [k, p] : law.v_marginal) v[std::to_string(k)] = p;
  j["V"] = v;
  Json n1 = Json::object();
  for (const auto& [c, p] : law.count_marginal.at(1)) n1[std::to_string(c)] = p;
  j["N1"] = n1;
  j["mean_V"] = law.mean_v;
  Json mc = Json::object();
  for (const auto& [k, m] : law.mean_count) mc[std::to_string(k)] = m;
  j["mean_N"] = mc;
  j["mean_M"] = law.mean_martingale;
  j["mean_V_over_phi"] = law.mean_v_over_phi;
  return j;
}

Json to_json(const OracleComparison& c) {
  return {{"samples", c.samples},        {"tv_V", c.tv_v},
          {"tv_N1", c.tv_n1},            {"tv_shape", c.tv_shape},
          {"chi2_p_V", c.chi_square_p_v}, {"chi2_p_shape", c.chi_square_p_shape}};
}

Json to_json(const EventReport& r) {
  Json j;
  j["event"] = r.event;
  j["params"] = to_json(r.params);
  j["horizon"] = r.horizon;
  j["replicas"] = r.replicas;
  j["base_seed"] = r.base_seed;
  j["verdict"] = r.passed() ? "PASS" : "FAIL";
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"label", row.label},
                    {"violations", row.violations},
                    {"trials", row.trials},
                    {"frequency", row.frequency},
                    {"wilson_lo", row.wilson_lo},
                    {"wilson_hi", row.wilson_hi},
                    {"bound", row.bound},
                    {"verdict", row.pass ? "PASS" : "FAIL"}});
  }
  j["rows"] = rows;
  Json ranges = Json::array();
  for (const auto& rc : r.ranges) {
    ranges.push_back({{"label", rc.label},
                      {"value", rc.value},
                      {"lo", rc.lo},
                      {"hi", rc.hi},
                      {"verdict", rc.pass ? "PASS" : "FAIL"}});
  }
  j["ranges"] = ranges;
  Json metrics = Json::object();
  for (const auto& [k, v] : r.metrics) metrics[k] = v;
  j["metrics"] = metrics;
  j["notes"] = r.notes;
  return j;
}

Json to_json(const AuditResult& r) {
  Json j;
  j["lemma"] = r.lemma;
  j["item"] = r.item;
  j["grid"] = r.grid;
  j["points"] = r.points;
  j["max_violation"] = r.max_violation;
  Json at = Json::object();
  for (const auto& [k, v] : r.argmax) at[k] = v;
  j["argmax"] = at;
  if (r.fitted_constant) j["fitted_constant"] = *r.fitted_constant;
  if (r.extension_ratio) j["extension_ratio"] = *r.extension_ratio;
  j["informational"] = r.informational;
  j["verdict"] = r.pass() ? "PASS" : "FAIL";
  return j;
}

Json to_json(const AuditSuite& s) {
  Json j;
  j["verdict"] = s.passed() ? "PASS" : "FAIL";
  j["violations"] = s.violations();
  j["missing_lemmas"] = s.missing_lemmas;
  Json results = Json::array();
  for (const auto& r : s.results) results.push_back(to_json(r));
  j["results"] = results;
  return j;
}

Json to_json(const BoundAudit& a) {
  return {{"name", a.name},           {"checks", a.checks},           {"violations", a.violations},
          {"max_ratio", a.max_ratio}, {"argmax_step", a.argmax_step}, {"verdict", a.passed() ? "PASS" : "FAIL"}};
}

Json to_json(const IdentityAudit& a) {
  return {{"name", a.name},       {"checks", a.checks},   {"failures", a.failures},
          {"max_rel", a.max_rel}, {"max_abs", a.max_abs}, {"verdict", a.passed() ? "PASS" : "FAIL"}};
}

Json to_json(const VSnapshot& s) {
  return {{"n", s.n},          {"V", s.num_parts}, {"V_over_phi", s.v_over_phi}, {"M", s.martingale},
          {"W", s.quad_var},   {"theta_n", s.drift}, {"residual", s.residual}};
}

Json to_json(const XSnapshot& s) {
  return {{"n", s.n}, {"k", s.k}, {"N", s.count}, {"X", s.x}, {"M", s.martingale}, {"W", s.quad_var},
          {"residual", s.residual}};
}

std::string event_reports_csv(const std::vector<EventReport>& reports, std::string_view digest) {
  std::ostringstream out;
  out << "# manifest_digest=" << digest << "\n";
  out << "event,kind,label,value,violations,trials,frequency,wilson_lo,wilson_hi,bound_or_lo,hi,verdict\n";
  for (const auto& r : reports) {
    for (const auto& row : r.rows) {
      out << r.event << ",frequency," << csv_field(row.label) << ",," << row.violations << ',' << row.trials << ','
          << num(row.frequency) << ',' << num(row.wilson_lo) << ',' << num(row.wilson_hi) << ',' << num(row.bound)
          << ",," << (row.pass ? "PASS" : "FAIL") << "\n";
    }
    for (const auto& rc : r.ranges) {
      out << r.event << ",range," << csv_field(rc.label) << ',' << num(rc.value) << ",,,,,," << num(rc.lo) << ','
          << num(rc.hi) << ',' << (rc.pass ? "PASS" : "FAIL") << "\n";
    }
  }
  return out.str();
}

std::string audit_csv(const AuditSuite& suite, std::string_view digest) {
  std::ostringstream out;
  out << "# manifest_digest=" << digest << "\n";
  out << "lemma,item,points,max_violation,fitted_constant,extension_ratio,informational,verdict\n";
  for (const auto& r : suite.results) {
    out << csv_field(r.lemma) << ',' << csv_field(r.item) << ',' << r.points << ',' << num(r.max_violation) << ','
        << (r.fitted_constant ? num(*r.fitted_constant) : "") << ','
        << (r.extension_ratio ? num(*r.extension_ratio) : "") << ',' << (r.informational ? 1 : 0) << ','
        << (r.pass() ? "PASS" : "FAIL") << "\n";
  }
  return out.str();
}

}  // namespace gcrp
