#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <json.hpp>

#include "gcrp/checks.hpp"
#include "gcrp/exact_oracle.hpp"
#include "gcrp/gamma_audit.hpp"
#include "gcrp/martingales.hpp"
#include "gcrp/normalizers.hpp"
#include "gcrp/simulate.hpp"

namespace gcrp {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kArtifactVersion = "1.0.0";
inline constexpr int kFormatVersion = 1;

/// 64-bit FNV-1a, rendered as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view bytes);

Json to_json(const ModelParams& p);
Json to_json(const ConstantsTable& c);
Json to_json(const CoefficientSeries& s);
Json to_json(const CheckpointRecord& r);
Json to_json(const ExactLaw& law);
Json to_json(const OracleComparison& c);
Json to_json(const EventReport& r);
Json to_json(const AuditResult& r);
Json to_json(const AuditSuite& s);
Json to_json(const BoundAudit& a);
Json to_json(const IdentityAudit& a);
Json to_json(const VSnapshot& s);
Json to_json(const XSnapshot& s);

/// Shape as "3+1+1".
std::string shape_key(const Shape& s);

/// CSV rendering of event reports: one line per row and per range check.
std::string event_reports_csv(const std::vector<EventReport>& reports, std::string_view digest);
std::string audit_csv(const AuditSuite& suite, std::string_view digest);

/// Dump with fixed formatting so equal values give equal bytes.
std::string dump_json(const Json& j);

}  // namespace gcrp
