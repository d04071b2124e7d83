#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "simjudge/audit.hpp"
#include "simjudge/gates.hpp"
#include "simjudge/probes.hpp"

namespace simjudge::certify {

enum class CertOutcome { certified, flagged, rejected };
std::string cert_outcome_name(CertOutcome o);

struct Certificate {
  std::string spec_digest;
  std::string plan_digest;
  gates::JudgeVerdict verdict;
  std::optional<opgraph::ErrorBudget> budget;
  std::optional<audit::AuditReport> audit_report;
  std::vector<probes::ProbeReport> probe_reports;
  std::optional<double> bound_B;
  std::optional<double> tolerance_eps;
  CertOutcome outcome = CertOutcome::rejected;
  std::string seal;  // SHA-256 over the canonical serialization of all prior fields
};

// ---- canonical JSON ----------------------------------------------------------

// Canonical form: UTF-8, lexicographically sorted keys, no insignificant
// whitespace, floats as shortest round-trip decimals. nlohmann::json already
// stores object keys sorted and prints shortest-round-trip doubles, so the
// canonical form is dump() of a tree built from sorted-map json values.
std::string canonical_dump(const nlohmann::json& value);

nlohmann::json verdict_to_json(const gates::JudgeVerdict& verdict);
nlohmann::json finding_to_json(const gates::GateFinding& finding);
nlohmann::json budget_to_json(const opgraph::ErrorBudget& budget);
nlohmann::json audit_to_json(const audit::AuditReport& report);
nlohmann::json probe_to_json(const probes::ProbeReport& report);
nlohmann::json validation_to_json(const specmd::ValidationReport& report);

// ---- operations -----------------------------------------------------------------

struct CertificateInputs {
  std::string spec_digest;
  std::string plan_digest;
  gates::JudgeVerdict verdict;
  std::optional<opgraph::ErrorBudget> budget;
  std::optional<audit::AuditReport> audit_report;
  std::vector<probes::ProbeReport> probe_reports;
  std::optional<double> bound_B;
  std::optional<double> tolerance_eps;
};

// Outcome mapping: reject verdict -> rejected; any audit/probe flag, any
// flag-severity finding, or a bound exceeding the tolerance -> flagged; else
// certified. Throws InconsistentInputsError when bound_B is present without a
// tolerance.
Certificate emit_certificate(const CertificateInputs& inputs);

nlohmann::json certificate_to_json(const Certificate& cert);
std::string certificate_to_canonical_string(const Certificate& cert);

// Recomputes the seal over the canonical serialization; true iff it matches.
bool verify_certificate(const nlohmann::json& cert_json);
bool verify_certificate_text(const std::string& text);

}  // namespace simjudge::certify
