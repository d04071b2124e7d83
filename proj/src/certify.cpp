#include "simjudge/certify.hpp"

#include <cmath>

#include "simjudge/sha256.hpp"

namespace simjudge::certify {

std::string cert_outcome_name(CertOutcome o) {
  switch (o) {
    case CertOutcome::certified: return "certified";
    case CertOutcome::flagged: return "flagged";
    case CertOutcome::rejected: return "rejected";
  }
  return "?";
}

std::string canonical_dump(const nlohmann::json& value) { return value.dump(); }

namespace {

// Non-finite doubles have no JSON number form; they serialize as null, which
// keeps the canonical dump deterministic.
nlohmann::json number_or_null(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

nlohmann::json evidence_to_json(const std::map<std::string, double>& evidence) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [key, value] : evidence) out[key] = number_or_null(value);
  return out;
}

}  // namespace

nlohmann::json finding_to_json(const gates::GateFinding& finding) {
  nlohmann::json out;
  out["gate"] = gates::gate_name(finding.gate);
  nlohmann::json conds = nlohmann::json::array();
  for (auto s : finding.s_conditions) conds.push_back(gates::s_condition_name(s));
  out["s_conditions"] = conds;
  out["severity"] = gates::severity_name(finding.severity);
  out["message"] = finding.message;
  out["evidence"] = evidence_to_json(finding.evidence);
  return out;
}

nlohmann::json verdict_to_json(const gates::JudgeVerdict& verdict) {
  nlohmann::json out;
  out["outcome"] = gates::outcome_name(verdict.outcome);
  nlohmann::json findings = nlohmann::json::array();
  for (const auto& f : verdict.findings) findings.push_back(finding_to_json(f));
  out["findings"] = findings;
  out["rounds_used"] = verdict.rounds_used;
  if (verdict.rejected_condition)
    out["rejected_condition"] = gates::s_condition_name(*verdict.rejected_condition);
  return out;
}

nlohmann::json budget_to_json(const opgraph::ErrorBudget& budget) {
  nlohmann::json out;
  nlohmann::json per_node = nlohmann::json::object();
  for (const auto& [id, nb] : budget.per_node) {
    per_node[id] = {{"ell", nb.ell}, {"eps", nb.eps}, {"h", nb.h}};
  }
  out["per_node"] = per_node;
  out["total_bound"] = budget.total_bound;
  out["target_eps"] = budget.target_eps;
  out["multipath_nodes"] = budget.multipath_nodes;
  return out;
}

nlohmann::json audit_to_json(const audit::AuditReport& report) {
  nlohmann::json out;
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : report.checks) {
    nlohmann::json jc;
    jc["id"] = c.id;
    jc["status"] = c.status == audit::CheckStatus::pass ? "pass" : "flag";
    jc["measured"] = number_or_null(c.measured);
    jc["threshold"] = number_or_null(c.threshold);
    jc["evidence"] = evidence_to_json(c.evidence);
    checks.push_back(jc);
  }
  out["checks"] = checks;
  out["overall"] = report.overall == audit::CheckStatus::pass ? "pass" : "flag";
  out["notes"] = report.notes;
  return out;
}

nlohmann::json probe_to_json(const probes::ProbeReport& report) {
  nlohmann::json out;
  out["probe"] = probes::probe_name(report.probe);
  out["flagged"] = report.flagged;
  out["measured"] = number_or_null(report.measured);
  out["threshold"] = number_or_null(report.threshold);
  out["evidence"] = evidence_to_json(report.evidence);
  out["notes"] = report.notes;
  return out;
}

nlohmann::json validation_to_json(const specmd::ValidationReport& report) {
  nlohmann::json out;
  out["valid"] = report.valid;
  nlohmann::json violations = nlohmann::json::array();
  for (const auto& v : report.violations) {
    violations.push_back({{"rule", v.rule}, {"message", v.message}, {"line", v.line}});
  }
  out["violations"] = violations;
  out["warnings"] = report.warnings;
  out["digest"] = report.digest;
  return out;
}

namespace {

nlohmann::json certificate_body(const Certificate& cert) {
  nlohmann::json out;
  out["format"] = "simjudge-certificate-v1";
  out["spec_digest"] = cert.spec_digest;
  out["plan_digest"] = cert.plan_digest;
  out["verdict"] = verdict_to_json(cert.verdict);
  out["budget"] = cert.budget ? budget_to_json(*cert.budget) : nlohmann::json(nullptr);
  out["audit"] = cert.audit_report ? audit_to_json(*cert.audit_report) : nlohmann::json(nullptr);
  nlohmann::json probes_json = nlohmann::json::array();
  for (const auto& p : cert.probe_reports) probes_json.push_back(probe_to_json(p));
  out["probes"] = probes_json;
  out["bound_B"] = cert.bound_B ? nlohmann::json(*cert.bound_B) : nlohmann::json(nullptr);
  out["tolerance_eps"] =
      cert.tolerance_eps ? nlohmann::json(*cert.tolerance_eps) : nlohmann::json(nullptr);
  out["outcome"] = cert_outcome_name(cert.outcome);
  return out;
}

}  // namespace

Certificate emit_certificate(const CertificateInputs& inputs) {
  if (inputs.bound_B && !inputs.tolerance_eps)
    throw InconsistentInputsError("certificate carries bound_B without a tolerance");

  Certificate cert;
  cert.spec_digest = inputs.spec_digest;
  cert.plan_digest = inputs.plan_digest;
  cert.verdict = inputs.verdict;
  cert.budget = inputs.budget;
  cert.audit_report = inputs.audit_report;
  cert.probe_reports = inputs.probe_reports;
  cert.bound_B = inputs.bound_B;
  cert.tolerance_eps = inputs.tolerance_eps;

  if (cert.verdict.outcome != gates::Outcome::accept) {
    cert.outcome = CertOutcome::rejected;
  } else {
    bool flagged = cert.verdict.any_flag();
    if (cert.audit_report && !cert.audit_report->passed()) flagged = true;
    for (const auto& p : cert.probe_reports) flagged = flagged || p.flagged;
    if (cert.bound_B && *cert.bound_B > *cert.tolerance_eps) flagged = true;
    cert.outcome = flagged ? CertOutcome::flagged : CertOutcome::certified;
  }

  cert.seal = sha256_hex(canonical_dump(certificate_body(cert)));
  return cert;
}

nlohmann::json certificate_to_json(const Certificate& cert) {
  nlohmann::json out = certificate_body(cert);
  out["seal"] = cert.seal;
  return out;
}

std::string certificate_to_canonical_string(const Certificate& cert) {
  return canonical_dump(certificate_to_json(cert));
}

bool verify_certificate(const nlohmann::json& cert_json) {
  if (!cert_json.is_object() || !cert_json.contains("seal")) return false;
  nlohmann::json body = cert_json;
  const std::string seal = body["seal"].get<std::string>();
  body.erase("seal");
  return sha256_hex(canonical_dump(body)) == seal;
}

bool verify_certificate_text(const std::string& text) {
  nlohmann::json parsed = nlohmann::json::parse(text, nullptr, false);
  if (parsed.is_discarded()) return false;
  return verify_certificate(parsed);
}

}  // namespace simjudge::certify
