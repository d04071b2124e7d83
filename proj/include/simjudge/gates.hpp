#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "simjudge/archetype.hpp"
#include "simjudge/opgraph.hpp"
#include "simjudge/specmd.hpp"

namespace simjudge::gates {

enum class GateId { G1_dimensional, G2_bcic, G3_wellposedness, G4_classification, G5_cost, R1, R2, R3, R4 };
enum class SCondition { S1, S2, S3, S4 };
enum class Severity { reject, flag, info };

std::string gate_name(GateId g);
std::string s_condition_name(SCondition s);
std::string severity_name(Severity s);

struct GateFinding {
  GateId gate = GateId::G1_dimensional;
  std::vector<SCondition> s_conditions;
  Severity severity = Severity::info;
  std::string message;
  std::map<std::string, double> evidence;
};

enum class Outcome { accept, redesign, reject };
std::string outcome_name(Outcome o);

struct JudgeVerdict {
  Outcome outcome = Outcome::reject;
  std::vector<GateFinding> findings;
  int rounds_used = 0;
  std::optional<SCondition> rejected_condition;

  bool any_reject() const;
  bool any_flag() const;
};

// ---- plan -------------------------------------------------------------------

enum class SchemeKind { explicit_, implicit_, bdf, rk4, cn, none };
std::string scheme_kind_name(SchemeKind k);
SchemeKind scheme_kind_from_name(const std::string& name);

// Gate 3 evidence attached to a solver plan.
struct PlanScheme {
  SchemeKind time_scheme = SchemeKind::none;
  std::optional<double> dt;
  std::optional<double> h;
  std::optional<double> kappa;
  std::optional<double> wave_speed;
  std::optional<double> stiffness_ratio;
  std::optional<double> condition_number;
  std::optional<double> coercivity_constant;
};

struct Plan {
  opgraph::OperatorGraph graph;
  PlanScheme scheme;
  std::optional<std::string> family;
  std::string digest;  // sha256 of the canonical plan JSON
};

// Parses the plan file format {nodes, edges, scheme?, family?}.
Plan parse_plan_json(const std::string& json_text);

struct Limits {
  double budget_limit = 1e12;                 // work units
  std::optional<double> target_eps;           // overrides the spec tolerance
  std::optional<int> dim;                     // overrides the spec dimension
};

Limits parse_limits_json(const std::string& json_text);

// ---- the units-module dimensional check (Gate 1 core) ------------------------

namespace detail {
// Non-throwing variant used by the gate: missing parameters become reject
// findings alongside dimension mismatches.
std::vector<GateFinding> check_template_findings(const specmd::ProblemSpec& spec,
                                                 const ArchetypeTemplate& tmpl);
}  // namespace detail

// ---- the gates ----------------------------------------------------------------

struct Classification {
  const ArchetypeTemplate* archetype;  // never null; may be the unknown template
  std::vector<GateFinding> findings;
};

Classification gate_classification(const specmd::ProblemSpec& spec);

std::vector<GateFinding> gate_dimensional(const specmd::ProblemSpec& spec,
                                          const ArchetypeTemplate& tmpl);

std::vector<GateFinding> gate_bc_ic(const specmd::ProblemSpec& spec,
                                    const ArchetypeTemplate& tmpl);

// Throws MissingPlanFieldError when a rule's required evidence is absent for
// the selected archetype.
std::vector<GateFinding> gate_wellposedness(const specmd::ProblemSpec& spec,
                                            const ArchetypeTemplate& tmpl, const Plan& plan);

std::vector<GateFinding> gate_cost(const opgraph::ErrorBudget& budget,
                                   const opgraph::OperatorGraph& g, int dim,
                                   double budget_limit);

// R1 spec validity, R2 reproducibility (two dry-run digests), R3 metric
// integrity, R4 budget compliance.
std::vector<GateFinding> run_operational_gates(const specmd::SpecDocument& doc,
                                               const specmd::ProblemSpec& spec,
                                               const Plan& plan, const Limits& limits);

// Deterministic digest of the judge pipeline over (spec, plan, limits); used
// by run-gate R2.
std::string pipeline_digest(const specmd::SpecDocument& doc, const Plan& plan,
                            const Limits& limits);

// One gate round: G1..G5 then R1..R4, findings merged in fixed gate order.
std::vector<GateFinding> judge_round(const specmd::SpecDocument& doc,
                                     const specmd::ProblemSpec& spec, const Plan& plan,
                                     const Limits& limits);

// Redesign loop over the supplied plans (initial plan plus amendments, tried
// in order, at most 3 amendment rounds). With no further amendment available
// a failing round yields the reject verdict and its diagnostic S-condition.
JudgeVerdict judge_pre(const specmd::SpecDocument& doc, const specmd::ProblemSpec& spec,
                       const std::vector<Plan>& plans, const Limits& limits);

// Resolves the tolerance the cost gate sizes against: limits override, then a
// spec threshold named like an error tolerance.
std::optional<double> resolve_target_eps(const specmd::ProblemSpec& spec, const Limits& limits);

constexpr double kStiffnessRejectThreshold = 1e6;
constexpr double kConditionFlagThreshold = 1e12;
constexpr int kMaxRedesignRounds = 3;

}  // namespace simjudge::gates

namespace simjudge::units {

// Dimensional template check (Gate 1 core): one finding per mismatched
// parameter; throws MissingParameterError when a required parameter is absent.
std::vector<gates::GateFinding> check_template(const specmd::ProblemSpec& spec,
                                               const gates::ArchetypeTemplate& tmpl);

}  // namespace simjudge::units
