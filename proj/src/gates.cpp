#include "simjudge/gates.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "simjudge/sha256.hpp"

namespace simjudge::gates {

namespace {

std::string lowercase(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) out.push_back(char(std::tolower(static_cast<unsigned char>(c))));
  return out;
}

GateFinding make_finding(GateId gate, std::vector<SCondition> conds, Severity sev,
                         std::string message) {
  GateFinding f;
  f.gate = gate;
  f.s_conditions = std::move(conds);
  f.severity = sev;
  f.message = std::move(message);
  return f;
}

}  // namespace

std::string gate_name(GateId g) {
  switch (g) {
    case GateId::G1_dimensional: return "G1-dimensional";
    case GateId::G2_bcic: return "G2-bcic";
    case GateId::G3_wellposedness: return "G3-wellposedness";
    case GateId::G4_classification: return "G4-classification";
    case GateId::G5_cost: return "G5-cost";
    case GateId::R1: return "R1";
    case GateId::R2: return "R2";
    case GateId::R3: return "R3";
    case GateId::R4: return "R4";
  }
  return "?";
}

std::string s_condition_name(SCondition s) {
  switch (s) {
    case SCondition::S1: return "S1";
    case SCondition::S2: return "S2";
    case SCondition::S3: return "S3";
    case SCondition::S4: return "S4";
  }
  return "?";
}

std::string severity_name(Severity s) {
  switch (s) {
    case Severity::reject: return "reject";
    case Severity::flag: return "flag";
    case Severity::info: return "info";
  }
  return "?";
}

std::string outcome_name(Outcome o) {
  switch (o) {
    case Outcome::accept: return "accept";
    case Outcome::redesign: return "redesign";
    case Outcome::reject: return "reject";
  }
  return "?";
}

bool JudgeVerdict::any_reject() const {
  return std::any_of(findings.begin(), findings.end(),
                     [](const GateFinding& f) { return f.severity == Severity::reject; });
}

bool JudgeVerdict::any_flag() const {
  return std::any_of(findings.begin(), findings.end(),
                     [](const GateFinding& f) { return f.severity == Severity::flag; });
}

std::string scheme_kind_name(SchemeKind k) {
  switch (k) {
    case SchemeKind::explicit_: return "explicit";
    case SchemeKind::implicit_: return "implicit";
    case SchemeKind::bdf: return "bdf";
    case SchemeKind::rk4: return "rk4";
    case SchemeKind::cn: return "cn";
    case SchemeKind::none: return "none";
  }
  return "?";
}

SchemeKind scheme_kind_from_name(const std::string& name) {
  const std::string n = lowercase(name);
  if (n == "explicit" || n == "ftcs-explicit" || n == "lax-friedrichs") return SchemeKind::explicit_;
  if (n == "implicit" || n == "implicit-euler") return SchemeKind::implicit_;
  if (n == "bdf" || n == "bdf2") return SchemeKind::bdf;
  if (n == "rk4" || n == "rk4-explicit") return SchemeKind::rk4;
  if (n == "cn" || n == "crank-nicolson") return SchemeKind::cn;
  if (n == "none" || n == "direct-elliptic") return SchemeKind::none;
  throw Error("unknown time scheme '" + name + "'");
}

// ---- plan / limits parsing ------------------------------------------------------

Plan parse_plan_json(const std::string& json_text) {
  nlohmann::json root = nlohmann::json::parse(json_text);
  Plan plan;

  std::vector<opgraph::DagNode> nodes;
  for (const auto& jn : root.at("nodes")) {
    opgraph::DagNode node;
    node.id = jn.at("id").get<std::string>();
    node.primitive = opgraph::primitive_from_name(jn.at("primitive").get<std::string>());
    node.lipschitz_L = jn.value("L", std::numeric_limits<double>::quiet_NaN());
    node.error_C = jn.value("C", 1.0);
    node.error_order_q = jn.value("q", 1.0);
    if (jn.contains("cost")) {
      node.cost.coeff_a = jn["cost"].value("a", 1.0);
      node.cost.work_exponent_w = jn["cost"].value("w", 1.0);
    }
    nodes.push_back(std::move(node));
  }
  std::vector<std::pair<std::string, std::string>> edges;
  for (const auto& je : root.at("edges")) {
    edges.emplace_back(je.at(0).get<std::string>(), je.at(1).get<std::string>());
  }
  plan.graph = opgraph::build_graph(std::move(nodes), std::move(edges));

  if (root.contains("scheme")) {
    const auto& js = root["scheme"];
    if (js.contains("time_scheme"))
      plan.scheme.time_scheme = scheme_kind_from_name(js["time_scheme"].get<std::string>());
    auto opt = [&](const char* key) -> std::optional<double> {
      if (js.contains(key)) return js[key].get<double>();
      return std::nullopt;
    };
    plan.scheme.dt = opt("dt");
    plan.scheme.h = opt("h");
    plan.scheme.kappa = opt("kappa");
    plan.scheme.wave_speed = opt("wave_speed");
    plan.scheme.stiffness_ratio = opt("stiffness_ratio");
    plan.scheme.condition_number = opt("condition_number");
    plan.scheme.coercivity_constant = opt("coercivity_constant");
  }
  if (root.contains("family")) plan.family = root["family"].get<std::string>();

  plan.digest = sha256_hex(root.dump());
  return plan;
}

Limits parse_limits_json(const std::string& json_text) {
  nlohmann::json root = nlohmann::json::parse(json_text);
  Limits limits;
  limits.budget_limit = root.value("budget_limit", 1e12);
  if (root.contains("target_eps")) limits.target_eps = root["target_eps"].get<double>();
  if (root.contains("dim")) limits.dim = root["dim"].get<int>();
  return limits;
}

// ---- dimensional check (units module responsibility) -----------------------------

namespace detail {

std::vector<GateFinding> check_template_findings(const specmd::ProblemSpec& spec,
                                                 const ArchetypeTemplate& tmpl) {
  std::vector<GateFinding> findings;
  for (const auto& req : tmpl.required_params) {
    const auto q = spec.find_param(req.name);
    if (!q) {
      auto f = make_finding(GateId::G1_dimensional, {SCondition::S1}, Severity::reject,
                            "missing required parameter '" + req.name + "' for archetype '" +
                                tmpl.id + "'");
      findings.push_back(std::move(f));
      continue;
    }
    if (!q->unit_parsed) {
      findings.push_back(make_finding(
          GateId::G1_dimensional, {SCondition::S1}, Severity::reject,
          "parameter '" + req.name + "' has unrecognized unit '" + q->unit_text + "'"));
      continue;
    }
    if (!(q->dim == req.dimension) || q->logarithmic) {
      auto f = make_finding(GateId::G1_dimensional, {SCondition::S1}, Severity::reject,
                            "parameter '" + req.name + "' has dimension " +
                                units::to_string(q->dim) + ", expected " +
                                units::to_string(req.dimension) + " (" + req.dimension_text +
                                ")");
      f.evidence["value"] = q->value;
      findings.push_back(std::move(f));
    }
  }
  return findings;
}

}  // namespace detail

}  // namespace simjudge::gates

namespace simjudge::units {

// Throwing variant per the module contract: absence of a template-required
// parameter is an error, mismatches are findings.
std::vector<gates::GateFinding> check_template(const specmd::ProblemSpec& spec,
                                               const gates::ArchetypeTemplate& tmpl) {
  for (const auto& req : tmpl.required_params) {
    if (!spec.find_param(req.name)) throw MissingParameterError(req.name);
  }
  return gates::detail::check_template_findings(spec, tmpl);
}

}  // namespace simjudge::units

namespace simjudge::gates {

// ---- G4 classification ------------------------------------------------------------

Classification gate_classification(const specmd::ProblemSpec& spec) {
  Classification result;
  result.archetype = &unknown_archetype();
  const auto& templates = builtin_archetypes();

  // (a) explicit archetype key
  if (spec.archetype_hint) {
    std::string id = lowercase(*spec.archetype_hint);
    std::replace(id.begin(), id.end(), '_', '-');
    std::replace(id.begin(), id.end(), ' ', '-');
    if (const ArchetypeTemplate* t = find_archetype(templates, id)) {
      result.archetype = t;
      auto f = make_finding(GateId::G4_classification, {SCondition::S1}, Severity::info,
                            "archetype '" + t->id + "' selected from explicit key");
      result.findings.push_back(std::move(f));
      return result;
    }
    result.findings.push_back(make_finding(GateId::G4_classification, {SCondition::S1},
                                           Severity::flag,
                                           "explicit archetype '" + *spec.archetype_hint +
                                               "' is not a known template"));
  }

  // (b) keyword matching on equation text
  std::string text;
  for (const auto& eq : spec.equations) text += " " + lowercase(eq.name) + " " + lowercase(eq.expression);
  auto contains = [&](const std::string& needle) { return text.find(needle) != std::string::npos; };

  const ArchetypeTemplate* matched = nullptr;
  const bool second_space = contains("u_xx") || contains("u_yy") || contains("laplacian") ||
                            contains("nabla^2") || contains("lap(");
  if (contains("burgers") || (contains("u^2") && contains("_x")) || contains("conservation law")) {
    matched = find_archetype(templates, "scalar-conservation-law");
  } else if (contains("u_tt") || contains("wave")) {
    matched = find_archetype(templates, "wave");
  } else if ((contains("u_t") && second_space) || contains("diffusion") || contains("heat")) {
    matched = find_archetype(templates, "heat");
  } else if (!contains("u_t") && (second_space || contains("poisson") || contains("laplace"))) {
    matched = find_archetype(templates, "poisson");
  } else if (contains("u_t") && contains("u_x")) {
    matched = find_archetype(templates, "advection");
  } else if (contains("stiff")) {
    matched = find_archetype(templates, "stiff-ode");
  } else {
    // "ode" only as a whole word, so "model" and "code" do not classify.
    std::istringstream words(text);
    std::string w;
    bool ode_word = false;
    while (words >> w) ode_word = ode_word || w == "ode";
    if (contains("dx/dt") || contains("dy/dt") || contains("x'") || contains("xdot") || ode_word)
      matched = find_archetype(templates, "generic-ode");
  }
  if (matched != nullptr) {
    result.archetype = matched;
    result.findings.push_back(make_finding(GateId::G4_classification, {SCondition::S1},
                                           Severity::info,
                                           "archetype '" + matched->id +
                                               "' selected by equation keywords"));
    return result;
  }

  // (c) second-order linear PDE discriminant b^2 - 4ac
  const auto a = spec.find_param("a");
  const auto b = spec.find_param("b");
  const auto c = spec.find_param("c");
  if (a && b && c) {
    const double disc = b->value * b->value - 4.0 * a->value * c->value;
    const double scale = std::max(1.0, b->value * b->value + std::abs(4.0 * a->value * c->value));
    const char* id = nullptr;
    if (std::abs(disc) < 1e-12 * scale) {
      id = "heat";  // parabolic
    } else if (disc < 0.0) {
      id = "poisson";  // elliptic
    } else {
      id = "wave";  // hyperbolic
    }
    result.archetype = find_archetype(templates, id);
    auto f = make_finding(GateId::G4_classification, {SCondition::S1}, Severity::info,
                          std::string("archetype '") + id +
                              "' selected by discriminant b^2-4ac");
    f.evidence["discriminant"] = disc;
    result.findings.push_back(std::move(f));
    return result;
  }

  result.findings.push_back(make_finding(GateId::G4_classification, {SCondition::S1},
                                         Severity::flag,
                                         "classification fallback: archetype unknown"));
  return result;
}

// ---- G1 dimensional -----------------------------------------------------------------

std::vector<GateFinding> gate_dimensional(const specmd::ProblemSpec& spec,
                                          const ArchetypeTemplate& tmpl) {
  auto findings = detail::check_template_findings(spec, tmpl);
  for (const auto& req : tmpl.required_params) {
    if (!req.positive) continue;
    const auto q = spec.find_param(req.name);
    if (q && q->value <= 0.0) {
      auto f = make_finding(GateId::G1_dimensional, {SCondition::S1}, Severity::reject,
                            "non-physical parameter: '" + req.name + "' must be positive");
      f.evidence["value"] = q->value;
      findings.push_back(std::move(f));
    }
  }
  return findings;
}

// ---- G2 BC/IC compatibility ------------------------------------------------------------

std::vector<GateFinding> gate_bc_ic(const specmd::ProblemSpec& spec,
                                    const ArchetypeTemplate& tmpl) {
  std::vector<GateFinding> findings;

  const bool time_dependent = tmpl.pde_class == PdeClass::parabolic ||
                              tmpl.pde_class == PdeClass::hyperbolic ||
                              tmpl.pde_class == PdeClass::ode ||
                              tmpl.pde_class == PdeClass::stiff_ode ||
                              tmpl.pde_class == PdeClass::conservation_law;
  if (tmpl.requires_ic && time_dependent && (spec.initial_none || spec.initial.empty())) {
    findings.push_back(make_finding(GateId::G2_bcic, {SCondition::S2}, Severity::reject,
                                    "time-dependent archetype '" + tmpl.id +
                                        "' has no initial condition"));
  }
  if (tmpl.pde_class == PdeClass::elliptic && spec.boundary.empty()) {
    findings.push_back(make_finding(GateId::G2_bcic, {SCondition::S2}, Severity::reject,
                                    "elliptic archetype '" + tmpl.id +
                                        "' has no boundary conditions"));
  }

  // Contradictory Dirichlet data: same target, different numeric values.
  for (std::size_t i = 0; i < spec.boundary.size(); ++i) {
    for (std::size_t j = i + 1; j < spec.boundary.size(); ++j) {
      const auto& lhs = spec.boundary[i];
      const auto& rhs = spec.boundary[j];
      if (lhs.kind != specmd::ConditionKind::dirichlet ||
          rhs.kind != specmd::ConditionKind::dirichlet)
        continue;
      if (lhs.target != rhs.target || !lhs.numeric_value || !rhs.numeric_value) continue;
      if (std::abs(*lhs.numeric_value - *rhs.numeric_value) >
          1e-12 * std::max(1.0, std::abs(*lhs.numeric_value))) {
        auto f = make_finding(GateId::G2_bcic, {SCondition::S2}, Severity::reject,
                              "contradictory BC: two Dirichlet values on target '" +
                                  lhs.target + "'");
        f.evidence["value_a"] = *lhs.numeric_value;
        f.evidence["value_b"] = *rhs.numeric_value;
        findings.push_back(std::move(f));
      }
    }
  }
  return findings;
}

// ---- G3 well-posedness --------------------------------------------------------------------

std::vector<GateFinding> gate_wellposedness(const specmd::ProblemSpec& spec,
                                            const ArchetypeTemplate& tmpl, const Plan& plan) {
  std::vector<GateFinding> findings;
  const PlanScheme& scheme = plan.scheme;
  const bool is_explicit =
      scheme.time_scheme == SchemeKind::explicit_ || scheme.time_scheme == SchemeKind::rk4;

  // (a) FTCS diffusion stability: kappa dt / h^2 <= 1 / (2 dim)
  if (tmpl.pde_class == PdeClass::parabolic && scheme.time_scheme == SchemeKind::explicit_) {
    std::optional<double> kappa = scheme.kappa;
    if (!kappa) {
      if (auto q = spec.find_param("kappa")) kappa = q->si_value();
    }
    if (!kappa) throw MissingPlanFieldError("kappa");
    if (!scheme.dt) throw MissingPlanFieldError("dt");
    if (!scheme.h) throw MissingPlanFieldError("h");
    const int dim = spec.dimension(1);
    const double ratio = *kappa * *scheme.dt / (*scheme.h * *scheme.h);
    const double limit = 1.0 / (2.0 * double(dim));
    if (ratio > limit) {
      auto f = make_finding(GateId::G3_wellposedness, {SCondition::S3}, Severity::reject,
                            "FTCS stability violated: kappa*dt/h^2 exceeds 1/(2*dim)");
      f.evidence["ratio"] = ratio;
      f.evidence["limit"] = limit;
      findings.push_back(std::move(f));
    }
  }

  // advection CFL for hyperbolic/conservation-law explicit schemes
  if ((tmpl.pde_class == PdeClass::hyperbolic ||
       tmpl.pde_class == PdeClass::conservation_law) &&
      is_explicit) {
    std::optional<double> speed = scheme.wave_speed;
    if (!speed) {
      if (auto q = spec.find_param("c")) speed = q->si_value();
    }
    if (speed && scheme.dt && scheme.h) {
      const double ratio = std::abs(*speed) * *scheme.dt / *scheme.h;
      if (ratio > 1.0) {
        auto f = make_finding(GateId::G3_wellposedness, {SCondition::S3}, Severity::reject,
                              "advection CFL violated: |c|*dt/h exceeds 1");
        f.evidence["ratio"] = ratio;
        f.evidence["limit"] = 1.0;
        findings.push_back(std::move(f));
      }
    }
  }

  // (b) stiffness rule: explicit schemes rejected above the threshold
  if (scheme.stiffness_ratio) {
    if (is_explicit && *scheme.stiffness_ratio > kStiffnessRejectThreshold) {
      auto f = make_finding(GateId::G3_wellposedness, {SCondition::S3}, Severity::reject,
                            "explicit scheme rejected: stiffness ratio exceeds 1e6");
      f.evidence["stiffness_ratio"] = *scheme.stiffness_ratio;
      f.evidence["threshold"] = kStiffnessRejectThreshold;
      findings.push_back(std::move(f));
    }
  } else if (tmpl.pde_class == PdeClass::stiff_ode && is_explicit) {
    throw MissingPlanFieldError("stiffness_ratio");
  }

  // (c) conditioning rule: flag, not reject
  if (scheme.condition_number && *scheme.condition_number > kConditionFlagThreshold) {
    auto f = make_finding(GateId::G3_wellposedness, {SCondition::S4}, Severity::flag,
                          "ill-conditioned system: condition number exceeds 1e12");
    f.evidence["condition_number"] = *scheme.condition_number;
    f.evidence["threshold"] = kConditionFlagThreshold;
    findings.push_back(std::move(f));
  }

  // (d) coercivity rule for elliptic archetypes
  if (tmpl.pde_class == PdeClass::elliptic) {
    if (!scheme.coercivity_constant) throw MissingPlanFieldError("coercivity_constant");
    if (*scheme.coercivity_constant <= 0.0) {
      auto f = make_finding(GateId::G3_wellposedness, {SCondition::S2}, Severity::reject,
                            "coercivity constant is not positive");
      f.evidence["coercivity_constant"] = *scheme.coercivity_constant;
      findings.push_back(std::move(f));
    }
  }

  // (e) Lipschitz rule: every plan node needs a finite positive constant
  for (const auto& node : plan.graph.nodes) {
    if (!(std::isfinite(node.lipschitz_L) && node.lipschitz_L > 0.0)) {
      auto f = make_finding(GateId::G3_wellposedness, {SCondition::S2}, Severity::reject,
                            "plan node '" + node.id + "' lacks a finite Lipschitz bound");
      findings.push_back(std::move(f));
    }
  }
  return findings;
}

// ---- G5 cost ---------------------------------------------------------------------------------

std::vector<GateFinding> gate_cost(const opgraph::ErrorBudget& budget,
                                   const opgraph::OperatorGraph& g, int dim,
                                   double budget_limit) {
  std::vector<GateFinding> findings;
  const double cost = opgraph::estimate_cost(budget, g, dim);
  if (cost > budget_limit) {
    auto f = make_finding(GateId::G5_cost, {SCondition::S4}, Severity::reject,
                          "estimated cost exceeds the work budget");
    f.evidence["cost"] = cost;
    f.evidence["limit"] = budget_limit;
    findings.push_back(std::move(f));
  } else {
    auto f = make_finding(GateId::G5_cost, {SCondition::S4}, Severity::info,
                          "estimated cost within budget");
    f.evidence["cost"] = cost;
    f.evidence["limit"] = budget_limit;
    findings.push_back(std::move(f));
  }
  return findings;
}

std::optional<double> resolve_target_eps(const specmd::ProblemSpec& spec, const Limits& limits) {
  if (limits.target_eps) return limits.target_eps;
  for (const auto& t : spec.tolerance.thresholds) {
    const std::string name = lowercase(t.name);
    if (name == "epsilon" || name == "eps" || name == "tolerance" ||
        name.find("error") != std::string::npos) {
      if (t.quantity && t.quantity->value > 0.0) return t.quantity->value;
    }
  }
  return std::nullopt;
}

// ---- run-gates -------------------------------------------------------------------------------

std::string pipeline_digest(const specmd::SpecDocument& doc, const Plan& plan,
                            const Limits& limits) {
  // Pure function of the inputs: canonical spec text, plan digest, budget.
  std::string material = specmd::serialize(doc);
  material += "\n" + plan.digest;
  nlohmann::json j;
  j["budget_limit"] = limits.budget_limit;
  if (limits.target_eps) j["target_eps"] = *limits.target_eps;
  if (limits.dim) j["dim"] = *limits.dim;
  material += "\n" + j.dump();
  return sha256_hex(material);
}

std::vector<GateFinding> run_operational_gates(const specmd::SpecDocument& doc,
                                               const specmd::ProblemSpec& spec,
                                               const Plan& plan, const Limits& limits) {
  std::vector<GateFinding> findings;

  // R1: spec completeness
  const auto report = specmd::validate_spec(doc);
  if (report.valid) {
    findings.push_back(make_finding(GateId::R1, {SCondition::S1}, Severity::info,
                                    "spec document is valid"));
  } else {
    auto f = make_finding(GateId::R1, {SCondition::S1}, Severity::reject,
                          "spec document fails validation");
    f.evidence["violations"] = double(report.violations.size());
    findings.push_back(std::move(f));
  }

  // R2: two dry-run digests of the deterministic pipeline must match
  const std::string digest_a = pipeline_digest(doc, plan, limits);
  const std::string digest_b = pipeline_digest(doc, plan, limits);
  if (digest_a == digest_b) {
    findings.push_back(make_finding(GateId::R2, {SCondition::S2}, Severity::info,
                                    "reproducibility dry-runs agree (" + digest_a.substr(0, 12) +
                                        ")"));
  } else {
    findings.push_back(make_finding(GateId::R2, {SCondition::S2}, Severity::reject,
                                    "reproducibility dry-runs disagree"));
  }

  // R3: metric integrity
  if (spec.tolerance.metric.empty()) {
    findings.push_back(make_finding(GateId::R3, {SCondition::S3}, Severity::info,
                                    "no tolerance metric declared"));
  } else {
    const bool known = std::any_of(
        spec.observables.begin(), spec.observables.end(),
        [&](const specmd::ObservableDesc& o) { return o.name == spec.tolerance.metric; });
    if (known) {
      findings.push_back(make_finding(GateId::R3, {SCondition::S3}, Severity::info,
                                      "tolerance metric '" + spec.tolerance.metric +
                                          "' is a declared observable"));
    } else {
      findings.push_back(make_finding(GateId::R3, {SCondition::S3}, Severity::reject,
                                      "tolerance metric '" + spec.tolerance.metric +
                                          "' is not among the declared observables"));
    }
  }

  // R4: budget compliance (cost gate verdict restated)
  const auto eps = resolve_target_eps(spec, limits);
  if (eps) {
    try {
      const auto budget = opgraph::select_resolutions(plan.graph, *eps);
      const int dim = limits.dim.value_or(spec.dimension(1));
      const double cost = opgraph::estimate_cost(budget, plan.graph, dim);
      auto f = make_finding(GateId::R4, {SCondition::S4},
                            cost > limits.budget_limit ? Severity::reject : Severity::info,
                            cost > limits.budget_limit ? "work budget exceeded"
                                                       : "work budget respected");
      f.evidence["cost"] = cost;
      f.evidence["limit"] = limits.budget_limit;
      findings.push_back(std::move(f));
    } catch (const Error& e) {
      findings.push_back(make_finding(GateId::R4, {SCondition::S4}, Severity::reject,
                                      std::string("budget computation failed: ") + e.what()));
    }
  } else {
    findings.push_back(make_finding(GateId::R4, {SCondition::S4}, Severity::info,
                                    "no error tolerance available; budget gate skipped"));
  }
  return findings;
}

// ---- verdicts -----------------------------------------------------------------------------------

std::vector<GateFinding> judge_round(const specmd::SpecDocument& doc,
                                     const specmd::ProblemSpec& spec, const Plan& plan,
                                     const Limits& limits) {
  std::vector<GateFinding> findings;

  const Classification classification = gate_classification(spec);
  const ArchetypeTemplate& tmpl = *classification.archetype;

  auto append = [&](std::vector<GateFinding> batch) {
    for (auto& f : batch) findings.push_back(std::move(f));
  };

  append(gate_dimensional(spec, tmpl));
  append(gate_bc_ic(spec, tmpl));
  try {
    append(gate_wellposedness(spec, tmpl, plan));
  } catch (const MissingPlanFieldError& e) {
    findings.push_back(make_finding(GateId::G3_wellposedness,
                                    {SCondition::S2, SCondition::S3}, Severity::reject,
                                    std::string("required plan evidence absent: ") + e.field));
  }
  append(classification.findings);
  const auto eps = resolve_target_eps(spec, limits);
  if (eps) {
    try {
      const auto budget = opgraph::select_resolutions(plan.graph, *eps);
      const int dim = limits.dim.value_or(spec.dimension(1));
      append(gate_cost(budget, plan.graph, dim, limits.budget_limit));
    } catch (const Error& e) {
      findings.push_back(make_finding(GateId::G5_cost, {SCondition::S4}, Severity::reject,
                                      std::string("cost estimation failed: ") + e.what()));
    }
  } else {
    findings.push_back(make_finding(GateId::G5_cost, {SCondition::S4}, Severity::info,
                                    "no error tolerance available; cost gate skipped"));
  }
  append(run_operational_gates(doc, spec, plan, limits));

  // Fixed gate order regardless of execution order.
  std::stable_sort(findings.begin(), findings.end(),
                   [](const GateFinding& a, const GateFinding& b) {
                     return int(a.gate) < int(b.gate);
                   });
  return findings;
}

namespace {

std::optional<SCondition> first_violated_condition(const std::vector<GateFinding>& findings) {
  for (SCondition s : {SCondition::S1, SCondition::S2, SCondition::S3, SCondition::S4}) {
    for (const auto& f : findings) {
      if (f.severity != Severity::reject) continue;
      if (std::find(f.s_conditions.begin(), f.s_conditions.end(), s) != f.s_conditions.end())
        return s;
    }
  }
  return std::nullopt;
}

}  // namespace

JudgeVerdict judge_pre(const specmd::SpecDocument& doc, const specmd::ProblemSpec& spec,
                       const std::vector<Plan>& plans, const Limits& limits) {
  if (plans.empty()) throw Error("judge_pre needs at least one plan");

  JudgeVerdict verdict;
  const std::size_t max_attempts = std::min<std::size_t>(plans.size(), kMaxRedesignRounds + 1);
  for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
    verdict.findings = judge_round(doc, spec, plans[attempt], limits);
    verdict.rounds_used = int(attempt);
    if (!verdict.any_reject()) {
      verdict.outcome = Outcome::accept;
      verdict.rejected_condition.reset();
      return verdict;
    }
    const bool more_plans = attempt + 1 < max_attempts;
    if (more_plans) {
      verdict.outcome = Outcome::redesign;  // try the next amendment
      continue;
    }
  }
  verdict.outcome = Outcome::reject;
  verdict.rejected_condition = first_violated_condition(verdict.findings);
  return verdict;
}

}  // namespace simjudge::gates
