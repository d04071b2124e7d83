#include <doctest.h>

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <fstream>
#include <sstream>

#include "simjudge/gates.hpp"

using namespace simjudge;
using gates::GateId;
using gates::SCondition;
using gates::Severity;

namespace {

std::string read_fixture(const std::string& name) {
  const std::string path = std::string(SIMJUDGE_DATA_DIR) + "/specs/" + name;
  std::ifstream in(path);
  REQUIRE_MESSAGE(bool(in), "missing fixture " << path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

specmd::SpecDocument doc_of(const std::string& text) { return specmd::parse_spec(text); }

specmd::ProblemSpec spec_of(const std::string& text) {
  return specmd::extract_six_tuple(specmd::parse_spec(text));
}

std::string heat_spec_text(const std::string& kappa, const std::string& initial) {
  return "# Specification: Heat Fixture\n"
         "\n## Domain\ndomain: interval\ndimension: 1\n"
         "\n## Equations\nequation: u_t = kappa * u_xx\n"
         "parameters:\n  kappa: " + kappa + "\n"
         "\n## Boundary Conditions\nbc_left: dirichlet left u = 0\nbc_right: dirichlet right u = 0\n"
         "\n## Initial Conditions\ninitial: " + initial + "\n"
         "\n## Observables\nobservables:\n  - temperature: K\n"
         "\n## Tolerance\nl2_error_max: 1.0e-3\nmetric: temperature\n";
}

// Minimal plan with scheme evidence.
gates::Plan make_plan(const std::string& scheme_json) {
  const std::string json = R"({
    "nodes": [
      {"id": "grid", "primitive": "discretize", "L": 1.0, "C": 1.0, "q": 2.0, "cost": {"a": 1.0, "w": 0.0}},
      {"id": "step", "primitive": "evolve", "L": 1.0, "C": 1.0, "q": 1.0, "cost": {"a": 1.0, "w": 1.0}}
    ],
    "edges": [["grid", "step"]],
    "scheme": )" + scheme_json + "}";
  return gates::parse_plan_json(json);
}

// Long double SVD: double precision cannot resolve sigma_min below
// eps * sigma_max, which would report ~4e15 instead of the true ~6e17.
double hilbert_condition_number(int n) {
  using Mat = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  Mat H(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) H(i, j) = 1.0L / (long double)(i + j + 1);
  Eigen::JacobiSVD<Mat> svd(H);
  const auto& sv = svd.singularValues();
  return double(sv(0) / sv(n - 1));
}

}  // namespace

// ---- G4 classification -------------------------------------------------------

TEST_CASE("classification: canonical heat form is parabolic") {
  const auto spec = spec_of(heat_spec_text("1.0e-4 m^2/s", "u(x,0) = sin(pi*x)"));
  const auto result = gates::gate_classification(spec);
  CHECK(result.archetype->id == "heat");
  CHECK(result.archetype->pde_class == gates::PdeClass::parabolic);
}

TEST_CASE("classification: Laplace coefficients give elliptic via the discriminant") {
  const std::string text = "# Specification: Disc\n"
                           "\n## Domain\ndomain: square\ndimension: 2\n"
                           "\n## Equations\nequation: a*uxx + b*uxy + c*uyy = f\nparameters:\n"
                           "  a: 1.0\n  b: 0.0\n  c: 1.0\n"
                           "\n## Boundary Conditions\nbc: dirichlet all boundary = 0\n"
                           "\n## Initial Conditions\ninitial: N/A\n"
                           "\n## Observables\nobservables:\n  - field: dimensionless\n"
                           "\n## Tolerance\nerror_max: 1e-3\n";
  auto spec = spec_of(text);
  // Keep the equation text keyword-free so route (c) is exercised.
  spec.equations[0].expression = "second order form";
  spec.equations[0].name = "pde";
  const auto result = gates::gate_classification(spec);
  CHECK(result.archetype->pde_class == gates::PdeClass::elliptic);
  REQUIRE(!result.findings.empty());
  CHECK(result.findings.back().evidence.at("discriminant") == doctest::Approx(-4.0));
}

TEST_CASE("classification: free text falls back to unknown with a flag") {
  const std::string text = "# Specification: Mystery\n"
                           "\n## Domain\ndomain: somewhere\n"
                           "\n## Equations\nequation: response = lookup(inputs)\n"
                           "\n## Boundary Conditions\nbc: walls everywhere\n"
                           "\n## Initial Conditions\ninitial: given state\n"
                           "\n## Observables\nobservables:\n  - outcome: dimensionless\n"
                           "\n## Tolerance\nerror_max: 1e-3\n";
  auto spec = spec_of(text);
  spec.equations[0].expression = "response from lookup of inputs";
  spec.equations[0].name = "relation";
  const auto result = gates::gate_classification(spec);
  CHECK(result.archetype->id == "unknown");
  bool flagged = false;
  for (const auto& f : result.findings)
    flagged = flagged || (f.severity == Severity::flag &&
                          f.message.find("fallback") != std::string::npos);
  CHECK(flagged);
}

TEST_CASE("classification: explicit archetype key wins") {
  const auto spec = spec_of(read_fixture("stiff_ode.md"));
  const auto result = gates::gate_classification(spec);
  CHECK(result.archetype->id == "stiff-ode");
}

// ---- G1 dimensional -----------------------------------------------------------

TEST_CASE("gate_dimensional: correct kappa passes, wrong dimension rejects") {
  const auto* heat = gates::find_archetype(gates::builtin_archetypes(), "heat");
  REQUIRE(heat != nullptr);

  const auto good = spec_of(heat_spec_text("1e-4 m^2/s", "u(x,0) = sin(pi*x)"));
  CHECK(gates::gate_dimensional(good, *heat).empty());

  const auto bad = spec_of(heat_spec_text("1e-4 m/s", "u(x,0) = sin(pi*x)"));
  const auto findings = gates::gate_dimensional(bad, *heat);
  REQUIRE(findings.size() == 1);
  CHECK(findings[0].severity == Severity::reject);
  CHECK(findings[0].s_conditions == std::vector{SCondition::S1});
}

TEST_CASE("gate_dimensional: negative kappa is a non-physical parameter") {
  const auto* heat = gates::find_archetype(gates::builtin_archetypes(), "heat");
  const auto spec = spec_of(heat_spec_text("-1e-4 m^2/s", "u(x,0) = sin(pi*x)"));
  const auto findings = gates::gate_dimensional(spec, *heat);
  REQUIRE(findings.size() == 1);
  CHECK(findings[0].message.find("non-physical") != std::string::npos);
  CHECK(findings[0].severity == Severity::reject);
}

// ---- G2 BC/IC -------------------------------------------------------------------

TEST_CASE("gate_bc_ic: heat with initial N/A rejects on S2") {
  const auto* heat = gates::find_archetype(gates::builtin_archetypes(), "heat");
  const auto spec = spec_of(heat_spec_text("1e-4 m^2/s", "N/A"));
  const auto findings = gates::gate_bc_ic(spec, *heat);
  REQUIRE(findings.size() == 1);
  CHECK(findings[0].severity == Severity::reject);
  CHECK(findings[0].s_conditions == std::vector{SCondition::S2});
}

TEST_CASE("gate_bc_ic: elliptic with full Dirichlet boundary passes") {
  const auto* poisson = gates::find_archetype(gates::builtin_archetypes(), "poisson");
  const auto spec = spec_of(read_fixture("poisson_2d.md"));
  CHECK(gates::gate_bc_ic(spec, *poisson).empty());
}

TEST_CASE("gate_bc_ic: elliptic with no boundary entries rejects") {
  auto spec = spec_of(read_fixture("poisson_2d.md"));
  spec.boundary.clear();
  const auto* poisson = gates::find_archetype(gates::builtin_archetypes(), "poisson");
  const auto findings = gates::gate_bc_ic(spec, *poisson);
  REQUIRE(findings.size() == 1);
  CHECK(findings[0].severity == Severity::reject);
}

TEST_CASE("gate_bc_ic: contradictory Dirichlet values on one target reject") {
  const std::string text = "# Specification: Contradict\n"
                           "\n## Domain\ndomain: interval\ndimension: 1\n"
                           "\n## Equations\nequation: u_t = kappa * u_xx\n"
                           "parameters:\n  kappa: 1e-4 m^2/s\n"
                           "\n## Boundary Conditions\n"
                           "bc_a: dirichlet left u = 0\n"
                           "bc_b: dirichlet left u = 1\n"
                           "\n## Initial Conditions\ninitial: u(x,0) = 0\n"
                           "\n## Observables\nobservables:\n  - temperature: K\n"
                           "\n## Tolerance\nerror_max: 1e-3\n";
  const auto spec = spec_of(text);
  const auto* heat = gates::find_archetype(gates::builtin_archetypes(), "heat");
  const auto findings = gates::gate_bc_ic(spec, *heat);
  REQUIRE(findings.size() == 1);
  CHECK(findings[0].message.find("contradictory") != std::string::npos);
}

// ---- G3 well-posedness --------------------------------------------------------------

TEST_CASE("gate_wellposedness: FTCS ratio 0.4 passes, 0.6 rejects") {
  const auto* heat = gates::find_archetype(gates::builtin_archetypes(), "heat");
  const auto spec = spec_of(heat_spec_text("1.0 m^2/s", "u(x,0) = sin(pi*x)"));

  const auto pass_plan = make_plan(R"({"time_scheme": "explicit", "dt": 0.004, "h": 0.1})");
  CHECK(gates::gate_wellposedness(spec, *heat, pass_plan).empty());

  const auto fail_plan = make_plan(R"({"time_scheme": "explicit", "dt": 0.006, "h": 0.1})");
  const auto findings = gates::gate_wellposedness(spec, *heat, fail_plan);
  REQUIRE(findings.size() == 1);
  CHECK(findings[0].severity == Severity::reject);
  CHECK(findings[0].s_conditions == std::vector{SCondition::S3});
  CHECK(findings[0].evidence.at("ratio") == doctest::Approx(0.6));
}

TEST_CASE("gate_wellposedness: implicit scheme needs no CFL evidence") {
  const auto* heat = gates::find_archetype(gates::builtin_archetypes(), "heat");
  const auto spec = spec_of(heat_spec_text("1.0 m^2/s", "u(x,0) = sin(pi*x)"));
  const auto plan = make_plan(R"({"time_scheme": "implicit"})");
  CHECK(gates::gate_wellposedness(spec, *heat, plan).empty());
}

TEST_CASE("gate_wellposedness: explicit rk4 with stiffness 1e7 rejects on S3") {
  const auto* stiff = gates::find_archetype(gates::builtin_archetypes(), "stiff-ode");
  const auto spec = spec_of(read_fixture("stiff_ode.md"));
  const auto plan = make_plan(R"({"time_scheme": "rk4", "stiffness_ratio": 1.0e7})");
  const auto findings = gates::gate_wellposedness(spec, *stiff, plan);
  REQUIRE(findings.size() == 1);
  CHECK(findings[0].severity == Severity::reject);
  CHECK(findings[0].s_conditions == std::vector{SCondition::S3});

  // Boundary is exclusive: exactly 1e6 passes.
  const auto at_threshold = make_plan(R"({"time_scheme": "rk4", "stiffness_ratio": 1.0e6})");
  CHECK(gates::gate_wellposedness(spec, *stiff, at_threshold).empty());

  // Implicit schemes tolerate any stiffness.
  const auto bdf = make_plan(R"({"time_scheme": "bdf", "stiffness_ratio": 1.0e10})");
  CHECK(gates::gate_wellposedness(spec, *stiff, bdf).empty());
}

TEST_CASE("gate_wellposedness: missing stiffness evidence throws MissingPlanField") {
  const auto* stiff = gates::find_archetype(gates::builtin_archetypes(), "stiff-ode");
  const auto spec = spec_of(read_fixture("stiff_ode.md"));
  const auto plan = make_plan(R"({"time_scheme": "rk4"})");
  CHECK_THROWS_AS(gates::gate_wellposedness(spec, *stiff, plan), MissingPlanFieldError);
}

TEST_CASE("gate_wellposedness: 13x13 Hilbert condition number flags on S4") {
  // Oracle: singular-value ratio of the Hilbert matrix in double precision.
  const double cond = hilbert_condition_number(13);
  CHECK(cond > 1e17);
  CHECK(cond < 1e19);

  const auto* poisson = gates::find_archetype(gates::builtin_archetypes(), "poisson");
  const auto spec = spec_of(read_fixture("poisson_2d.md"));
  std::ostringstream scheme;
  scheme << R"({"time_scheme": "none", "coercivity_constant": 8.0, "condition_number": )"
         << cond << "}";
  const auto plan = make_plan(scheme.str());
  const auto findings = gates::gate_wellposedness(spec, *poisson, plan);
  REQUIRE(findings.size() == 1);
  CHECK(findings[0].severity == Severity::flag);
  CHECK(findings[0].s_conditions == std::vector{SCondition::S4});
  CHECK(findings[0].evidence.at("condition_number") == doctest::Approx(cond));
}

TEST_CASE("gate_wellposedness: elliptic coercivity rules") {
  const auto* poisson = gates::find_archetype(gates::builtin_archetypes(), "poisson");
  const auto spec = spec_of(read_fixture("poisson_2d.md"));

  const auto ok = make_plan(R"({"time_scheme": "none", "coercivity_constant": 19.7})");
  CHECK(gates::gate_wellposedness(spec, *poisson, ok).empty());

  const auto bad = make_plan(R"({"time_scheme": "none", "coercivity_constant": -1.0})");
  const auto findings = gates::gate_wellposedness(spec, *poisson, bad);
  REQUIRE(findings.size() == 1);
  CHECK(findings[0].s_conditions == std::vector{SCondition::S2});

  const auto missing = make_plan(R"({"time_scheme": "none"})");
  CHECK_THROWS_AS(gates::gate_wellposedness(spec, *poisson, missing), MissingPlanFieldError);
}

TEST_CASE("gate_wellposedness: a plan node without finite Lipschitz rejects") {
  const auto* heat = gates::find_archetype(gates::builtin_archetypes(), "heat");
  const auto spec = spec_of(heat_spec_text("1e-4 m^2/s", "u(x,0) = sin(pi*x)"));
  const std::string json = R"({
    "nodes": [{"id": "solo", "primitive": "evolve"}],
    "edges": [],
    "scheme": {"time_scheme": "implicit"}
  })";
  const auto plan = gates::parse_plan_json(json);  // L omitted -> NaN
  const auto findings = gates::gate_wellposedness(spec, *heat, plan);
  REQUIRE(findings.size() == 1);
  CHECK(findings[0].message.find("Lipschitz") != std::string::npos);
}

// ---- G5 cost --------------------------------------------------------------------------

TEST_CASE("gate_cost: pass, reject, and the inclusive boundary") {
  const auto plan = make_plan(R"({"time_scheme": "implicit"})");
  const auto budget = opgraph::select_resolutions(plan.graph, 1e-2);

  auto pass = gates::gate_cost(budget, plan.graph, 1, 1e6);
  REQUIRE(pass.size() == 1);
  CHECK(pass[0].severity == Severity::info);

  auto reject = gates::gate_cost(budget, plan.graph, 1, 1e-9);
  REQUIRE(reject.size() == 1);
  CHECK(reject[0].severity == Severity::reject);
  CHECK(reject[0].evidence.at("cost") > reject[0].evidence.at("limit"));

  const double exact_cost = opgraph::estimate_cost(budget, plan.graph, 1);
  auto boundary = gates::gate_cost(budget, plan.graph, 1, exact_cost);
  REQUIRE(boundary.size() == 1);
  CHECK(boundary[0].severity == Severity::info);  // limit == cost passes
}

// ---- run-gates -------------------------------------------------------------------------

TEST_CASE("run-gates: R3 metric integrity") {
  const auto text = read_fixture("ct_lodopab.md");
  const auto doc = doc_of(text);
  const auto spec = spec_of(text);
  const auto plan = make_plan(R"({"time_scheme": "implicit"})");
  gates::Limits limits;
  limits.target_eps = 1e-3;

  const auto findings = gates::run_operational_gates(doc, spec, plan, limits);
  for (const auto& f : findings) {
    if (f.gate == GateId::R3) CHECK(f.severity == Severity::info);  // PSNR is declared
    if (f.gate == GateId::R2) CHECK(f.severity == Severity::info);
  }

  auto bad_spec = spec;
  bad_spec.tolerance.metric = "RMSE";
  const auto bad = gates::run_operational_gates(doc, bad_spec, plan, limits);
  bool r3_reject = false;
  for (const auto& f : bad)
    r3_reject = r3_reject || (f.gate == GateId::R3 && f.severity == Severity::reject);
  CHECK(r3_reject);
}

TEST_CASE("run-gates: pipeline digest is deterministic") {
  const auto text = read_fixture("heat_1d.md");
  const auto doc = doc_of(text);
  const auto plan = make_plan(R"({"time_scheme": "implicit"})");
  gates::Limits limits;
  CHECK(gates::pipeline_digest(doc, plan, limits) == gates::pipeline_digest(doc, plan, limits));
}

// ---- judge_pre ---------------------------------------------------------------------------

TEST_CASE("judge_pre: consistent heat spec with a stable implicit plan accepts") {
  const auto text = heat_spec_text("1.0e-4 m^2/s", "u(x,0) = sin(pi*x)");
  const auto doc = doc_of(text);
  const auto spec = spec_of(text);
  const auto plan = make_plan(R"({"time_scheme": "implicit", "dt": 0.004, "h": 0.1})");
  gates::Limits limits;
  limits.target_eps = 1e-3;

  const auto verdict = gates::judge_pre(doc, spec, {plan}, limits);
  CHECK(verdict.outcome == gates::Outcome::accept);
  CHECK(verdict.rounds_used == 0);
  CHECK_FALSE(verdict.any_reject());
}

TEST_CASE("judge_pre: stiff explicit plan amended to BDF accepts with rounds_used 1") {
  const auto text = read_fixture("stiff_ode.md");
  const auto doc = doc_of(text);
  const auto spec = spec_of(text);
  const auto explicit_plan =
      make_plan(R"({"time_scheme": "rk4", "stiffness_ratio": 1.0e7})");
  const auto bdf_plan = make_plan(R"({"time_scheme": "bdf", "stiffness_ratio": 1.0e7})");
  gates::Limits limits;
  limits.target_eps = 1e-3;

  const auto verdict = gates::judge_pre(doc, spec, {explicit_plan, bdf_plan}, limits);
  CHECK(verdict.outcome == gates::Outcome::accept);
  CHECK(verdict.rounds_used == 1);
}

TEST_CASE("judge_pre: ill-posed spec with no amendment rejects citing S2") {
  const auto text = heat_spec_text("1.0e-4 m^2/s", "N/A");
  const auto doc = doc_of(text);
  const auto spec = spec_of(text);
  const auto plan = make_plan(R"({"time_scheme": "implicit"})");
  gates::Limits limits;
  limits.target_eps = 1e-3;

  const auto verdict = gates::judge_pre(doc, spec, {plan}, limits);
  CHECK(verdict.outcome == gates::Outcome::reject);
  REQUIRE(verdict.rejected_condition.has_value());
  CHECK(*verdict.rejected_condition == SCondition::S2);
  CHECK(verdict.rounds_used == 0);
}

TEST_CASE("judge_pre: flags never block acceptance") {
  const auto text = read_fixture("poisson_2d.md");
  const auto doc = doc_of(text);
  const auto spec = spec_of(text);
  const auto plan = make_plan(
      R"({"time_scheme": "none", "coercivity_constant": 8.0, "condition_number": 1.0e13})");
  gates::Limits limits;
  limits.target_eps = 1e-3;

  const auto verdict = gates::judge_pre(doc, spec, {plan}, limits);
  CHECK(verdict.outcome == gates::Outcome::accept);
  CHECK(verdict.any_flag());
}

TEST_CASE("judge_pre: verdict is deterministic") {
  const auto text = heat_spec_text("1.0e-4 m^2/s", "u(x,0) = sin(pi*x)");
  const auto doc = doc_of(text);
  const auto spec = spec_of(text);
  const auto plan = make_plan(R"({"time_scheme": "explicit", "dt": 0.006, "h": 0.1})");
  gates::Limits limits;
  const auto a = gates::judge_pre(doc, spec, {plan}, limits);
  const auto b = gates::judge_pre(doc, spec, {plan}, limits);
  REQUIRE(a.findings.size() == b.findings.size());
  for (std::size_t i = 0; i < a.findings.size(); ++i) {
    CHECK(a.findings[i].gate == b.findings[i].gate);
    CHECK(a.findings[i].message == b.findings[i].message);
  }
}

TEST_CASE("judge_pre: rounds_used never exceeds 3") {
  const auto text = heat_spec_text("1.0e-4 m^2/s", "N/A");
  const auto doc = doc_of(text);
  const auto spec = spec_of(text);
  const auto plan = make_plan(R"({"time_scheme": "implicit"})");
  gates::Limits limits;
  const std::vector<gates::Plan> plans(6, plan);  // more amendments than allowed
  const auto verdict = gates::judge_pre(doc, spec, plans, limits);
  CHECK(verdict.outcome == gates::Outcome::reject);
  CHECK(verdict.rounds_used <= 3);
}

TEST_CASE("gate findings sort in fixed gate order") {
  const auto text = heat_spec_text("-1.0 m/s", "N/A");  // multiple gates fire
  const auto doc = doc_of(text);
  const auto spec = spec_of(text);
  const auto plan = make_plan(R"({"time_scheme": "explicit", "dt": 0.006, "h": 0.1})");
  gates::Limits limits;
  const auto findings = gates::judge_round(doc, spec, plan, limits);
  for (std::size_t i = 1; i < findings.size(); ++i) {
    CHECK(int(findings[i - 1].gate) <= int(findings[i].gate));
  }
}

TEST_CASE("archetype data file matches the built-in template set") {
  const auto loaded = gates::load_archetypes(std::string(SIMJUDGE_DATA_DIR) +
                                             "/archetypes.json");
  const auto& builtin = gates::builtin_archetypes();
  REQUIRE(loaded.size() == builtin.size());
  for (const auto& t : builtin) {
    const auto* match = gates::find_archetype(loaded, t.id);
    REQUIRE_MESSAGE(match != nullptr, "missing archetype " << t.id);
    CHECK(match->pde_class == t.pde_class);
    CHECK(match->requires_ic == t.requires_ic);
    CHECK(match->requires_full_boundary == t.requires_full_boundary);
    CHECK(match->stability_rule == t.stability_rule);
    REQUIRE(match->required_params.size() == t.required_params.size());
    for (std::size_t i = 0; i < t.required_params.size(); ++i) {
      CHECK(match->required_params[i].name == t.required_params[i].name);
      CHECK(match->required_params[i].dimension == t.required_params[i].dimension);
      CHECK(match->required_params[i].positive == t.required_params[i].positive);
    }
  }
}
