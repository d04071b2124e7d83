// simjudge: validate | judge | plan | solve | audit | probe | certify
//
// Exit codes: 0 certified/pass, 2 rejected, 3 flagged, 1 usage/internal error.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "simjudge/certify.hpp"
#include "simjudge/gates.hpp"
#include "simjudge/probes.hpp"
#include "simjudge/sfd.hpp"
#include "simjudge/sha256.hpp"
#include "simjudge/solvers.hpp"

namespace {

using namespace simjudge;

constexpr int kExitPass = 0;
constexpr int kExitUsage = 1;
constexpr int kExitReject = 2;
constexpr int kExitFlag = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

nlohmann::json scheme_to_json(const solvers::SchemeDescriptor& scheme) {
  nlohmann::json out;
  out["time_scheme"] = solvers::scheme_name(scheme.time_scheme);
  if (scheme.dt > 0.0) out["dt"] = scheme.dt;
  if (scheme.h > 0.0) out["h"] = scheme.h;
  for (const auto& [key, value] : scheme.extra) out[key] = value;
  return out;
}

void emit(const nlohmann::json& value, const std::string& out_path) {
  const std::string text = value.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path);
    if (!out) throw Error("cannot open '" + out_path + "' for writing");
    out << text;
  }
}

// ---- declarations file -> audit::Declarations --------------------------------

struct LoadedDeclarations {
  audit::Declarations decl;
  // Residual evaluators need the solution; bind lazily.
  std::optional<nlohmann::json> residual_spec;
};

LoadedDeclarations parse_declarations(const std::string& json_text) {
  LoadedDeclarations out;
  nlohmann::json root = nlohmann::json::parse(json_text);
  if (root.contains("conservation"))
    out.decl.conservation_threshold = root["conservation"].value("threshold", 1e-12);
  if (root.contains("bounds")) {
    const auto& b = root["bounds"];
    if (b.contains("lower")) out.decl.bounds_lower = b["lower"].get<double>();
    if (b.contains("upper")) out.decl.bounds_upper = b["upper"].get<double>();
    out.decl.bounds_tol = b.value("tol", 1e-12);
  }
  if (root.contains("monotonicity")) {
    const auto& m = root["monotonicity"];
    const std::string f = m.value("functional", "max");
    out.decl.monotonicity_functional = f == "max"   ? audit::Functional::max
                                       : f == "min" ? audit::Functional::min
                                                    : audit::Functional::sum;
    const std::string d = m.value("direction", "non-increasing");
    out.decl.monotonicity_direction = d == "non-increasing"
                                          ? audit::Direction::non_increasing
                                          : audit::Direction::non_decreasing;
    out.decl.monotonicity_tol = m.value("tol", 1e-12);
  }
  if (root.contains("symmetry")) {
    out.decl.symmetry_axis = root["symmetry"].value("axis", 0);
    out.decl.symmetry_tol = root["symmetry"].value("tol", 1e-10);
  }
  if (root.contains("entropy")) {
    out.decl.entropy = true;
    out.decl.entropy_tol = root["entropy"].value("tol", 1e-12);
  }
  if (root.contains("residual")) {
    out.residual_spec = root["residual"];
    out.decl.residual_tolerance = root["residual"].value("tolerance", 1e-3);
  }
  return out;
}

void bind_residual(LoadedDeclarations& loaded, const audit::SolutionSeries& series) {
  if (!loaded.residual_spec) return;
  const auto& r = *loaded.residual_spec;
  const std::string archetype = r.value("archetype", "");
  if (archetype == "poisson") {
    const double pi = std::acos(-1.0);
    const double amplitude = r.value("amplitude", 1.0);
    const double ax = r.value("ax", 1.0);
    const double ay = r.value("ay", 1.0);
    auto forcing = [=](double x, double y) {
      return amplitude * (ax * ax + ay * ay) * pi * pi * std::sin(ax * pi * x) *
             std::sin(ay * pi * y);
    };
    loaded.decl.residual =
        audit::make_poisson_residual_evaluator(series.frames.back(), forcing);
  } else if (archetype == "heat") {
    const double kappa = r.value("kappa", 1.0);
    const bool periodic = r.value("periodic", false);
    loaded.decl.residual = audit::make_heat_residual_evaluator(series, kappa, periodic);
  } else {
    throw NoEvaluatorError(archetype);
  }
}

audit::SolutionSeries load_solution(const std::string& path) {
  if (path.size() > 4 && path.substr(path.size() - 4) == ".sfd") {
    audit::SolutionSeries series;
    series.times = {0.0};
    series.frames = {sfd::read_field(path)};
    return series;
  }
  return sfd::read_series(path);
}

// ---- subcommands ------------------------------------------------------------------

int cmd_validate(const std::string& spec_path, const std::string& out_path) {
  const std::string text = read_file(spec_path);
  specmd::ValidationReport report;
  try {
    const auto doc = specmd::parse_spec(text);
    report = specmd::validate_spec(doc);
  } catch (const ParseError& e) {
    report.valid = false;
    report.digest = sha256_hex(text);
    report.violations.push_back({"parse", e.what(), e.line});
  }
  emit(certify::validation_to_json(report), out_path);
  return report.valid ? kExitPass : kExitReject;
}

int cmd_judge(const std::string& spec_path, const std::vector<std::string>& plan_paths,
              const std::string& limits_path, const std::string& out_path) {
  const std::string text = read_file(spec_path);
  gates::Limits limits;
  if (!limits_path.empty()) limits = gates::parse_limits_json(read_file(limits_path));

  gates::JudgeVerdict verdict;
  try {
    const auto doc = specmd::parse_spec(text);
    const auto report = specmd::validate_spec(doc);
    if (!report.valid) {
      verdict.outcome = gates::Outcome::reject;
      verdict.rejected_condition = gates::SCondition::S1;
      gates::GateFinding f;
      f.gate = gates::GateId::R1;
      f.s_conditions = {gates::SCondition::S1};
      f.severity = gates::Severity::reject;
      f.message = "spec document fails validation (" +
                  std::to_string(report.violations.size()) + " violations)";
      verdict.findings.push_back(std::move(f));
    } else {
      const auto spec = specmd::extract_six_tuple(doc);
      std::vector<gates::Plan> plans;
      for (const auto& p : plan_paths) plans.push_back(gates::parse_plan_json(read_file(p)));
      verdict = gates::judge_pre(doc, spec, plans, limits);
    }
  } catch (const ParseError& e) {
    verdict.outcome = gates::Outcome::reject;
    verdict.rejected_condition = gates::SCondition::S1;
    gates::GateFinding f;
    f.gate = gates::GateId::R1;
    f.s_conditions = {gates::SCondition::S1};
    f.severity = gates::Severity::reject;
    f.message = std::string("spec parse error: ") + e.what();
    verdict.findings.push_back(std::move(f));
  } catch (const ExtractionError& e) {
    verdict.outcome = gates::Outcome::reject;
    verdict.rejected_condition = gates::SCondition::S1;
    gates::GateFinding f;
    f.gate = gates::GateId::R1;
    f.s_conditions = {gates::SCondition::S1};
    f.severity = gates::Severity::reject;
    f.message = std::string("six-tuple extraction failed: ") + e.what();
    verdict.findings.push_back(std::move(f));
  }

  emit(certify::verdict_to_json(verdict), out_path);
  if (verdict.outcome != gates::Outcome::accept) return kExitReject;
  return verdict.any_flag() ? kExitFlag : kExitPass;
}

int cmd_plan(const std::string& plan_path, double eps, int dim, const std::string& out_path) {
  const auto plan = gates::parse_plan_json(read_file(plan_path));
  const auto budget = opgraph::select_resolutions(plan.graph, eps);
  nlohmann::json out = certify::budget_to_json(budget);
  out["estimated_cost"] = opgraph::estimate_cost(budget, plan.graph, dim);
  out["dag_lipschitz"] = opgraph::dag_lipschitz(plan.graph);
  if (plan.family) {
    nlohmann::json prims = nlohmann::json::array();
    for (auto p : opgraph::primitives_for_family(*plan.family))
      prims.push_back(opgraph::primitive_name(p));
    out["family_primitives"] = prims;
  }
  emit(out, out_path);
  return kExitPass;
}

int cmd_solve(const std::string& problem, const nlohmann::json& params,
              const std::string& out_prefix) {
  nlohmann::json manifest;
  manifest["problem"] = problem;

  const std::filesystem::path prefix(out_prefix);
  if (prefix.has_parent_path()) std::filesystem::create_directories(prefix.parent_path());

  if (problem == "poisson") {
    const int n = params.value("n", 65);
    const double pi = std::acos(-1.0);
    const double amplitude = params.value("amplitude", 1.0);
    auto forcing = [=](double x, double y) {
      return amplitude * 2.0 * pi * pi * std::sin(pi * x) * std::sin(pi * y);
    };
    auto zero = [](double, double) { return 0.0; };
    const auto field = solvers::solve_poisson_2d(forcing, zero, n);
    const std::string path = out_prefix + ".sfd";
    sfd::write_field(path, field);
    manifest["solution"] = path;
    solvers::SchemeDescriptor sd;
    sd.time_scheme = solvers::Scheme::direct_elliptic;
    sd.h = field.spacing[0];
    // Smallest eigenvalue of the discrete Dirichlet Laplacian on the unit
    // square is at least 8 for any mesh width below one.
    sd.extra["coercivity_constant"] = 8.0;
    manifest["scheme"] = scheme_to_json(sd);
  } else if (problem == "heat") {
    const int n = params.value("n", 101);
    const double kappa = params.value("kappa", 1.0);
    const double dt = params.value("dt", 1e-5);
    const double t_end = params.value("t_end", 0.01);
    const int record_every = params.value("record_every", 10);
    const std::string scheme_text = params.value("scheme", "ftcs-explicit");
    const std::string bc_text = params.value("bc", "dirichlet");
    const double pi = std::acos(-1.0);
    Eigen::ArrayXd ic(n);
    const bool periodic = bc_text == "periodic";
    const double h = periodic ? 1.0 / n : 1.0 / (n - 1);
    for (int i = 0; i < n; ++i)
      ic[i] = periodic ? 1.0 + 0.5 * std::sin(2.0 * pi * i * h) : std::sin(pi * i * h);
    const auto run = solvers::solve_heat_1d(
        ic, periodic ? solvers::HeatBc::periodic : solvers::HeatBc::dirichlet, kappa,
        solvers::scheme_from_name(scheme_text), dt, t_end, record_every);
    const std::string manifest_path = out_prefix + ".series";
    sfd::write_series(manifest_path, prefix.filename().string(), run.series);
    manifest["solution"] = manifest_path;
    solvers::SchemeDescriptor sd;
    sd.time_scheme = solvers::scheme_from_name(scheme_text);
    sd.dt = dt;
    sd.h = h;
    sd.extra["kappa"] = kappa;
    sd.extra["cfl_ratio"] = run.cfl_ratio;
    manifest["scheme"] = scheme_to_json(sd);
    manifest["nan_truncated"] = run.nan_truncated;
  } else if (problem == "stiff") {
    const double lf = params.value("lambda_fast", -1e7);
    const double ls = params.value("lambda_slow", -1.0);
    const double dt = params.value("dt", 1e-2);
    const double t_end = params.value("t_end", 1.0);
    const std::string scheme_text = params.value("scheme", "implicit-euler");
    Eigen::Vector2d x0(params.value("x0", 1.0), params.value("x1", 1.0));
    const auto run =
        solvers::solve_stiff_linear(lf, ls, x0, solvers::scheme_from_name(scheme_text), dt, t_end);
    const std::string manifest_path = out_prefix + ".series";
    sfd::write_series(manifest_path, prefix.filename().string(), run.series);
    manifest["solution"] = manifest_path;
    solvers::SchemeDescriptor sd;
    sd.time_scheme = solvers::scheme_from_name(scheme_text);
    sd.dt = dt;
    sd.extra["stiffness_ratio"] = run.stiffness_ratio;
    manifest["scheme"] = scheme_to_json(sd);
    manifest["nan_truncated"] = run.nan_truncated;
  } else if (problem == "burgers") {
    const int n = params.value("n", 256);
    const double dt = params.value("dt", 1e-3);
    const double t_end = params.value("t_end", 0.5);
    const int record_every = params.value("record_every", 25);
    const double pi = std::acos(-1.0);
    Eigen::ArrayXd ic(n);
    // Mean-one profile so declared mass conservation has a scale to measure
    // against; the wave still steepens into a shock.
    for (int i = 0; i < n; ++i) ic[i] = 1.0 + 0.5 * std::sin(2.0 * pi * double(i) / n);
    const auto series = solvers::solve_burgers_lf(ic, dt, t_end, record_every);
    const std::string manifest_path = out_prefix + ".series";
    sfd::write_series(manifest_path, prefix.filename().string(), series);
    manifest["solution"] = manifest_path;
    solvers::SchemeDescriptor sd;
    sd.time_scheme = solvers::Scheme::lax_friedrichs;
    sd.dt = dt;
    sd.h = 1.0 / n;
    manifest["scheme"] = scheme_to_json(sd);
  } else if (problem == "pitchfork") {
    const double theta = params.value("theta", -1.0);
    const double x0 = params.value("x0", 1e-3);
    const double dt = params.value("dt", 0.05);
    const double t_end = params.value("t_end", 50.0);
    const double terminal = solvers::solve_pitchfork(theta, x0, dt, t_end);
    manifest["terminal_state"] = terminal;
  } else {
    throw Error("unknown built-in problem '" + problem + "'");
  }

  emit(manifest, out_prefix + ".manifest.json");
  return kExitPass;
}

std::vector<audit::InvariantEntry> invariants_from_spec(const std::string& spec_path) {
  std::vector<audit::InvariantEntry> entries;
  if (spec_path.empty()) return entries;
  const auto doc = specmd::parse_spec(read_file(spec_path));
  if (const auto* section = doc.find_section("Invariants")) {
    for (const auto& entry : section->entries) {
      entries.push_back({entry.key, entry.joined_text()});
    }
  }
  return entries;
}

int cmd_audit(const std::string& spec_path, const std::string& solution_path,
              const std::string& declarations_path, const std::string& out_path) {
  const auto series = load_solution(solution_path);
  LoadedDeclarations loaded;
  if (!declarations_path.empty()) loaded = parse_declarations(read_file(declarations_path));
  loaded.decl = audit::merge_declared_invariants(loaded.decl, invariants_from_spec(spec_path));
  bind_residual(loaded, series);
  const auto report = audit::audit_solution(series, loaded.decl);
  emit(certify::audit_to_json(report), out_path);
  return report.passed() ? kExitPass : kExitFlag;
}

int cmd_probe(const std::string& problem, const std::string& manifest_path, double theta,
              const std::string& which, std::uint64_t seed, const std::string& summary,
              const std::string& out_path) {
  const auto p = manifest_path.empty() ? probes::make_builtin_problem(problem, theta)
                                       : probes::load_plugin_problem(manifest_path);
  const auto summary_kind = summary == "norm" ? probes::EnsembleSummary::norm
                                              : probes::EnsembleSummary::mean;
  nlohmann::json out = nlohmann::json::array();
  bool any_flag = false;

  auto push = [&](const probes::ProbeReport& r) {
    out.push_back(certify::probe_to_json(r));
    any_flag = any_flag || r.flagged;
  };
  const bool all = which == "all";
  if (all || which == "continuation") push(probes::probe_continuation(p));
  if ((all && p.linearization) || which == "lyapunov")
    push(probes::probe_lyapunov(p, 5000, 1e-6, seed));
  if ((all && p.solve_perturbed) || which == "ensemble")
    push(probes::probe_ensemble(p, 5, 1e-3, 0.1, seed, summary_kind));

  emit(out, out_path);
  return any_flag ? kExitFlag : kExitPass;
}

int cmd_certify(const std::string& spec_path, const std::vector<std::string>& plan_paths,
                const std::string& limits_path, const std::string& solution_path,
                const std::string& declarations_path,
                const std::vector<std::string>& probe_report_paths,
                const std::string& probe_problem, double probe_theta, std::uint64_t seed,
                const std::string& out_path) {
  const std::string text = read_file(spec_path);
  const auto doc = specmd::parse_spec(text);
  const auto validation = specmd::validate_spec(doc);

  gates::Limits limits;
  if (!limits_path.empty()) limits = gates::parse_limits_json(read_file(limits_path));

  certify::CertificateInputs inputs;
  inputs.spec_digest = doc.source_digest;

  if (!validation.valid) {
    inputs.verdict.outcome = gates::Outcome::reject;
    inputs.verdict.rejected_condition = gates::SCondition::S1;
    gates::GateFinding f;
    f.gate = gates::GateId::R1;
    f.s_conditions = {gates::SCondition::S1};
    f.severity = gates::Severity::reject;
    f.message = "spec document fails validation";
    inputs.verdict.findings.push_back(std::move(f));
  } else {
    const auto spec = specmd::extract_six_tuple(doc);
    std::vector<gates::Plan> plans;
    for (const auto& p : plan_paths) plans.push_back(gates::parse_plan_json(read_file(p)));
    if (plans.empty()) throw Error("certify needs at least one --plan");
    inputs.plan_digest = plans.back().digest;
    inputs.verdict = gates::judge_pre(doc, spec, plans, limits);

    const auto eps = gates::resolve_target_eps(spec, limits);
    if (eps) inputs.tolerance_eps = eps;
    if (inputs.verdict.outcome == gates::Outcome::accept && eps) {
      const std::size_t used = std::size_t(inputs.verdict.rounds_used);
      inputs.budget = opgraph::select_resolutions(plans[used].graph, *eps);
    }

    if (inputs.verdict.outcome == gates::Outcome::accept && !solution_path.empty()) {
      const auto series = load_solution(solution_path);
      LoadedDeclarations loaded;
      if (!declarations_path.empty())
        loaded = parse_declarations(read_file(declarations_path));
      loaded.decl =
          audit::merge_declared_invariants(loaded.decl, invariants_from_spec(spec_path));
      bind_residual(loaded, series);
      const auto report = audit::audit_solution(series, loaded.decl);
      inputs.audit_report = report;
      for (const auto& check : report.checks) {
        if (check.id == "residual" && check.evidence.count("bound_B"))
          inputs.bound_B = check.evidence.at("bound_B");
      }
    }
    if (inputs.verdict.outcome == gates::Outcome::accept && !probe_problem.empty()) {
      const auto problem = probes::make_builtin_problem(probe_problem, probe_theta);
      inputs.probe_reports.push_back(probes::probe_continuation(problem));
      if (problem.linearization)
        inputs.probe_reports.push_back(probes::probe_lyapunov(problem, 5000, 1e-6, seed));
      if (problem.solve_perturbed)
        inputs.probe_reports.push_back(probes::probe_ensemble(problem, 5, 1e-3, 0.1, seed));
    }
    for (const auto& path : probe_report_paths) {
      nlohmann::json jr = nlohmann::json::parse(read_file(path));
      // Accept either a single report object or an array of them.
      const auto parse_one = [](const nlohmann::json& j) {
        probes::ProbeReport r;
        const std::string name = j.at("probe").get<std::string>();
        r.probe = name == "continuation" ? probes::ProbeKind::continuation
                  : name == "lyapunov"   ? probes::ProbeKind::lyapunov
                                         : probes::ProbeKind::ensemble;
        r.flagged = j.at("flagged").get<bool>();
        if (j.at("measured").is_number()) r.measured = j["measured"].get<double>();
        if (j.at("threshold").is_number()) r.threshold = j["threshold"].get<double>();
        if (j.contains("evidence")) {
          for (const auto& [k, v] : j["evidence"].items())
            if (v.is_number()) r.evidence[k] = v.get<double>();
        }
        if (j.contains("notes"))
          for (const auto& n : j["notes"]) r.notes.push_back(n.get<std::string>());
        return r;
      };
      if (jr.is_array()) {
        for (const auto& j : jr) inputs.probe_reports.push_back(parse_one(j));
      } else {
        inputs.probe_reports.push_back(parse_one(jr));
      }
    }
  }

  const auto cert = certify::emit_certificate(inputs);
  const std::string canonical = certify::certificate_to_canonical_string(cert);
  if (out_path.empty()) {
    std::cout << canonical << "\n";
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw Error("cannot open '" + out_path + "' for writing");
    out << canonical;  // byte-stable: no trailing newline inside the sealed text
  }
  switch (cert.outcome) {
    case certify::CertOutcome::certified: return kExitPass;
    case certify::CertOutcome::flagged: return kExitFlag;
    case certify::CertOutcome::rejected: return kExitReject;
  }
  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"simjudge: deterministic pre-execution gates, audits, probes, and certificates "
               "for simulation specs"};
  app.require_subcommand(1);

  std::string spec_path, out_path, limits_path, solution_path, declarations_path;
  std::vector<std::string> plan_paths, probe_report_paths;

  auto* validate = app.add_subcommand("validate", "parse and validate a spec document");
  validate->add_option("--spec", spec_path)->required();
  validate->add_option("--out", out_path);

  auto* judge = app.add_subcommand("judge", "run pre-execution gates on a spec and plan");
  judge->add_option("--spec", spec_path)->required();
  judge->add_option("--plan", plan_paths)->required();
  judge->add_option("--limits", limits_path);
  judge->add_option("--out", out_path);

  double plan_eps = 1e-3;
  int plan_dim = 1;
  auto* plan = app.add_subcommand("plan", "compute the error budget for a plan file");
  plan->add_option("--plan", plan_paths)->required();
  plan->add_option("--eps", plan_eps);
  plan->add_option("--dim", plan_dim);
  plan->add_option("--out", out_path);

  std::string problem = "heat";
  std::string params_json = "{}";
  std::string out_prefix = "run";
  auto* solve = app.add_subcommand("solve", "run a built-in reference solver");
  solve->add_option("--problem", problem)->required();
  solve->add_option("--params", params_json, "JSON object of solver parameters");
  solve->add_option("--out", out_prefix, "output path prefix");

  auto* audit_cmd = app.add_subcommand("audit", "run declared post-execution checks");
  audit_cmd->add_option("--spec", spec_path);
  audit_cmd->add_option("--solution", solution_path)->required();
  audit_cmd->add_option("--declarations", declarations_path);
  audit_cmd->add_option("--out", out_path);

  double theta = 0.0;
  std::string which_probe = "all";
  std::string manifest_path;
  std::uint64_t seed = 0;
  auto* probe = app.add_subcommand("probe", "run bifurcation-proximity probes");
  probe->add_option("--problem", problem, "built-in problem id");
  probe->add_option("--manifest", manifest_path, "external solver plugin manifest");
  probe->add_option("--theta", theta);
  probe->add_option("--probe", which_probe, "continuation|lyapunov|ensemble|all");
  probe->add_option("--seed", seed);
  std::string ensemble_summary = "mean";
  probe->add_option("--summary", ensemble_summary, "ensemble scalar: mean|norm");
  probe->add_option("--out", out_path);

  std::string probe_problem;
  double probe_theta = 0.0;
  auto* cert = app.add_subcommand("certify", "assemble a hash-sealed certificate");
  cert->add_option("--spec", spec_path)->required();
  cert->add_option("--plan", plan_paths)->required();
  cert->add_option("--limits", limits_path);
  cert->add_option("--solution", solution_path);
  cert->add_option("--declarations", declarations_path);
  cert->add_option("--probe-report", probe_report_paths);
  cert->add_option("--probe-problem", probe_problem, "run built-in probes during certify");
  cert->add_option("--probe-theta", probe_theta);
  cert->add_option("--seed", seed);
  cert->add_option("--out", out_path);

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) return cmd_validate(spec_path, out_path);
    if (judge->parsed()) return cmd_judge(spec_path, plan_paths, limits_path, out_path);
    if (plan->parsed()) return cmd_plan(plan_paths.front(), plan_eps, plan_dim, out_path);
    if (solve->parsed()) return cmd_solve(problem, nlohmann::json::parse(params_json), out_prefix);
    if (audit_cmd->parsed())
      return cmd_audit(spec_path, solution_path, declarations_path, out_path);
    if (probe->parsed())
      return cmd_probe(problem, manifest_path, theta, which_probe, seed, ensemble_summary,
                       out_path);
    if (cert->parsed())
      return cmd_certify(spec_path, plan_paths, limits_path, solution_path, declarations_path,
                         probe_report_paths, probe_problem, probe_theta, seed, out_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
