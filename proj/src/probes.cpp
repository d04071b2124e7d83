#include "simjudge/probes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "simjudge/rng.hpp"
#include "simjudge/sfd.hpp"
#include "simjudge/solvers.hpp"

namespace simjudge::probes {

namespace {

constexpr double kNormFloor = 1e-30;
constexpr double kMeanFloor = 1e-30;

double field_norm(const audit::SolutionField& f) {
  return std::sqrt((f.values * f.values).sum());
}

audit::SolutionField scalar_field(double v) {
  audit::SolutionField f;
  f.shape = {1};
  f.spacing = {1.0};
  f.values = Eigen::ArrayXd::Constant(1, v);
  return f;
}

}  // namespace

std::string probe_name(ProbeKind p) {
  switch (p) {
    case ProbeKind::continuation: return "continuation";
    case ProbeKind::lyapunov: return "lyapunov";
    case ProbeKind::ensemble: return "ensemble";
  }
  return "?";
}

// ---- continuation -----------------------------------------------------------

ProbeReport probe_continuation(const ParametricProblem& p, double delta_rel,
                               double delta_abs_floor, double tau) {
  ProbeReport report;
  report.probe = ProbeKind::continuation;
  report.threshold = tau;

  const audit::SolutionField baseline = p.solve(p.theta);  // SolveError propagates
  const double base_norm = std::max(field_norm(baseline), kNormFloor);
  report.evidence["baseline_norm"] = field_norm(baseline);

  double worst = 0.0;
  bool failed_solve = false;
  for (double sign : {+1.0, -1.0}) {
    Eigen::VectorXd theta = p.theta;
    for (Eigen::Index i = 0; i < theta.size(); ++i) {
      const double step = std::max(std::abs(theta[i]) * delta_rel, delta_abs_floor);
      theta[i] += sign * step;
    }
    try {
      const audit::SolutionField perturbed = p.solve(theta);
      const double change = std::sqrt((perturbed.values - baseline.values).square().sum());
      const double rel = change / base_norm;
      worst = std::max(worst, rel);
      report.evidence[sign > 0 ? "change_plus" : "change_minus"] = rel;
    } catch (const Error&) {
      failed_solve = true;
      report.notes.push_back(sign > 0 ? "perturbed solve failed (+delta)"
                                      : "perturbed solve failed (-delta)");
    }
  }
  if (failed_solve) {
    report.measured = std::numeric_limits<double>::infinity();
    report.flagged = true;
    report.notes.push_back("perturbed solve failed");
    return report;
  }
  report.measured = worst;
  report.flagged = worst > tau;
  return report;
}

// ---- lyapunov -----------------------------------------------------------------

ProbeReport probe_lyapunov(const ParametricProblem& p, int iterations, double tol,
                           std::uint64_t seed) {
  ProbeReport report;
  report.probe = ProbeKind::lyapunov;
  report.threshold = tol;
  if (!p.linearization || p.linearization_dim <= 0) throw NoLinearizationError();

  const int n = p.linearization_dim;
  SplitMix64 rng(seed ^ 0x5ca1ab1eull);

  // Shift estimate: operator-norm upper bound from a few random applications.
  double norm_bound = 0.0;
  for (int trial = 0; trial < 8; ++trial) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = rng.next_symmetric(1.0);
    const double vn = v.norm();
    if (vn < kNormFloor) continue;
    norm_bound = std::max(norm_bound, p.linearization(v).norm() / vn);
  }
  const double shift = 2.0 * std::max(norm_bound, 1e-12);
  report.evidence["shift"] = shift;

  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.next_symmetric(1.0);
  v.normalize();

  double estimate = 0.0;
  double previous = std::numeric_limits<double>::quiet_NaN();
  bool converged = false;
  int used = 0;
  for (int it = 0; it < iterations; ++it) {
    Eigen::VectorXd w = p.linearization(v) + shift * v;
    const double wn = w.norm();
    if (wn < kNormFloor) {
      // Operator annihilates the iterate; dominant shifted eigenvalue ~ 0.
      estimate = -shift;
      converged = true;
      used = it + 1;
      break;
    }
    w /= wn;
    const double rayleigh = w.dot(p.linearization(w) + shift * w);
    estimate = rayleigh - shift;
    v = w;
    used = it + 1;
    if (std::isfinite(previous) && std::abs(estimate - previous) < tol * 0.1) {
      converged = true;
      break;
    }
    previous = estimate;
  }

  report.measured = estimate;
  report.evidence["eigenvalue_estimate"] = estimate;
  report.evidence["iterations_used"] = double(used);
  report.evidence["converged"] = converged ? 1.0 : 0.0;
  if (!converged) {
    report.flagged = true;
    report.notes.push_back("estimate unconverged");
    return report;
  }
  report.flagged = estimate > tol;
  return report;
}

// ---- ensemble -------------------------------------------------------------------

ProbeReport probe_ensemble(const ParametricProblem& p, int n_members, double perturb_eps,
                           double tau_ens, std::uint64_t seed, EnsembleSummary summary) {
  ProbeReport report;
  report.probe = ProbeKind::ensemble;
  report.threshold = tau_ens;
  if (!p.solve_perturbed || p.perturbation_dim <= 0)
    throw Error("problem provides no perturbation hook");

  std::vector<double> summaries;
  summaries.reserve(std::size_t(n_members));
  for (int member = 0; member < n_members; ++member) {
    SplitMix64 rng(substream_seed(seed, std::uint64_t(member)));
    Eigen::VectorXd xi(p.perturbation_dim);
    for (int i = 0; i < p.perturbation_dim; ++i) xi[i] = rng.next_symmetric(perturb_eps);
    try {
      const audit::SolutionField field = p.solve_perturbed(p.theta, xi);
      const double s = summary == EnsembleSummary::mean ? field.values.mean()
                                                        : field_norm(field);
      summaries.push_back(s);
      report.evidence["member_" + std::to_string(member)] = s;
    } catch (const Error&) {
      report.measured = std::numeric_limits<double>::infinity();
      report.flagged = true;
      report.notes.push_back("member " + std::to_string(member) + " solve failed");
      return report;
    }
  }

  double mean = 0.0;
  for (double s : summaries) mean += s;
  mean /= double(summaries.size());
  double var = 0.0;
  for (double s : summaries) var += (s - mean) * (s - mean);
  var /= double(summaries.size() - 1);  // unbiased
  const double stddev = std::sqrt(var);
  report.evidence["mean"] = mean;
  report.evidence["stddev"] = stddev;

  if (std::abs(mean) < kMeanFloor) {
    // Sign-symmetric outcomes make CV of the mean meaningless.
    report.notes.push_back("mean near zero");
    report.measured = stddev;
    report.threshold = 10.0 * perturb_eps;
    report.flagged = stddev > report.threshold;
    report.evidence["fallback_stddev_rule"] = 1.0;
    return report;
  }
  report.measured = stddev / std::abs(mean);
  report.flagged = report.measured > tau_ens;
  return report;
}

// ---- built-in problems --------------------------------------------------------------

namespace {

constexpr double kPitchforkX0 = 1e-3;
constexpr double kPitchforkTEnd = 200.0;

double pitchfork_dt(double theta) { return 0.05 / std::max(1.0, std::abs(theta)); }

constexpr int kHeatN = 31;
constexpr double kHeatTEnd = 0.1;
constexpr double kHeatDt = 1e-3;

}  // namespace

ParametricProblem make_pitchfork(double theta) {
  ParametricProblem p;
  p.theta = Eigen::VectorXd::Constant(1, theta);
  p.solve = [](const Eigen::VectorXd& th) {
    const double terminal =
        solvers::solve_pitchfork(th[0], kPitchforkX0, pitchfork_dt(th[0]), kPitchforkTEnd);
    return scalar_field(terminal);
  };
  // Ensemble members start from the perturbation itself: the unperturbed
  // state x = 0 is the invariant manifold whose stability is being probed.
  p.solve_perturbed = [](const Eigen::VectorXd& th, const Eigen::VectorXd& xi) {
    const double terminal =
        solvers::solve_pitchfork(th[0], xi[0], pitchfork_dt(th[0]), kPitchforkTEnd);
    return scalar_field(terminal);
  };
  p.perturbation_dim = 1;
  const double x_hat =
      solvers::solve_pitchfork(theta, kPitchforkX0, pitchfork_dt(theta), kPitchforkTEnd);
  p.linearization = [theta, x_hat](const Eigen::VectorXd& v) {
    return Eigen::VectorXd((theta - 3.0 * x_hat * x_hat) * v);
  };
  p.linearization_dim = 1;
  return p;
}

ParametricProblem make_resonance(double theta) {
  ParametricProblem p;
  p.theta = Eigen::VectorXd::Constant(1, theta);
  p.solve = [](const Eigen::VectorXd& th) {
    const double denom = th[0] - 1.0;
    if (std::abs(denom) < 1e-12) throw SolveError("resonance responder pole at theta = 1");
    return scalar_field(1.0 / denom);
  };
  return p;
}

ParametricProblem make_heat_interior(double kappa) {
  const double pi = std::acos(-1.0);

  auto base_ic = [pi]() {
    Eigen::ArrayXd ic(kHeatN);
    const double h = 1.0 / double(kHeatN - 1);
    for (int i = 0; i < kHeatN; ++i) ic[i] = std::sin(pi * i * h);
    return ic;
  };

  ParametricProblem p;
  p.theta = Eigen::VectorXd::Constant(1, kappa);
  p.solve = [base_ic](const Eigen::VectorXd& th) {
    const auto run = solvers::solve_heat_1d(base_ic(), solvers::HeatBc::dirichlet, th[0],
                                            solvers::Scheme::implicit_euler, kHeatDt, kHeatTEnd,
                                            100);
    return run.series.frames.back();
  };
  p.solve_perturbed = [base_ic](const Eigen::VectorXd& th, const Eigen::VectorXd& xi) {
    Eigen::ArrayXd ic = base_ic();
    for (int i = 1; i + 1 < kHeatN; ++i) ic[i] += xi[i - 1];
    const auto run = solvers::solve_heat_1d(ic, solvers::HeatBc::dirichlet, th[0],
                                            solvers::Scheme::implicit_euler, kHeatDt, kHeatTEnd,
                                            100);
    return run.series.frames.back();
  };
  p.perturbation_dim = kHeatN - 2;
  const double h = 1.0 / double(kHeatN - 1);
  p.linearization = [kappa, h](const Eigen::VectorXd& v) {
    // kappa * discrete Laplacian on the Dirichlet interior
    Eigen::VectorXd out(v.size());
    const int n = int(v.size());
    for (int i = 0; i < n; ++i) {
      const double left = i > 0 ? v[i - 1] : 0.0;
      const double right = i + 1 < n ? v[i + 1] : 0.0;
      out[i] = kappa * (left - 2.0 * v[i] + right) / (h * h);
    }
    return out;
  };
  p.linearization_dim = kHeatN - 2;
  return p;
}

ParametricProblem make_linear_decay() {
  ParametricProblem p;
  p.theta = Eigen::VectorXd::Constant(1, -1.0);
  auto integrate = [](double theta, double x0) {
    double x = x0;
    const double dt = 0.01;
    for (int k = 0; k < 100; ++k) x += dt * theta * x;  // T = 1
    return x;
  };
  p.solve = [integrate](const Eigen::VectorXd& th) { return scalar_field(integrate(th[0], 1.0)); };
  p.solve_perturbed = [integrate](const Eigen::VectorXd& th, const Eigen::VectorXd& xi) {
    return scalar_field(integrate(th[0], 1.0 + xi[0]));
  };
  p.perturbation_dim = 1;
  p.linearization = [](const Eigen::VectorXd& v) { return Eigen::VectorXd(-1.0 * v); };
  p.linearization_dim = 1;
  return p;
}

ParametricProblem make_builtin_problem(const std::string& id, double theta) {
  if (id == "pitchfork") return make_pitchfork(theta);
  if (id == "resonance" || id == "resonance-responder") return make_resonance(theta);
  if (id == "heat-interior") return make_heat_interior(theta);
  if (id == "linear-decay") return make_linear_decay();
  throw Error("unknown built-in problem '" + id + "'");
}

ParametricProblem load_plugin_problem(const std::string& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw Error("cannot open plugin manifest '" + manifest_path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const nlohmann::json root = nlohmann::json::parse(buffer.str());

  const std::string command = root.at("command").get<std::string>();
  const std::string output = root.at("output").get<std::string>();
  std::vector<double> theta = root.at("theta").get<std::vector<double>>();

  ParametricProblem p;
  p.theta = Eigen::Map<const Eigen::VectorXd>(theta.data(), Eigen::Index(theta.size()));
  p.solve = [command, output](const Eigen::VectorXd& th) {
    std::string cmd = command;
    for (Eigen::Index i = 0; i < th.size(); ++i) {
      const std::string placeholder = "{theta" + std::to_string(i) + "}";
      char value[64];
      std::snprintf(value, sizeof value, "%.17g", th[i]);
      for (std::size_t pos = cmd.find(placeholder); pos != std::string::npos;
           pos = cmd.find(placeholder)) {
        cmd.replace(pos, placeholder.size(), value);
      }
    }
    const int status = std::system(cmd.c_str());
    if (status != 0) throw SolveError("plugin command failed: " + cmd);
    return sfd::read_field(output);
  };
  return p;
}

}  // namespace simjudge::probes
