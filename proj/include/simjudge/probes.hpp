#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "simjudge/audit.hpp"

namespace simjudge::probes {

enum class ProbeKind { continuation, lyapunov, ensemble };
std::string probe_name(ProbeKind p);

struct ProbeReport {
  ProbeKind probe = ProbeKind::continuation;
  bool flagged = false;
  double measured = 0.0;
  double threshold = 0.0;
  std::map<std::string, double> evidence;
  std::vector<std::string> notes;
};

// Contract for a parametric problem the probes can exercise. solve must be
// deterministic for fixed parameters; solve_perturbed is the documented hook
// through which the ensemble probe injects initial/boundary perturbations.
struct ParametricProblem {
  Eigen::VectorXd theta;
  std::function<audit::SolutionField(const Eigen::VectorXd& theta)> solve;
  // Linearized operator at the computed solution (matrix-free); null when the
  // problem has no dynamics to linearize.
  std::function<Eigen::VectorXd(const Eigen::VectorXd& v)> linearization;
  int linearization_dim = 0;
  // Perturbation hook: one entry per perturbable degree of freedom.
  std::function<audit::SolutionField(const Eigen::VectorXd& theta,
                                     const Eigen::VectorXd& data_perturbation)>
      solve_perturbed;
  int perturbation_dim = 0;
};

// Heuristic (1): re-solve at theta(1 +- delta) and compare. Parameters near
// zero move by at least delta_abs_floor. Flags when the relative response
// change exceeds tau, or when a perturbed solve fails.
ProbeReport probe_continuation(const ParametricProblem& p, double delta_rel = 0.05,
                               double delta_abs_floor = 1e-6, double tau = 0.5);

// Heuristic (2): dominant-eigenvalue estimate of the linearization via shifted
// power iteration (shift from a few random operator applications, so spectra
// with a dominant negative eigenvalue converge to the largest real part).
// Applications are matrix-free and cheap, so the default iteration budget is
// generous; an unconverged estimate is itself reported as a flag.
ProbeReport probe_lyapunov(const ParametricProblem& p, int iterations = 5000, double tol = 1e-6,
                           std::uint64_t seed = 0);

// Heuristic (3): N perturbed solves; flags when the coefficient of variation
// of the scalar summary exceeds tau_ens. With a near-zero ensemble mean the
// CV is meaningless, so flagging falls back to stddev > 10 * perturb_eps
// (reported in the evidence).
enum class EnsembleSummary { mean, norm };
ProbeReport probe_ensemble(const ParametricProblem& p, int n_members = 5,
                           double perturb_eps = 1e-3, double tau_ens = 0.1,
                           std::uint64_t seed = 0,
                           EnsembleSummary summary = EnsembleSummary::mean);

// ---- built-in parametric problems -------------------------------------------

// xdot = theta x - x^3 integrated to steady state from x0 = +1e-3.
ParametricProblem make_pitchfork(double theta);

// Algebraic resonance responder y(theta) = 1 / (theta - 1).
ParametricProblem make_resonance(double theta);

// 1-D heat run with parameter kappa; interior-of-S reference problem.
ParametricProblem make_heat_interior(double kappa);

// xdot = -x from x0 = 1, T = 1: linear contraction reference.
ParametricProblem make_linear_decay();

ParametricProblem make_builtin_problem(const std::string& id, double theta);

// External solver plugin: a JSON manifest with fields
//   theta:  [..]                  nominal parameter vector
//   command: "prog --x {theta0}"  shell command; {thetaI} substituted per solve
//   output: "path.sfd"            SFD1 field the command writes
// Plugin problems support the continuation probe (solve-only contract); there
// is no linearization or perturbation hook across the process boundary.
ParametricProblem load_plugin_problem(const std::string& manifest_path);

}  // namespace simjudge::probes
