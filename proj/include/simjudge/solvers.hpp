#pragma once

#include <Eigen/Core>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "simjudge/audit.hpp"

namespace simjudge::solvers {

enum class Scheme {
  ftcs_explicit,
  implicit_euler,
  crank_nicolson,
  bdf2,
  rk4_explicit,
  lax_friedrichs,
  direct_elliptic,
};

std::string scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name);

struct SchemeDescriptor {
  Scheme time_scheme = Scheme::implicit_euler;
  double dt = 0.0;
  double h = 0.0;
  std::map<std::string, double> extra;  // e.g. kappa, stiffness_ratio
};

// ---- Poisson ----------------------------------------------------------------

// 5-point finite differences for -lap(u) = f on [0,1]^2, n x n grid including
// the Dirichlet boundary; direct sparse solve refined to residual <= 1e-10.
audit::SolutionField solve_poisson_2d(const std::function<double(double, double)>& forcing,
                                      const std::function<double(double, double)>& boundary,
                                      int n);

// ---- Heat -------------------------------------------------------------------

enum class HeatBc { dirichlet, periodic };

struct HeatResult {
  audit::SolutionSeries series;
  double cfl_ratio = 0.0;  // kappa dt / h^2, recorded as Gate 3 evidence
  bool nan_truncated = false;
};

// Grid on [0,1]: n points, h = 1/(n-1) for Dirichlet (endpoints held fixed),
// h = 1/n for periodic. Frames recorded every `record_every` steps plus the
// final state; a non-finite frame truncates the series with a marker.
HeatResult solve_heat_1d(const Eigen::ArrayXd& ic, HeatBc bc, double kappa, Scheme scheme,
                         double dt, double t_end, int record_every = 1);

// ---- Stiff linear system ------------------------------------------------------

struct StiffResult {
  audit::SolutionSeries series;
  double stiffness_ratio = 0.0;
  bool nan_truncated = false;
};

// xdot = diag(lambda_fast, lambda_slow) x, both negative.
StiffResult solve_stiff_linear(double lambda_fast, double lambda_slow,
                               const Eigen::Vector2d& x0, Scheme scheme, double dt,
                               double t_end);

// ---- Burgers ------------------------------------------------------------------

// Lax-Friedrichs for u_t + (u^2/2)_x = 0, periodic on [0,1], h = 1/n.
// Throws CFLViolationError when max|u0| dt / h > 1.
audit::SolutionSeries solve_burgers_lf(const Eigen::ArrayXd& ic, double dt, double t_end,
                                       int record_every = 1);

// ---- Pitchfork normal form ------------------------------------------------------

// Explicit integration of xdot = theta x - x^3; requires dt <= 0.1/max(1,|theta|).
double solve_pitchfork(double theta, double x0, double dt, double t_end);

// ---- Convergence-order measurement ----------------------------------------------

struct ConvergenceResult {
  double order = 0.0;
  bool degenerate = false;  // flat error data; the fit is meaningless
  std::vector<double> hs;
  std::vector<double> errors;
};

// Least-squares slope of log(error) against log(h).
ConvergenceResult fit_order(const std::vector<double>& hs, const std::vector<double>& errors);

// Manufactured u* = sin(pi x) sin(pi y), f = 2 pi^2 u*.
ConvergenceResult measure_convergence_order_poisson(const std::vector<int>& grid_sizes);

// Time-step refinement of the manufactured decaying mode at fixed n.
ConvergenceResult measure_convergence_order_heat_dt(const std::vector<double>& dts, int n,
                                                    double kappa, double t_end, Scheme scheme);

// Discrete L2 error between a field and an exact function on its grid.
double grid_error_l2(const audit::SolutionField& field,
                     const std::function<double(double, double)>& exact);

}  // namespace simjudge::solvers
