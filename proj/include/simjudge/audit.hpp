#pragma once

#include <Eigen/Core>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "simjudge/errors.hpp"

namespace simjudge::audit {

struct SolutionField {
  std::vector<int> shape;
  std::vector<double> spacing;  // per-axis h
  Eigen::ArrayXd values;        // flat, row-major
  std::map<std::string, std::string> metadata;

  std::size_t expected_size() const;
  double cell_measure() const;  // product of spacings
  bool finite() const { return values.isFinite().all(); }
};

struct SolutionSeries {
  std::vector<double> times;  // strictly increasing
  std::vector<SolutionField> frames;
  std::map<std::string, std::string> metadata;
};

enum class CheckStatus { pass, flag };

struct CheckResult {
  std::string id;
  CheckStatus status = CheckStatus::pass;
  double measured = 0.0;
  double threshold = 0.0;
  std::map<std::string, double> evidence;

  bool flagged() const { return status == CheckStatus::flag; }
};

struct AuditReport {
  std::vector<CheckResult> checks;
  CheckStatus overall = CheckStatus::pass;
  std::vector<std::string> notes;

  bool passed() const { return overall == CheckStatus::pass; }
};

// ---- individual checks -----------------------------------------------------

// Relative drift of the weighted sum Q(t) against Q(0); the denominator is
// floored at 1e-30 for zero-mass fields. Default weight: cell measure.
CheckResult check_conservation(const SolutionSeries& series,
                               const std::vector<double>* weight = nullptr,
                               double threshold = 1e-12);

CheckResult check_bounds(const SolutionField& field, std::optional<double> lower,
                         std::optional<double> upper, double tol);

enum class Functional { max, min, sum };
enum class Direction { non_increasing, non_decreasing };

CheckResult check_monotonicity(const SolutionSeries& series, Functional functional,
                               Direction direction, double tol);

// Mirror symmetry about the midpoint of the given axis, relative to max|u|.
CheckResult check_symmetry(const SolutionField& field, int axis, double tol);

// Discrete square entropy sum eta(u) * h with eta(u) = u^2/2, non-increasing.
CheckResult check_entropy(const SolutionSeries& series, double tol);

// Residual evaluator contract: fills the algebraic residual norm, the
// truncation-defect norm, and the certified bound B for a computed solution.
struct ResidualEstimate {
  double residual_algebraic = 0.0;
  double residual_defect = 0.0;
  double bound_B = 0.0;
};
using ResidualEvaluator = std::function<ResidualEstimate()>;

// measured = total residual norm; pass iff bound_B <= tolerance_eps.
CheckResult check_residual(const ResidualEvaluator& evaluator, double tolerance_eps);

CheckResult check_finite(const SolutionField& field);
CheckResult check_finite_series(const SolutionSeries& series);

// ---- shipped residual evaluators -------------------------------------------

// 5-point Poisson on the unit square: -lap(u) = f with Dirichlet data baked
// into the field. The bound uses B = C_stab * (||r_alg|| + ||r_defect||) with
// the rigorous constant C_stab = 1/8 (the discrete Dirichlet Laplacian on the
// unit square has smallest eigenvalue (8/h^2) sin^2(pi h / 2) >= 8 for any
// 0 < h < 1, by Jordan's inequality). The defect term is the residual in a
// fourth-order stencil, which captures the discretization error of the
// second-order solution.
ResidualEvaluator make_poisson_residual_evaluator(
    const SolutionField& field, const std::function<double(double, double)>& forcing);

// Heat equation series u_t = kappa u_xx: defect via central time differences
// and fourth-order space; B = T * max_t ||defect||, valid by Duhamel plus the
// contractivity of the heat semigroup (exact initial data assumed).
ResidualEvaluator make_heat_residual_evaluator(const SolutionSeries& series, double kappa,
                                               bool periodic);

// ---- aggregate --------------------------------------------------------------

struct Declarations {
  std::optional<double> conservation_threshold;
  std::optional<double> bounds_lower;
  std::optional<double> bounds_upper;
  double bounds_tol = 1e-12;
  std::optional<Functional> monotonicity_functional;
  Direction monotonicity_direction = Direction::non_increasing;
  double monotonicity_tol = 1e-12;
  std::optional<int> symmetry_axis;
  double symmetry_tol = 1e-10;
  bool entropy = false;
  double entropy_tol = 1e-12;
  std::optional<ResidualEvaluator> residual;
  double residual_tolerance = 0.0;

  bool any() const;
};

// Runs every declared check in fixed order; never mutates inputs. A field is
// treated as a one-frame series for the series checks.
AuditReport audit_solution(const SolutionSeries& series, const Declarations& decl);
AuditReport audit_solution(const SolutionField& field, const Declarations& decl);

// Fills unset declarations from the spec's `## Invariants` extension section
// (keys: conserved, lower_bound, upper_bound, monotone_max, monotone_min,
// symmetric_axis, entropy_nonincreasing). Explicit declarations win.
struct InvariantEntry {
  std::string key;
  std::string value;
};
Declarations merge_declared_invariants(Declarations decl,
                                       const std::vector<InvariantEntry>& entries);

}  // namespace simjudge::audit
