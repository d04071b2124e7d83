#include "simjudge/audit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace simjudge::audit {

namespace {

constexpr double kMassFloor = 1e-30;

// Kahan-compensated sum so the measurement does not add O(n) rounding noise.
double compensated_sum(const Eigen::ArrayXd& v, const std::vector<double>* weight) {
  double sum = 0.0, c = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double w = weight ? (*weight)[std::size_t(i)] : 1.0;
    const double y = v[i] * w - c;
    const double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
  return sum;
}

}  // namespace

std::size_t SolutionField::expected_size() const {
  std::size_t n = 1;
  for (int s : shape) n *= std::size_t(s);
  return n;
}

double SolutionField::cell_measure() const {
  double m = 1.0;
  for (double h : spacing) m *= h;
  return m;
}

CheckResult check_conservation(const SolutionSeries& series, const std::vector<double>* weight,
                               double threshold) {
  CheckResult result;
  result.id = "conservation";
  result.threshold = threshold;
  if (series.frames.empty()) return result;

  const double cell = series.frames.front().cell_measure();
  const double q0 = compensated_sum(series.frames.front().values, weight) * (weight ? 1.0 : cell);
  const double denom = std::max(std::abs(q0), kMassFloor);
  double worst = 0.0;
  for (const auto& frame : series.frames) {
    const double q = compensated_sum(frame.values, weight) * (weight ? 1.0 : cell);
    worst = std::max(worst, std::abs(q - q0) / denom);
  }
  result.measured = worst;
  result.status = worst < threshold ? CheckStatus::pass : CheckStatus::flag;
  result.evidence["initial_mass"] = q0;
  return result;
}

CheckResult check_bounds(const SolutionField& field, std::optional<double> lower,
                         std::optional<double> upper, double tol) {
  CheckResult result;
  result.id = "bounds";
  result.threshold = tol;
  double worst = 0.0;
  double count = 0.0;
  for (Eigen::Index i = 0; i < field.values.size(); ++i) {
    const double v = field.values[i];
    double excursion = 0.0;
    if (lower && v < *lower - tol) excursion = *lower - v;
    if (upper && v > *upper + tol) excursion = std::max(excursion, v - *upper);
    if (excursion > 0.0) {
      worst = std::max(worst, excursion);
      count += 1.0;
    }
  }
  result.measured = worst;
  result.status = count > 0.0 ? CheckStatus::flag : CheckStatus::pass;
  result.evidence["violating_cells"] = count;
  return result;
}

CheckResult check_monotonicity(const SolutionSeries& series, Functional functional,
                               Direction direction, double tol) {
  CheckResult result;
  result.id = "monotonicity";
  result.threshold = tol;
  std::vector<double> values;
  values.reserve(series.frames.size());
  for (const auto& frame : series.frames) {
    switch (functional) {
      case Functional::max:
        values.push_back(frame.values.maxCoeff());
        break;
      case Functional::min:
        values.push_back(frame.values.minCoeff());
        break;
      case Functional::sum:
        values.push_back(frame.values.sum());
        break;
    }
  }
  double worst = 0.0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    const double step = values[i] - values[i - 1];
    const double violation = direction == Direction::non_increasing ? step : -step;
    worst = std::max(worst, violation);
  }
  result.measured = worst;
  result.status = worst > tol ? CheckStatus::flag : CheckStatus::pass;
  return result;
}

CheckResult check_symmetry(const SolutionField& field, int axis, double tol) {
  CheckResult result;
  result.id = "symmetry";
  result.threshold = tol;
  if (axis < 0 || axis >= int(field.shape.size()))
    throw Error("symmetry axis out of range");

  // Row-major strides.
  const int rank = int(field.shape.size());
  std::vector<std::size_t> strides(rank, 1);
  for (int a = rank - 2; a >= 0; --a)
    strides[a] = strides[a + 1] * std::size_t(field.shape[a + 1]);

  const double scale = std::max(field.values.abs().maxCoeff(), kMassFloor);
  double worst = 0.0;
  std::vector<int> index(rank, 0);
  const std::size_t total = field.expected_size();
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rem = flat;
    for (int a = 0; a < rank; ++a) {
      index[a] = int(rem / strides[a]);
      rem %= strides[a];
    }
    const int mirrored = field.shape[axis] - 1 - index[axis];
    const std::size_t mflat = flat + (std::size_t(mirrored) - std::size_t(index[axis])) * strides[axis];
    worst = std::max(worst, std::abs(field.values[Eigen::Index(flat)] -
                                     field.values[Eigen::Index(mflat)]));
  }
  result.measured = worst / scale;
  result.status = result.measured > tol ? CheckStatus::flag : CheckStatus::pass;
  return result;
}

CheckResult check_entropy(const SolutionSeries& series, double tol) {
  CheckResult result;
  result.id = "entropy";
  result.threshold = tol;
  double worst = 0.0;
  double previous = 0.0;
  for (std::size_t k = 0; k < series.frames.size(); ++k) {
    const auto& frame = series.frames[k];
    const double eta = (frame.values * frame.values * 0.5).sum() * frame.cell_measure();
    if (k > 0) worst = std::max(worst, eta - previous);
    previous = eta;
  }
  result.measured = worst;
  result.status = worst > tol ? CheckStatus::flag : CheckStatus::pass;
  return result;
}

CheckResult check_residual(const ResidualEvaluator& evaluator, double tolerance_eps) {
  const ResidualEstimate est = evaluator();
  CheckResult result;
  result.id = "residual";
  result.threshold = tolerance_eps;
  result.measured = est.residual_algebraic + est.residual_defect;
  result.evidence["bound_B"] = est.bound_B;
  result.evidence["residual_algebraic"] = est.residual_algebraic;
  result.evidence["residual_defect"] = est.residual_defect;
  result.status = est.bound_B <= tolerance_eps ? CheckStatus::pass : CheckStatus::flag;
  return result;
}

CheckResult check_finite(const SolutionField& field) {
  CheckResult result;
  result.id = "finite";
  result.threshold = 0.0;
  const bool ok = field.finite();
  result.measured = ok ? 0.0 : 1.0;
  result.status = ok ? CheckStatus::pass : CheckStatus::flag;
  return result;
}

CheckResult check_finite_series(const SolutionSeries& series) {
  CheckResult result;
  result.id = "finite";
  result.threshold = 0.0;
  bool ok = true;
  for (const auto& frame : series.frames) ok = ok && frame.finite();
  if (series.metadata.count("nan_truncated")) ok = false;
  result.measured = ok ? 0.0 : 1.0;
  result.status = ok ? CheckStatus::pass : CheckStatus::flag;
  return result;
}

// ---- residual evaluators ----------------------------------------------------

ResidualEvaluator make_poisson_residual_evaluator(
    const SolutionField& field, const std::function<double(double, double)>& forcing) {
  if (field.shape.size() != 2) throw Error("poisson residual evaluator needs a 2-D field");
  SolutionField u = field;  // captured by value; audit never mutates inputs
  std::function<double(double, double)> f = forcing;
  return [u, f]() {
    const int n = u.shape[0];
    const double h = u.spacing[0];
    auto at = [&](int i, int j) { return u.values[Eigen::Index(i) * n + j]; };

    // Algebraic residual of the 5-point system and truncation defect against
    // a fourth-order stencil (second-order fallback one ring from the edge).
    double sum2_alg = 0.0, sum2_defect = 0.0;
    for (int i = 1; i + 1 < n; ++i) {
      for (int j = 1; j + 1 < n; ++j) {
        const double x = i * h, y = j * h;
        const double lap2 =
            (at(i - 1, j) + at(i + 1, j) + at(i, j - 1) + at(i, j + 1) - 4.0 * at(i, j)) /
            (h * h);
        const double r_alg = f(x, y) + lap2;
        sum2_alg += r_alg * r_alg;

        double lap4 = lap2;
        if (i >= 2 && i + 2 < n && j >= 2 && j + 2 < n) {
          const double dxx = (-at(i - 2, j) + 16.0 * at(i - 1, j) - 30.0 * at(i, j) +
                              16.0 * at(i + 1, j) - at(i + 2, j)) /
                             (12.0 * h * h);
          const double dyy = (-at(i, j - 2) + 16.0 * at(i, j - 1) - 30.0 * at(i, j) +
                              16.0 * at(i, j + 1) - at(i, j + 2)) /
                             (12.0 * h * h);
          lap4 = dxx + dyy;
        }
        const double r4 = f(x, y) + lap4;
        sum2_defect += r4 * r4;
      }
    }
    ResidualEstimate est;
    est.residual_algebraic = std::sqrt(sum2_alg * h * h);
    est.residual_defect = std::sqrt(sum2_defect * h * h);
    constexpr double kStabilityConstant = 0.125;  // 1 / lambda_min lower bound
    est.bound_B = kStabilityConstant * (est.residual_algebraic + est.residual_defect);
    return est;
  };
}

ResidualEvaluator make_heat_residual_evaluator(const SolutionSeries& series, double kappa,
                                               bool periodic) {
  SolutionSeries s = series;
  return [s, kappa, periodic]() {
    ResidualEstimate est;
    if (s.frames.size() < 3) return est;
    const int n = int(s.frames.front().values.size());
    const double h = s.frames.front().spacing[0];
    const double t_end = s.times.back();

    double worst = 0.0;
    for (std::size_t k = 1; k + 1 < s.frames.size(); ++k) {
      const double dt_c = s.times[k + 1] - s.times[k - 1];
      const auto& um = s.frames[k - 1].values;
      const auto& u0 = s.frames[k].values;
      const auto& up = s.frames[k + 1].values;
      double sum2 = 0.0;
      auto at = [&](const Eigen::ArrayXd& v, int i) {
        if (periodic) return v[((i % n) + n) % n];
        return v[i];
      };
      const int lo = periodic ? 0 : 2;
      const int hi = periodic ? n : n - 2;
      for (int i = lo; i < hi; ++i) {
        const double ut = (at(up, i) - at(um, i)) / dt_c;
        double uxx;
        if (periodic || (i >= 2 && i + 2 < n)) {
          uxx = (-at(u0, i - 2) + 16.0 * at(u0, i - 1) - 30.0 * at(u0, i) +
                 16.0 * at(u0, i + 1) - at(u0, i + 2)) /
                (12.0 * h * h);
        } else {
          uxx = (at(u0, i - 1) - 2.0 * at(u0, i) + at(u0, i + 1)) / (h * h);
        }
        const double r = ut - kappa * uxx;
        sum2 += r * r;
      }
      worst = std::max(worst, std::sqrt(sum2 * h));
    }
    est.residual_defect = worst;
    est.bound_B = t_end * worst;
    return est;
  };
}

// ---- aggregate ---------------------------------------------------------------

bool Declarations::any() const {
  return conservation_threshold || bounds_lower || bounds_upper || monotonicity_functional ||
         symmetry_axis || entropy || residual;
}

AuditReport audit_solution(const SolutionSeries& series, const Declarations& decl) {
  AuditReport report;
  if (!decl.any()) {
    report.notes.push_back("no invariants declared");
    return report;
  }

  report.checks.push_back(check_finite_series(series));
  if (decl.conservation_threshold)
    report.checks.push_back(check_conservation(series, nullptr, *decl.conservation_threshold));
  if (decl.bounds_lower || decl.bounds_upper) {
    CheckResult worst;
    worst.id = "bounds";
    worst.threshold = decl.bounds_tol;
    double count = 0.0;
    for (const auto& frame : series.frames) {
      CheckResult r = check_bounds(frame, decl.bounds_lower, decl.bounds_upper, decl.bounds_tol);
      count += r.evidence["violating_cells"];
      if (r.measured > worst.measured) worst.measured = r.measured;
      if (r.flagged()) worst.status = CheckStatus::flag;
    }
    worst.evidence["violating_cells"] = count;
    report.checks.push_back(worst);
  }
  if (decl.monotonicity_functional)
    report.checks.push_back(check_monotonicity(series, *decl.monotonicity_functional,
                                               decl.monotonicity_direction,
                                               decl.monotonicity_tol));
  if (decl.symmetry_axis)
    report.checks.push_back(
        check_symmetry(series.frames.back(), *decl.symmetry_axis, decl.symmetry_tol));
  if (decl.entropy) report.checks.push_back(check_entropy(series, decl.entropy_tol));
  if (decl.residual)
    report.checks.push_back(check_residual(*decl.residual, decl.residual_tolerance));

  for (const auto& check : report.checks) {
    if (check.flagged()) report.overall = CheckStatus::flag;
  }
  return report;
}

AuditReport audit_solution(const SolutionField& field, const Declarations& decl) {
  SolutionSeries series;
  series.times = {0.0};
  series.frames = {field};
  return audit_solution(series, decl);
}

Declarations merge_declared_invariants(Declarations decl,
                                       const std::vector<InvariantEntry>& entries) {
  for (const auto& entry : entries) {
    const char* begin = entry.value.c_str();
    char* end = nullptr;
    const double number = std::strtod(begin, &end);
    const bool has_number = end != begin;
    if (entry.key == "conserved" && !decl.conservation_threshold) {
      decl.conservation_threshold = 1e-12;
    } else if (entry.key == "lower_bound" && !decl.bounds_lower && has_number) {
      decl.bounds_lower = number;
    } else if (entry.key == "upper_bound" && !decl.bounds_upper && has_number) {
      decl.bounds_upper = number;
    } else if (entry.key == "monotone_max" && !decl.monotonicity_functional) {
      decl.monotonicity_functional = Functional::max;
      decl.monotonicity_direction = Direction::non_increasing;
    } else if (entry.key == "monotone_min" && !decl.monotonicity_functional) {
      decl.monotonicity_functional = Functional::min;
      decl.monotonicity_direction = Direction::non_decreasing;
    } else if (entry.key == "symmetric_axis" && !decl.symmetry_axis && has_number) {
      decl.symmetry_axis = int(number);
    } else if (entry.key == "entropy_nonincreasing") {
      decl.entropy = true;
    }
  }
  return decl;
}

}  // namespace simjudge::audit
