#include "simjudge/solvers.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <memory>

namespace simjudge::solvers {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

struct SchemeRow {
  Scheme scheme;
  const char* name;
};

constexpr SchemeRow kSchemes[] = {
    {Scheme::ftcs_explicit, "ftcs-explicit"},   {Scheme::implicit_euler, "implicit-euler"},
    {Scheme::crank_nicolson, "crank-nicolson"}, {Scheme::bdf2, "bdf2"},
    {Scheme::rk4_explicit, "rk4-explicit"},     {Scheme::lax_friedrichs, "lax-friedrichs"},
    {Scheme::direct_elliptic, "direct-elliptic"},
};

}  // namespace

std::string scheme_name(Scheme s) {
  for (const auto& row : kSchemes)
    if (row.scheme == s) return row.name;
  throw Error("invalid scheme");
}

Scheme scheme_from_name(const std::string& name) {
  for (const auto& row : kSchemes)
    if (name == row.name) return row.scheme;
  throw Error("unknown scheme '" + name + "'");
}

// ---- Poisson ----------------------------------------------------------------

audit::SolutionField solve_poisson_2d(const std::function<double(double, double)>& forcing,
                                      const std::function<double(double, double)>& boundary,
                                      int n) {
  if (n < 3) throw Error("poisson grid needs n >= 3");
  const double h = 1.0 / double(n - 1);
  const int m = n - 2;  // interior points per axis
  const auto unknown = [m](int i, int j) { return (i - 1) * m + (j - 1); };

  std::vector<Triplet> triplets;
  triplets.reserve(std::size_t(5) * m * m);
  Eigen::VectorXd rhs(m * m);
  for (int i = 1; i <= m; ++i) {
    for (int j = 1; j <= m; ++j) {
      const int row = unknown(i, j);
      const double x = i * h, y = j * h;
      triplets.emplace_back(row, row, 4.0);
      double b = forcing(x, y) * h * h;
      auto couple = [&](int ii, int jj) {
        if (ii == 0 || ii == n - 1 || jj == 0 || jj == n - 1) {
          b += boundary(ii * h, jj * h);
        } else {
          triplets.emplace_back(row, unknown(ii, jj), -1.0);
        }
      };
      couple(i - 1, j);
      couple(i + 1, j);
      couple(i, j - 1);
      couple(i, j + 1);
      rhs[row] = b;
    }
  }

  SpMat A(m * m, m * m);
  A.setFromTriplets(triplets.begin(), triplets.end());
  Eigen::SparseLU<SpMat> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success) throw SingularSystemError("poisson system factorization failed");
  Eigen::VectorXd u = lu.solve(rhs);

  // One step of iterative refinement keeps the algebraic residual <= 1e-10.
  for (int pass = 0; pass < 3; ++pass) {
    const Eigen::VectorXd r = rhs - A * u;
    if (r.lpNorm<Eigen::Infinity>() <= 1e-12 * std::max(1.0, rhs.lpNorm<Eigen::Infinity>()))
      break;
    u += lu.solve(r);
  }

  audit::SolutionField field;
  field.shape = {n, n};
  field.spacing = {h, h};
  field.values = Eigen::ArrayXd::Zero(Eigen::Index(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double x = i * h, y = j * h;
      if (i == 0 || i == n - 1 || j == 0 || j == n - 1) {
        field.values[Eigen::Index(i) * n + j] = boundary(x, y);
      } else {
        field.values[Eigen::Index(i) * n + j] = u[unknown(i, j)];
      }
    }
  }
  return field;
}

// ---- Heat -------------------------------------------------------------------

namespace {

audit::SolutionField make_frame_1d(const Eigen::ArrayXd& values, double h) {
  audit::SolutionField f;
  f.shape = {int(values.size())};
  f.spacing = {h};
  f.values = values;
  return f;
}

// Factorized (I - c A) with A the 1-D Laplacian stencil (Dirichlet interior or
// periodic circulant).
class HeatStepMatrix {
 public:
  HeatStepMatrix(int n, double c, HeatBc bc, bool crank_rhs) : n_(n), c_(c), bc_(bc), crank_rhs_(crank_rhs) {
    std::vector<Triplet> t;
    const int size = bc == HeatBc::dirichlet ? n - 2 : n;
    for (int i = 0; i < size; ++i) {
      t.emplace_back(i, i, 1.0 + 2.0 * c);
      const int left = i - 1, right = i + 1;
      if (bc == HeatBc::periodic) {
        t.emplace_back(i, (left + size) % size, -c);
        t.emplace_back(i, right % size, -c);
      } else {
        if (left >= 0) t.emplace_back(i, left, -c);
        if (right < size) t.emplace_back(i, right, -c);
      }
    }
    SpMat A(size, size);
    A.setFromTriplets(t.begin(), t.end());
    lu_.compute(A);
    if (lu_.info() != Eigen::Success) throw SingularSystemError("heat step factorization failed");
  }

  // Advances u in place; u has n entries including boundary for Dirichlet.
  void step(Eigen::ArrayXd& u) const {
    const int size = bc_ == HeatBc::dirichlet ? n_ - 2 : n_;
    Eigen::VectorXd rhs(size);
    auto val = [&](int i) {
      if (bc_ == HeatBc::periodic) return u[((i % n_) + n_) % n_];
      return u[i];
    };
    const int offset = bc_ == HeatBc::dirichlet ? 1 : 0;
    for (int i = 0; i < size; ++i) {
      const int gi = i + offset;
      double b = u[gi];
      if (crank_rhs_) b += c_ * (val(gi - 1) - 2.0 * u[gi] + val(gi + 1));
      rhs[i] = b;
    }
    if (bc_ == HeatBc::dirichlet) {
      // Known boundary values moved from the left-hand side; the old-time
      // boundary contribution is already in the Crank-Nicolson right side.
      rhs[0] += c_ * u[0];
      rhs[size - 1] += c_ * u[n_ - 1];
    }
    const Eigen::VectorXd x = lu_.solve(rhs);
    for (int i = 0; i < size; ++i) u[i + offset] = x[i];
  }

 private:
  int n_;
  double c_;
  HeatBc bc_;
  bool crank_rhs_;
  Eigen::SparseLU<SpMat> lu_;
};

}  // namespace

HeatResult solve_heat_1d(const Eigen::ArrayXd& ic, HeatBc bc, double kappa, Scheme scheme,
                         double dt, double t_end, int record_every) {
  if (ic.size() < 3) throw Error("heat grid needs >= 3 points");
  if (dt <= 0.0 || t_end <= 0.0) throw Error("dt and t_end must be positive");
  const int n = int(ic.size());
  const double h = bc == HeatBc::dirichlet ? 1.0 / double(n - 1) : 1.0 / double(n);
  const double ratio = kappa * dt / (h * h);

  HeatResult result;
  result.cfl_ratio = ratio;
  result.series.metadata["scheme"] = scheme_name(scheme);
  result.series.metadata["cfl_ratio"] = std::to_string(ratio);

  Eigen::ArrayXd u = ic;
  result.series.times.push_back(0.0);
  result.series.frames.push_back(make_frame_1d(u, h));

  std::unique_ptr<HeatStepMatrix> implicit_step;
  if (scheme == Scheme::implicit_euler) {
    implicit_step = std::make_unique<HeatStepMatrix>(n, ratio, bc, false);
  } else if (scheme == Scheme::crank_nicolson) {
    implicit_step = std::make_unique<HeatStepMatrix>(n, 0.5 * ratio, bc, true);
  } else if (scheme != Scheme::ftcs_explicit) {
    throw Error("heat solver supports ftcs-explicit, implicit-euler, crank-nicolson");
  }

  const long steps = std::lround(t_end / dt);
  Eigen::ArrayXd flux(n);
  for (long k = 1; k <= steps; ++k) {
    if (scheme == Scheme::ftcs_explicit) {
      // Flux form: each flux enters two cells with opposite signs, so the
      // discrete sum telescopes (periodic mass stays at rounding level).
      if (bc == HeatBc::periodic) {
        for (int i = 0; i < n; ++i) flux[i] = u[(i + 1) % n] - u[i];
        Eigen::ArrayXd next(n);
        for (int i = 0; i < n; ++i) next[i] = u[i] + ratio * (flux[i] - flux[(i - 1 + n) % n]);
        u = next;
      } else {
        Eigen::ArrayXd next = u;
        for (int i = 0; i + 1 < n; ++i) flux[i] = u[i + 1] - u[i];
        for (int i = 1; i + 1 < n; ++i) next[i] = u[i] + ratio * (flux[i] - flux[i - 1]);
        u = next;
      }
    } else {
      implicit_step->step(u);
    }

    if (!u.isFinite().all()) {
      result.nan_truncated = true;
      result.series.metadata["nan_truncated"] = "true";
      break;
    }
    if (k % record_every == 0 || k == steps) {
      result.series.times.push_back(double(k) * dt);
      result.series.frames.push_back(make_frame_1d(u, h));
    }
  }
  return result;
}

// ---- Stiff linear -------------------------------------------------------------

StiffResult solve_stiff_linear(double lambda_fast, double lambda_slow,
                               const Eigen::Vector2d& x0, Scheme scheme, double dt,
                               double t_end) {
  if (!(lambda_fast < 0.0 && lambda_slow < 0.0))
    throw Error("stiff solver expects negative eigenvalues");
  if (dt <= 0.0 || t_end <= 0.0) throw Error("dt and t_end must be positive");

  StiffResult result;
  result.stiffness_ratio = std::abs(lambda_fast / lambda_slow);
  result.series.metadata["scheme"] = scheme_name(scheme);
  result.series.metadata["stiffness_ratio"] = std::to_string(result.stiffness_ratio);

  const Eigen::Vector2d lambda(lambda_fast, lambda_slow);
  Eigen::Vector2d x = x0;
  Eigen::Vector2d x_prev = x0;

  auto push = [&](double t, const Eigen::Vector2d& v) {
    audit::SolutionField f;
    f.shape = {2};
    f.spacing = {1.0};
    f.values = Eigen::ArrayXd(2);
    f.values << v[0], v[1];
    result.series.times.push_back(t);
    result.series.frames.push_back(std::move(f));
  };
  push(0.0, x);

  const long steps = std::lround(t_end / dt);
  for (long k = 1; k <= steps; ++k) {
    Eigen::Vector2d next;
    switch (scheme) {
      case Scheme::rk4_explicit: {
        // Classical RK4 on the diagonal system: x * R(lambda dt) with
        // R(z) = 1 + z + z^2/2 + z^3/6 + z^4/24.
        for (int c = 0; c < 2; ++c) {
          const double z = lambda[c] * dt;
          const double r = 1.0 + z + z * z / 2.0 + z * z * z / 6.0 + z * z * z * z / 24.0;
          next[c] = x[c] * r;
        }
        break;
      }
      case Scheme::implicit_euler:
        for (int c = 0; c < 2; ++c) next[c] = x[c] / (1.0 - lambda[c] * dt);
        break;
      case Scheme::bdf2:
        if (k == 1) {
          for (int c = 0; c < 2; ++c) next[c] = x[c] / (1.0 - lambda[c] * dt);
        } else {
          for (int c = 0; c < 2; ++c)
            next[c] = (4.0 * x[c] - x_prev[c]) / (3.0 - 2.0 * lambda[c] * dt);
        }
        break;
      default:
        throw Error("stiff solver supports rk4-explicit, implicit-euler, bdf2");
    }
    x_prev = x;
    x = next;
    if (!x.allFinite()) {
      result.nan_truncated = true;
      result.series.metadata["nan_truncated"] = "true";
      break;
    }
    push(double(k) * dt, x);
  }
  return result;
}

// ---- Burgers --------------------------------------------------------------------

audit::SolutionSeries solve_burgers_lf(const Eigen::ArrayXd& ic, double dt, double t_end,
                                       int record_every) {
  const int n = int(ic.size());
  if (n < 3) throw Error("burgers grid needs >= 3 points");
  const double h = 1.0 / double(n);
  const double cfl = ic.abs().maxCoeff() * dt / h;
  if (cfl > 1.0) throw CFLViolationError(cfl, 1.0);

  audit::SolutionSeries series;
  series.metadata["scheme"] = scheme_name(Scheme::lax_friedrichs);
  Eigen::ArrayXd u = ic;
  series.times.push_back(0.0);
  series.frames.push_back(make_frame_1d(u, h));

  const long steps = std::lround(t_end / dt);
  Eigen::ArrayXd next(n);
  for (long k = 1; k <= steps; ++k) {
    for (int i = 0; i < n; ++i) {
      const double ul = u[(i - 1 + n) % n];
      const double ur = u[(i + 1) % n];
      const double fl = 0.5 * ul * ul;
      const double fr = 0.5 * ur * ur;
      next[i] = 0.5 * (ul + ur) - dt / (2.0 * h) * (fr - fl);
    }
    u = next;
    if (k % record_every == 0 || k == steps) {
      series.times.push_back(double(k) * dt);
      series.frames.push_back(make_frame_1d(u, h));
    }
  }
  return series;
}

// ---- Pitchfork --------------------------------------------------------------------

double solve_pitchfork(double theta, double x0, double dt, double t_end) {
  if (dt > 0.1 / std::max(1.0, std::abs(theta)))
    throw Error("pitchfork dt too large for stability");
  double x = x0;
  const long steps = std::lround(t_end / dt);
  for (long k = 0; k < steps; ++k) {
    x += dt * (theta * x - x * x * x);
  }
  return x;
}

// ---- Convergence order ----------------------------------------------------------

ConvergenceResult fit_order(const std::vector<double>& hs, const std::vector<double>& errors) {
  if (hs.size() != errors.size() || hs.size() < 3)
    throw Error("order fit needs >= 3 (h, error) samples");
  ConvergenceResult result;
  result.hs = hs;
  result.errors = errors;

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = double(hs.size());
  for (std::size_t i = 0; i < hs.size(); ++i) {
    const double x = std::log(hs[i]);
    const double y = std::log(std::max(errors[i], 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  result.order = (n * sxy - sx * sy) / (n * sxx - sx * sx);

  const double emax = *std::max_element(errors.begin(), errors.end());
  const double emin = *std::min_element(errors.begin(), errors.end());
  result.degenerate = emax <= emin * (1.0 + 1e-9);
  if (result.degenerate) result.order = 0.0;
  return result;
}

double grid_error_l2(const audit::SolutionField& field,
                     const std::function<double(double, double)>& exact) {
  const int n = field.shape[0];
  const double h = field.spacing[0];
  double sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double d = field.values[Eigen::Index(i) * n + j] - exact(i * h, j * h);
      sum2 += d * d;
    }
  }
  return std::sqrt(sum2 * h * h);
}

ConvergenceResult measure_convergence_order_poisson(const std::vector<int>& grid_sizes) {
  const double pi = std::acos(-1.0);
  auto exact = [pi](double x, double y) { return std::sin(pi * x) * std::sin(pi * y); };
  auto forcing = [pi, exact](double x, double y) { return 2.0 * pi * pi * exact(x, y); };
  auto zero = [](double, double) { return 0.0; };

  std::vector<double> hs, errors;
  for (int n : grid_sizes) {
    const auto field = solve_poisson_2d(forcing, zero, n);
    hs.push_back(field.spacing[0]);
    errors.push_back(grid_error_l2(field, exact));
  }
  return fit_order(hs, errors);
}

ConvergenceResult measure_convergence_order_heat_dt(const std::vector<double>& dts, int n,
                                                    double kappa, double t_end, Scheme scheme) {
  const double pi = std::acos(-1.0);
  Eigen::ArrayXd ic(n);
  const double h = 1.0 / double(n - 1);
  for (int i = 0; i < n; ++i) ic[i] = std::sin(pi * i * h);

  // The sine mode diagonalizes the discrete Laplacian exactly, so comparing
  // against the semi-discrete decay exp(kappa lambda_h t) isolates the time
  // discretization error from the fixed spatial error floor.
  const double lambda_h = -(4.0 / (h * h)) * std::pow(std::sin(pi * h / 2.0), 2);

  std::vector<double> hs, errors;
  for (double dt : dts) {
    const auto run = solve_heat_1d(ic, HeatBc::dirichlet, kappa, scheme, dt, t_end,
                                   std::max(1, int(std::lround(t_end / dt))));
    const auto& last = run.series.frames.back().values;
    // Evaluate the reference at the time actually reached (t_end need not be
    // an exact multiple of dt).
    const double decay = std::exp(kappa * lambda_h * run.series.times.back());
    double sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double d = last[i] - decay * std::sin(pi * i * h);
      sum2 += d * d;
    }
    hs.push_back(dt);
    errors.push_back(std::sqrt(sum2 * h));
  }
  return fit_order(hs, errors);
}

}  // namespace simjudge::solvers
