#include <doctest.h>

#include <cmath>

#include "simjudge/solvers.hpp"

using namespace simjudge;
using solvers::Scheme;

namespace {
const double kPi = std::acos(-1.0);
}

// ---- Poisson -------------------------------------------------------------------

TEST_CASE("poisson: zero forcing with zero boundary gives the zero field") {
  auto zero = [](double, double) { return 0.0; };
  const auto field = solvers::solve_poisson_2d(zero, zero, 33);
  CHECK(field.values.abs().maxCoeff() <= 1e-12);
}

TEST_CASE("poisson: constant boundary with zero forcing gives the constant") {
  auto zero = [](double, double) { return 0.0; };
  auto one = [](double, double) { return 1.0; };
  const auto field = solvers::solve_poisson_2d(zero, one, 33);
  CHECK((field.values - 1.0).abs().maxCoeff() <= 1e-10);
}

TEST_CASE("poisson: manufactured solution error below 1e-4 at n=128") {
  auto exact = [](double x, double y) { return std::sin(kPi * x) * std::sin(kPi * y); };
  auto forcing = [exact](double x, double y) { return 2.0 * kPi * kPi * exact(x, y); };
  auto zero = [](double, double) { return 0.0; };
  const auto field = solvers::solve_poisson_2d(forcing, zero, 128);
  const double err = solvers::grid_error_l2(field, exact);
  CHECK(err < 1e-4);
  CHECK(err > 1e-6);  // second order, not spectral: the error is real
}

TEST_CASE("poisson: convergence order is two") {
  const auto result = solvers::measure_convergence_order_poisson({16, 32, 64, 128});
  CHECK_FALSE(result.degenerate);
  CHECK(result.order > 1.9);
  CHECK(result.order < 2.1);
}

// ---- Heat -----------------------------------------------------------------------

TEST_CASE("heat: FTCS at ratio 0.4 agrees with implicit Euler at small dt") {
  const int n = 65;
  Eigen::ArrayXd ic(n);
  const double h = 1.0 / (n - 1);
  for (int i = 0; i < n; ++i) ic[i] = std::sin(kPi * i * h);
  const double t_end = 0.01;

  const double dt_ftcs = 0.4 * h * h;
  const auto ftcs = solvers::solve_heat_1d(ic, solvers::HeatBc::dirichlet, 1.0,
                                           Scheme::ftcs_explicit, dt_ftcs, t_end, 1 << 20);
  const auto implicit = solvers::solve_heat_1d(ic, solvers::HeatBc::dirichlet, 1.0,
                                               Scheme::implicit_euler, 1e-6, t_end, 1 << 20);
  const double diff =
      (ftcs.series.frames.back().values - implicit.series.frames.back().values)
          .abs()
          .maxCoeff();
  CHECK(diff < 1e-3);
  CHECK(ftcs.cfl_ratio == doctest::Approx(0.4));
}

TEST_CASE("heat: FTCS at ratio 0.6 grows and oscillates") {
  // The unstable modes at ratio 0.6 are the highest frequencies; seed the
  // Nyquist mode so the classical instability shows within a short run.
  const int n = 65;
  Eigen::ArrayXd ic(n);
  const double h = 1.0 / (n - 1);
  for (int i = 0; i < n; ++i)
    ic[i] = std::sin(kPi * i * h) + 0.01 * ((i % 2 == 0) ? 1.0 : -1.0);
  const double dt = 0.6 * h * h;
  const auto run = solvers::solve_heat_1d(ic, solvers::HeatBc::dirichlet, 1.0,
                                          Scheme::ftcs_explicit, dt, 60 * dt, 10);
  CHECK(run.cfl_ratio == doctest::Approx(0.6));
  // The high mode amplifies: the terminal amplitude exceeds the initial.
  const double initial_max = run.series.frames.front().values.abs().maxCoeff();
  const double final_max = run.series.frames.back().values.abs().maxCoeff();
  CHECK(final_max > 2.0 * initial_max);
  // And the sign pattern oscillates somewhere in the interior.
  const auto& last = run.series.frames.back().values;
  bool sign_change = false;
  for (int i = n / 4; i < 3 * n / 4; ++i)
    sign_change = sign_change || (last[i] * last[i + 1] < 0.0);
  CHECK(sign_change);
}

TEST_CASE("heat: implicit Euler matches the analytic decay") {
  const int n = 101;
  Eigen::ArrayXd ic(n);
  const double h = 1.0 / (n - 1);
  for (int i = 0; i < n; ++i) ic[i] = std::sin(kPi * i * h);
  const double kappa = 0.5, t_end = 0.1, dt = 1e-5;
  const auto run = solvers::solve_heat_1d(ic, solvers::HeatBc::dirichlet, kappa,
                                          Scheme::implicit_euler, dt, t_end, 1 << 20);
  const double decay = std::exp(-kappa * kPi * kPi * t_end);
  double worst = 0.0;
  const auto& last = run.series.frames.back().values;
  for (int i = 0; i < n; ++i)
    worst = std::max(worst, std::abs(last[i] - decay * std::sin(kPi * i * h)));
  CHECK(worst < 2e-4);  // O(dt) + O(h^2)
}

TEST_CASE("heat: periodic mass is conserved over 1000 steps") {
  const int n = 128;
  Eigen::ArrayXd ic(n);
  for (int i = 0; i < n; ++i) ic[i] = 1.0 + 0.5 * std::sin(2.0 * kPi * i / n);
  const double h = 1.0 / n;
  const double dt = 0.4 * h * h;
  for (Scheme scheme : {Scheme::ftcs_explicit, Scheme::implicit_euler, Scheme::crank_nicolson}) {
    CAPTURE(solvers::scheme_name(scheme));
    const auto run = solvers::solve_heat_1d(ic, solvers::HeatBc::periodic, 1.0, scheme, dt,
                                            1000 * dt, 1000);
    const double q0 = run.series.frames.front().values.sum() * h;
    const double q1 = run.series.frames.back().values.sum() * h;
    CHECK(std::abs(q1 - q0) / std::abs(q0) < 1e-12);
  }
}

TEST_CASE("heat: time-step refinement shows first order for implicit Euler") {
  const auto result = solvers::measure_convergence_order_heat_dt(
      {0.02, 0.01, 0.005, 0.0025}, 201, 1.0, 0.25, Scheme::implicit_euler);
  CHECK_FALSE(result.degenerate);
  CHECK(result.order > 0.9);
  CHECK(result.order < 1.1);
}

TEST_CASE("fit_order: identical errors degenerate to order zero with a warning") {
  const auto result = solvers::fit_order({0.1, 0.05, 0.025}, {1e-3, 1e-3, 1e-3});
  CHECK(result.degenerate);
  CHECK(result.order == doctest::Approx(0.0));
}

// ---- stiff ----------------------------------------------------------------------

TEST_CASE("stiff: rk4 at dt=1e-2 diverges and reports the stiffness evidence") {
  const auto run = solvers::solve_stiff_linear(-1e7, -1.0, {1.0, 1.0},
                                               Scheme::rk4_explicit, 1e-2, 1.0);
  CHECK(run.stiffness_ratio == doctest::Approx(1e7));
  CHECK(run.nan_truncated);  // overflow to non-finite values ends the series
}

TEST_CASE("stiff: implicit Euler stays stable and tracks the slow mode") {
  const double t_end = 1.0, dt = 1e-2;
  const auto run = solvers::solve_stiff_linear(-1e7, -1.0, {1.0, 1.0},
                                               Scheme::implicit_euler, dt, t_end);
  REQUIRE_FALSE(run.nan_truncated);
  const auto& last = run.series.frames.back().values;
  CHECK(std::abs(last[0]) < 1e-9);  // fast mode crushed
  // First-order accuracy on the slow mode.
  CHECK(last[1] == doctest::Approx(std::exp(-t_end)).epsilon(2e-2));

  const auto bdf = solvers::solve_stiff_linear(-1e7, -1.0, {1.0, 1.0}, Scheme::bdf2, dt, t_end);
  const auto& bdf_last = bdf.series.frames.back().values;
  CHECK(bdf_last[1] == doctest::Approx(std::exp(-t_end)).epsilon(2e-3));
}

TEST_CASE("stiff: zero initial state stays identically zero") {
  const auto run = solvers::solve_stiff_linear(-2.0, -1.0, {0.0, 0.0},
                                               Scheme::implicit_euler, 0.01, 1.0);
  for (const auto& frame : run.series.frames) CHECK(frame.values.abs().maxCoeff() == 0.0);
}

// ---- burgers --------------------------------------------------------------------

TEST_CASE("burgers: constant initial data stays constant") {
  const auto series = solvers::solve_burgers_lf(Eigen::ArrayXd::Constant(64, 0.7), 0.005, 0.2, 5);
  for (const auto& frame : series.frames)
    CHECK((frame.values - 0.7).abs().maxCoeff() < 1e-13);
}

TEST_CASE("burgers: discrete square entropy is non-increasing at every step") {
  const int n = 128;
  Eigen::ArrayXd ic(n);
  for (int i = 0; i < n; ++i) ic[i] = std::sin(2.0 * kPi * i / n);
  const double h = 1.0 / n;
  const auto series = solvers::solve_burgers_lf(ic, 0.5 * h, 0.5, 1);
  double previous = std::numeric_limits<double>::infinity();
  for (const auto& frame : series.frames) {
    const double eta = (frame.values * frame.values * 0.5).sum() * h;
    CHECK(eta <= previous + 1e-14);
    previous = eta;
  }
}

TEST_CASE("burgers: CFL-violating dt is rejected up front") {
  Eigen::ArrayXd ic = Eigen::ArrayXd::Constant(64, 1.0);
  CHECK_THROWS_AS(solvers::solve_burgers_lf(ic, 0.1, 0.5, 1), CFLViolationError);
}

// ---- pitchfork --------------------------------------------------------------------

TEST_CASE("pitchfork: subcritical decay reaches zero") {
  const double terminal = solvers::solve_pitchfork(-1.0, 0.5, 0.05, 50.0);
  CHECK(std::abs(terminal) < 1e-6);
}

TEST_CASE("pitchfork: supercritical settles at sqrt(theta)") {
  const double terminal = solvers::solve_pitchfork(0.1, 1e-3, 0.05, 400.0);
  CHECK(terminal == doctest::Approx(std::sqrt(0.1)).epsilon(1e-3));
  const double negative = solvers::solve_pitchfork(0.1, -1e-3, 0.05, 400.0);
  CHECK(negative == doctest::Approx(-std::sqrt(0.1)).epsilon(1e-3));
}

TEST_CASE("pitchfork: the invariant manifold x=0 is preserved") {
  for (double theta : {-1.0, 0.1, 2.0}) {
    CHECK(solvers::solve_pitchfork(theta, 0.0, 0.04, 20.0) == 0.0);
  }
}

TEST_CASE("pitchfork: oversized dt violates the precondition") {
  CHECK_THROWS_AS(solvers::solve_pitchfork(5.0, 0.1, 0.05, 1.0), Error);
}

// ---- determinism -------------------------------------------------------------------

TEST_CASE("solvers are bitwise deterministic") {
  auto forcing = [](double x, double y) { return std::sin(kPi * x) * y; };
  auto zero = [](double, double) { return 0.0; };
  const auto a = solvers::solve_poisson_2d(forcing, zero, 49);
  const auto b = solvers::solve_poisson_2d(forcing, zero, 49);
  CHECK((a.values == b.values).all());

  Eigen::ArrayXd ic(32);
  for (int i = 0; i < 32; ++i) ic[i] = std::sin(2.0 * kPi * i / 32.0);
  const auto r1 = solvers::solve_burgers_lf(ic, 0.01, 0.3, 4);
  const auto r2 = solvers::solve_burgers_lf(ic, 0.01, 0.3, 4);
  REQUIRE(r1.frames.size() == r2.frames.size());
  for (std::size_t k = 0; k < r1.frames.size(); ++k)
    CHECK((r1.frames[k].values == r2.frames[k].values).all());
}
