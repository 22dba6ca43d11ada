#include "rahgd/solvers/baselines.hpp"

#include <chrono>
#include <cmath>

#include "rahgd/core/errors.hpp"
#include "rahgd/hypergrad/hypergradient.hpp"

namespace rahgd {

void HgdConfig::validate() const {
  if (!(step >= 0.0) || !std::isfinite(step)) throw ConfigError("hgd: step must be nonnegative");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ConfigError("hgd: sigma must be positive");
  if (iters < 0) throw ConfigError("hgd: iteration count must be nonnegative");
  if (!(big_b > 0.0)) throw ConfigError("hgd: B must be positive");
  if (c_hat && !(*c_hat > 0.0)) throw ConfigError("hgd: c_hat must be positive");
  if (inner_hard_cap < 1) throw ConfigError("hgd: inner hard cap must be >= 1");
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(const RunControl& control, Clock::time_point begin) {
  if (!control.record_wall_time) return 0.0;
  return std::chrono::duration<double, std::milli>(Clock::now() - begin).count();
}

}  // namespace

RunReport baseline_hgd(BilevelOracle& oracle, const Vector& x0, const HgdConfig& cfg, const RunControl& control) {
  cfg.validate();
  if (x0.size() != oracle.dim_x()) throw DimensionError("initial point has the wrong dimension");
  const auto begin = Clock::now();

  const SmoothnessConstants sc = oracle.constants();
  const DerivedConstants dc = derive_constants(sc);
  InnerSolveSpec spec;
  spec.sigma = cfg.sigma;
  spec.mode = cfg.mode;
  spec.budgets.sigma = cfg.sigma;
  spec.budgets.kappa = dc.kappa;
  spec.budgets.l_tilde = dc.l_tilde;
  spec.budgets.ell = sc.ell;
  spec.budgets.mu = sc.mu;
  spec.budgets.m_bound = sc.m_bound;
  spec.budgets.big_b = cfg.big_b;
  spec.budgets.c_hat = cfg.c_hat ? *cfg.c_hat : 10.0;
  spec.alpha = 1.0 / sc.ell;
  const double s = std::sqrt(dc.kappa);
  spec.beta = (s - 1.0) / (s + 1.0);
  spec.hard_cap = cfg.inner_hard_cap;

  InnerState state{Vector::zeros(oracle.dim_y()), Vector::zeros(oracle.dim_y())};
  state.y_warm = solve_lower_level(oracle, x0, Vector::zeros(oracle.dim_y()), spec, -1).z;

  RunReport report;
  report.epochs = 1;
  report.epoch_log.push_back({0, x0, 0, 0.0});
  report.termination = Termination::iteration_budget;
  Vector x = x0;

  for (std::int64_t k = 0; k < cfg.iters; ++k) {
    InnerSolveResult r = inner_solve(oracle, x, state, spec, k);
    const Vector u = inexact_hypergradient(oracle, x, r.y, r.v);
    Vector x_next = axpy(-cfg.step, u, x);
    if (!x_next.all_finite()) throw DivergenceError("hgd iterate became non-finite", k);

    TraceRecord rec;
    rec.iter = k;
    rec.hypergrad_norm = norm(u);
    rec.step_norm = distance(x_next, x);
    rec.counters = oracle.counters();
    rec.wall_ms = elapsed_ms(control, begin);
    rec.dist_from_epoch_start = distance(x_next, x0);
    rec.w_dist_from_epoch_start = distance(x, x0);
    rec.agd_iterations = r.agd_iterations;
    rec.cg_iterations = r.cg_iterations;
    if (control.keep_trace) report.trace.push_back(rec);
    ++report.total_outer_iters;
    if (control.on_iteration) control.on_iteration(rec, x);

    if (cfg.stop_below && rec.hypergrad_norm <= *cfg.stop_below) {
      // u was evaluated at x, so x is the certified point.
      report.termination = Termination::target_reached;
      break;
    }
    x = std::move(x_next);
    if (control.stop_requested && control.stop_requested()) {
      report.termination = Termination::stopped_by_control;
      break;
    }
  }

  report.epoch_log.back().iterations = report.total_outer_iters;
  report.w_hat = x;
  report.y_last = state.y_warm;
  report.counters = oracle.counters();
  return report;
}

RunReport baseline_gda(MinimaxOracle& oracle, const Vector& x0, const Vector& y0, double step_x, double step_y,
                       std::int64_t iters, const RunControl& control) {
  if (x0.size() != oracle.dim_x() || y0.size() != oracle.dim_y()) {
    throw DimensionError("gda: initial point has the wrong dimension");
  }
  if (!(step_x >= 0.0) || !(step_y >= 0.0)) throw ConfigError("gda: step sizes must be nonnegative");
  if (iters < 0) throw ConfigError("gda: iteration count must be nonnegative");
  const auto begin = Clock::now();

  RunReport report;
  report.epochs = 1;
  report.epoch_log.push_back({0, x0, 0, 0.0});
  report.termination = Termination::iteration_budget;
  Vector x = x0;
  Vector y = y0;

  for (std::int64_t k = 0; k < iters; ++k) {
    const Vector gx = oracle.grad_fbar_x(x, y);
    const Vector gy = oracle.grad_fbar_y(x, y);
    Vector x_next = axpy(-step_x, gx, x);
    Vector y_next = axpy(step_y, gy, y);
    if (!x_next.all_finite() || !y_next.all_finite()) throw DivergenceError("gda iterate became non-finite", k);

    TraceRecord rec;
    rec.iter = k;
    rec.hypergrad_norm = norm(gx);
    rec.step_norm = distance(x_next, x);
    rec.counters = oracle.counters();
    rec.wall_ms = elapsed_ms(control, begin);
    rec.dist_from_epoch_start = distance(x_next, x0);
    rec.w_dist_from_epoch_start = distance(x, x0);
    if (control.keep_trace) report.trace.push_back(rec);
    ++report.total_outer_iters;
    if (control.on_iteration) control.on_iteration(rec, x);

    x = std::move(x_next);
    y = std::move(y_next);
    if (control.stop_requested && control.stop_requested()) {
      report.termination = Termination::stopped_by_control;
      break;
    }
  }

  report.epoch_log.back().iterations = report.total_outer_iters;
  report.w_hat = x;
  report.y_last = y;
  report.counters = oracle.counters();
  return report;
}

}  // namespace rahgd
