#include "rahgd/solvers/restarted.hpp"

#include <chrono>
#include <cmath>
#include <random>
#include <string>

#include "rahgd/core/errors.hpp"
#include "rahgd/hypergrad/hypergradient.hpp"
#include "rahgd/solvers/sample_ball.hpp"

namespace rahgd {

std::string termination_name(Termination t) {
  switch (t) {
    case Termination::epoch_completed_without_restart: return "epoch_completed_without_restart";
    case Termination::max_epochs_hit: return "max_epochs_hit";
    case Termination::stopped_by_control: return "stopped_by_control";
    case Termination::iteration_budget: return "iteration_budget";
    case Termination::target_reached: return "target_reached";
  }
  return "unknown";
}

double SolverState::recomputed_disp_sq_sum() const {
  double s = 0.0;
  for (double d : step_norms) s += d * d;
  return s;
}

bool restart_triggered(std::int64_t k, double disp_sq_sum, double big_b) {
  return static_cast<double>(k) * disp_sq_sum > big_b * big_b;
}

std::int64_t select_k0(const std::vector<double>& step_norms) {
  const auto big_k = static_cast<std::int64_t>(step_norms.size());
  if (big_k == 0) throw ConfigError("select_k0: empty epoch");
  std::int64_t best = big_k / 2;
  for (std::int64_t k = best + 1; k < big_k; ++k) {
    if (step_norms[static_cast<std::size_t>(k)] < step_norms[static_cast<std::size_t>(best)]) best = k;
  }
  return best;
}

Vector average_prefix(const std::vector<Vector>& w_history, std::int64_t k0) {
  if (k0 < 0 || static_cast<std::size_t>(k0) >= w_history.size()) throw ConfigError("average_prefix: bad K0");
  Vector sum = Vector::zeros(w_history.front().size());
  for (std::int64_t k = 0; k <= k0; ++k) sum += w_history[static_cast<std::size_t>(k)];
  sum *= 1.0 / static_cast<double>(k0 + 1);
  return sum;
}

namespace {

struct StepOut {
  Vector u;
  std::int64_t agd_iterations = 0;
  std::int64_t cg_iterations = 0;
};

BudgetInputs budget_inputs(const SolverConfig& cfg, const SmoothnessConstants& sc, const DerivedConstants& dc) {
  BudgetInputs b;
  b.sigma = cfg.sigma;
  b.kappa = dc.kappa;
  b.l_tilde = dc.l_tilde;
  b.ell = sc.ell;
  b.mu = sc.mu;
  b.m_bound = sc.m_bound;
  b.big_b = cfg.big_b;
  return b;
}

double c_hat_for(const SolverConfig& cfg, const Vector& y_warm) {
  return cfg.c_hat ? *cfg.c_hat : 10.0 * (1.0 + norm(y_warm));
}

class BilevelSource {
 public:
  BilevelSource(BilevelOracle& oracle, const SolverConfig& cfg) : oracle_(oracle), cfg_(cfg) {
    const SmoothnessConstants sc = oracle.constants();
    sc.validate();
    spec_.sigma = cfg.sigma;
    spec_.mode = cfg.mode;
    spec_.budgets = budget_inputs(cfg, sc, derive_constants(sc));
    spec_.alpha = cfg.alpha;
    spec_.beta = cfg.beta;
    spec_.hard_cap = cfg.inner_hard_cap;
    state_.y_warm = Vector::zeros(oracle.dim_y());
    state_.v_warm = Vector::zeros(oracle.dim_y());
  }

  void start_epoch(const Vector& x, bool first) {
    spec_.budgets.c_hat = c_hat_for(cfg_, state_.y_warm);
    AgdResult r = solve_lower_level(oracle_, x, Vector::zeros(oracle_.dim_y()), spec_, -1);
    state_.y_warm = std::move(r.z);
    if (first) state_.v_warm = state_.y_warm;
    spec_.budgets.v_init_norm = norm(state_.v_warm);
  }

  StepOut step(const Vector& w, std::int64_t k) {
    InnerSolveResult r = inner_solve(oracle_, w, state_, spec_, k);
    return {inexact_hypergradient(oracle_, w, r.y, r.v), r.agd_iterations, r.cg_iterations};
  }

  const OracleCounters& counters() const { return oracle_.counters(); }
  const Vector& y() const { return state_.y_warm; }
  std::size_t dim_x() const { return oracle_.dim_x(); }

 private:
  BilevelOracle& oracle_;
  const SolverConfig& cfg_;
  InnerSolveSpec spec_;
  InnerState state_;
};

class MinimaxSource {
 public:
  MinimaxSource(MinimaxOracle& oracle, const SolverConfig& cfg) : oracle_(oracle), cfg_(cfg) {
    const SmoothnessConstants sc = oracle.constants();
    sc.validate();
    budgets_ = budget_inputs(cfg, sc, derive_minimax_constants(sc));
    y_ = Vector::zeros(oracle.dim_y());
  }

  void start_epoch(const Vector& x, bool) {
    budgets_.c_hat = c_hat_for(cfg_, y_);
    y_ = solve_minimax_inner(oracle_, x, Vector::zeros(oracle_.dim_y()), params(-1)).z;
  }

  StepOut step(const Vector& w, std::int64_t k) {
    AgdResult r = solve_minimax_inner(oracle_, w, y_, params(k));
    y_ = std::move(r.z);
    return {oracle_.grad_fbar_x(w, y_), r.iterations, 0};
  }

  const OracleCounters& counters() const { return oracle_.counters(); }
  const Vector& y() const { return y_; }
  std::size_t dim_x() const { return oracle_.dim_x(); }

 private:
  AgdParams params(std::int64_t k) const {
    AgdParams p;
    p.alpha = cfg_.alpha;
    p.beta = cfg_.beta;
    if (cfg_.mode == InnerMode::theory) {
      p.t_max = budget_agd(k, budgets_);
    } else {
      p.t_max = cfg_.inner_hard_cap;
      p.tol = budgets_.mu * cfg_.sigma / (2.0 * budgets_.l_tilde);
    }
    return p;
  }

  MinimaxOracle& oracle_;
  const SolverConfig& cfg_;
  BudgetInputs budgets_;
  Vector y_;
};

template <class Source>
RunReport run_restarted(Source& src, const Vector& x0, const SolverConfig& cfg, const RunControl& control) {
  cfg.validate();
  if (x0.size() != src.dim_x()) throw DimensionError("initial point has the wrong dimension");
  if (!x0.all_finite()) throw ConfigError("initial point is not finite");

  using Clock = std::chrono::steady_clock;
  const auto t_begin = Clock::now();
  std::mt19937_64 rng(cfg.seed);

  RunReport report;
  SolverState st;
  st.x_cur = x0;
  st.x_prev = x0;
  st.x_epoch_start = x0;
  src.start_epoch(x0, true);
  report.epoch_log.push_back({0, x0, 0, 0.0});

  auto stop_requested = [&] { return control.stop_requested && control.stop_requested(); };

  for (;;) {
    st.w_cur = st.x_cur;
    axpy_inplace(1.0 - cfg.theta, st.x_cur - st.x_prev, st.w_cur);
    StepOut s = src.step(st.w_cur, st.k);
    Vector x_next = axpy(-cfg.eta, s.u, st.w_cur);
    if (!x_next.all_finite()) throw DivergenceError("outer iterate became non-finite", report.total_outer_iters);

    const double step = distance(x_next, st.x_cur);
    st.w_history.push_back(st.w_cur);
    st.step_norms.push_back(step);
    st.disp_sq_sum += step * step;
    st.x_prev = std::move(st.x_cur);
    st.x_cur = std::move(x_next);
    ++st.k;
    const bool trigger = restart_triggered(st.k, st.disp_sq_sum, cfg.big_b);

    TraceRecord rec;
    rec.epoch = st.t;
    rec.iter = st.k - 1;
    rec.hypergrad_norm = norm(s.u);
    rec.step_norm = step;
    rec.counters = src.counters();
    if (control.record_wall_time) {
      rec.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - t_begin).count();
    }
    rec.dist_from_epoch_start = distance(st.x_cur, st.x_epoch_start);
    rec.w_dist_from_epoch_start = distance(st.w_cur, st.x_epoch_start);
    rec.restart_triggered = trigger;
    rec.agd_iterations = s.agd_iterations;
    rec.cg_iterations = s.cg_iterations;
    if (control.keep_trace) report.trace.push_back(rec);
    ++report.total_outer_iters;
    report.epoch_log.back().iterations = st.k;
    if (control.on_iteration) control.on_iteration(rec, st.w_cur);

    if (cfg.stop_below && rec.hypergrad_norm <= *cfg.stop_below) {
      report.termination = Termination::target_reached;
      report.w_hat = st.w_cur;
      break;
    }
    if (trigger) {
      if (st.t + 1 >= cfg.max_epochs) {
        report.termination = Termination::max_epochs_hit;
        report.w_hat = st.x_cur;
        break;
      }
      if (stop_requested()) {
        report.termination = Termination::stopped_by_control;
        report.w_hat = st.x_cur;
        break;
      }
      Vector x_start = st.x_cur;
      double xi_norm = 0.0;
      if (cfg.perturbation) {
        const Vector xi = sample_ball(x_start.size(), cfg.r, rng);
        xi_norm = norm(xi);
        x_start += xi;
      }
      ++st.t;
      st.k = 0;
      st.x_cur = x_start;
      st.x_prev = x_start;
      st.x_epoch_start = x_start;
      st.disp_sq_sum = 0.0;
      st.w_history.clear();
      st.step_norms.clear();
      src.start_epoch(x_start, false);
      report.epoch_log.push_back({st.t, std::move(x_start), 0, xi_norm});
      continue;
    }

    if (st.k == cfg.big_k) {
      report.k0 = select_k0(st.step_norms);
      report.w_hat = average_prefix(st.w_history, report.k0);
      report.termination = Termination::epoch_completed_without_restart;
      break;
    }
    if (stop_requested()) {
      report.termination = Termination::stopped_by_control;
      report.w_hat = st.x_cur;
      break;
    }
  }

  report.epochs = st.t + 1;
  report.counters = src.counters();
  report.y_last = src.y();
  return report;
}

}  // namespace

RunReport rahgd(BilevelOracle& oracle, const Vector& x0, const SolverConfig& cfg, const RunControl& control) {
  BilevelSource src(oracle, cfg);
  return run_restarted(src, x0, cfg, control);
}

RunReport prahgd(BilevelOracle& oracle, const Vector& x0, SolverConfig cfg, const RunControl& control) {
  cfg.perturbation = true;
  BilevelSource src(oracle, cfg);
  return run_restarted(src, x0, cfg, control);
}

RunReport pragda(MinimaxOracle& oracle, const Vector& x0, SolverConfig cfg, const RunControl& control) {
  cfg.perturbation = true;
  MinimaxSource src(oracle, cfg);
  return run_restarted(src, x0, cfg, control);
}

}  // namespace rahgd
