#include "rahgd/hypergrad/inner_solve.hpp"

#include <string>

#include "rahgd/core/errors.hpp"

namespace rahgd {

AgdParams inner_agd_params(const InnerSolveSpec& spec, std::int64_t k) {
  AgdParams p;
  p.alpha = spec.alpha;
  p.beta = spec.beta;
  if (spec.mode == InnerMode::theory) {
    BudgetInputs b = spec.budgets;
    b.sigma = spec.sigma;
    p.t_max = budget_agd(k, b);
  } else {
    p.t_max = spec.hard_cap;
    p.tol = spec.budgets.mu * spec.sigma / (2.0 * spec.budgets.l_tilde);
  }
  return p;
}

CgParams inner_cg_params(const InnerSolveSpec& spec, std::int64_t k) {
  CgParams p;
  if (spec.mode == InnerMode::theory) {
    BudgetInputs b = spec.budgets;
    b.sigma = spec.sigma;
    p.t_max = budget_cg(k, b);
  } else {
    p.t_max = spec.hard_cap;
    p.tol = spec.budgets.mu * spec.sigma / (2.0 * spec.budgets.ell);
  }
  return p;
}

AgdResult solve_lower_level(BilevelOracle& oracle, const Vector& x, Vector y0,
                            const InnerSolveSpec& spec, std::int64_t k) {
  if (!(spec.sigma > 0.0)) throw ConfigError("inner solve: sigma must be positive");
  const AgdParams params = inner_agd_params(spec, k);
  AgdResult r = agd([&](const Vector& y) { return oracle.grad_g_y(x, y); }, std::move(y0), params);
  if (!r.converged) {
    throw NonConvergenceError("lower-level AGD did not reach |grad_y g| <= " +
                              std::to_string(*params.tol) + " within " +
                              std::to_string(params.t_max) + " iterations");
  }
  return r;
}

InnerSolveResult inner_solve(BilevelOracle& oracle, const Vector& w, InnerState& state,
                             const InnerSolveSpec& spec, std::int64_t k) {
  if (k < 0) throw ConfigError("inner_solve: outer index must be >= 0");
  InnerSolveResult out;

  AgdResult y_run = solve_lower_level(oracle, w, state.y_warm, spec, k);
  out.agd_iterations = y_run.iterations;
  out.agd_grad_calls = y_run.grad_calls;
  out.y = std::move(y_run.z);

  out.grad_f_y = oracle.grad_f_y(w, out.y);
  const CgParams cg_params = inner_cg_params(spec, k);
  CgResult v_run =
      cg([&](const Vector& v) { return oracle.hvp_g_yy(w, out.y, v); }, out.grad_f_y, state.v_warm, cg_params);
  if (!v_run.converged) {
    throw NonConvergenceError("CG did not reach the residual certificate within " +
                              std::to_string(cg_params.t_max) + " iterations");
  }
  out.cg_iterations = v_run.iterations;
  out.cg_matvecs = v_run.matvecs;
  out.v = std::move(v_run.q);

  state.y_warm = out.y;
  state.v_warm = out.v;
  return out;
}

}  // namespace rahgd
