#include "rahgd/hypergrad/hypergradient.hpp"

#include <cmath>
#include <string>

#include "rahgd/core/errors.hpp"

namespace rahgd {
namespace {

double momentum_for(double kappa) {
  const double s = std::sqrt(kappa);
  return (s - 1.0) / (s + 1.0);
}

AgdParams certified_minimax_params(const SmoothnessConstants& sc, double tol, std::int64_t hard_cap) {
  const DerivedConstants dc = derive_minimax_constants(sc);
  AgdParams p;
  p.alpha = 1.0 / sc.ell;
  p.beta = momentum_for(dc.kappa);
  p.t_max = hard_cap;
  p.tol = sc.mu * tol / (2.0 * dc.l_tilde);
  return p;
}

}  // namespace

Vector inexact_hypergradient(BilevelOracle& oracle, const Vector& w, const Vector& y, const Vector& v) {
  Vector u = oracle.grad_f_x(w, y);
  u -= oracle.jvp_g_xy(w, y, v);
  return u;
}

InnerSolveSpec certified_spec(const SmoothnessConstants& sc, double tol, std::int64_t hard_cap) {
  if (!(tol > 0.0)) throw ConfigError("hypergradient tolerance must be positive");
  const DerivedConstants dc = derive_constants(sc);
  InnerSolveSpec spec;
  spec.sigma = tol;
  spec.mode = InnerMode::adaptive;
  spec.budgets.sigma = tol;
  spec.budgets.kappa = dc.kappa;
  spec.budgets.l_tilde = dc.l_tilde;
  spec.budgets.ell = sc.ell;
  spec.budgets.mu = sc.mu;
  spec.budgets.m_bound = sc.m_bound;
  spec.alpha = 1.0 / sc.ell;
  spec.beta = momentum_for(dc.kappa);
  spec.hard_cap = hard_cap;
  return spec;
}

Vector exact_hypergradient(BilevelOracle& oracle, const Vector& x, double tol, InnerState* warm) {
  const InnerSolveSpec spec = certified_spec(oracle.constants(), tol);
  InnerState local{Vector::zeros(oracle.dim_y()), Vector::zeros(oracle.dim_y())};
  InnerState& state = warm ? *warm : local;
  if (state.y_warm.size() != oracle.dim_y()) state.y_warm = Vector::zeros(oracle.dim_y());
  if (state.v_warm.size() != oracle.dim_y()) state.v_warm = Vector::zeros(oracle.dim_y());
  const InnerSolveResult r = inner_solve(oracle, x, state, spec, 0);
  return inexact_hypergradient(oracle, x, r.y, r.v);
}

std::optional<double> phi_value(BilevelOracle& oracle, const Vector& x, double tol, Vector* y_warm) {
  const InnerSolveSpec spec = certified_spec(oracle.constants(), tol);
  Vector y0 = (y_warm && y_warm->size() == oracle.dim_y()) ? *y_warm : Vector::zeros(oracle.dim_y());
  AgdResult r = solve_lower_level(oracle, x, std::move(y0), spec, 0);
  if (y_warm) *y_warm = r.z;
  return oracle.problem().value_f(x, r.z);
}

AgdResult solve_minimax_inner(MinimaxOracle& oracle, const Vector& x, Vector y0, const AgdParams& params) {
  AgdResult r = agd([&](const Vector& y) { return -oracle.grad_fbar_y(x, y); }, std::move(y0), params);
  if (!r.converged) {
    throw NonConvergenceError("inner ascent did not reach |grad_y fbar| <= " +
                              std::to_string(params.tol.value_or(0.0)) + " within " +
                              std::to_string(params.t_max) + " iterations");
  }
  return r;
}

Vector exact_minimax_gradient(MinimaxOracle& oracle, const Vector& x, double tol, Vector* y_warm) {
  const AgdParams params = certified_minimax_params(oracle.constants(), tol, 1'000'000);
  Vector y0 = (y_warm && y_warm->size() == oracle.dim_y()) ? *y_warm : Vector::zeros(oracle.dim_y());
  AgdResult r = solve_minimax_inner(oracle, x, std::move(y0), params);
  if (y_warm) *y_warm = r.z;
  return oracle.grad_fbar_x(x, r.z);
}

std::optional<double> minimax_phi_value(MinimaxOracle& oracle, const Vector& x, double tol, Vector* y_warm) {
  const AgdParams params = certified_minimax_params(oracle.constants(), tol, 1'000'000);
  Vector y0 = (y_warm && y_warm->size() == oracle.dim_y()) ? *y_warm : Vector::zeros(oracle.dim_y());
  AgdResult r = solve_minimax_inner(oracle, x, std::move(y0), params);
  if (y_warm) *y_warm = r.z;
  return oracle.problem().value(x, r.z);
}

}  // namespace rahgd
