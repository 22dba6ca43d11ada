#pragma once

#include <cstdint>

#include "rahgd/core/oracle.hpp"
#include "rahgd/hypergrad/budgets.hpp"
#include "rahgd/subroutines/agd.hpp"
#include "rahgd/subroutines/cg.hpp"

namespace rahgd {

enum class InnerMode {
  theory,    ///< run exactly budget_agd / budget_cg iterations
  adaptive,  ///< run until the gradient-norm certificates hold
};

/// Warm starts carried between outer iterations.
struct InnerState {
  Vector y_warm;
  Vector v_warm;
};

struct InnerSolveSpec {
  double sigma = 1.0;
  InnerMode mode = InnerMode::adaptive;
  BudgetInputs budgets;  ///< budgets.sigma is overwritten with `sigma`
  double alpha = 1.0;    ///< inner AGD step
  double beta = 0.0;     ///< inner AGD momentum
  std::int64_t hard_cap = 1'000'000;
};

struct InnerSolveResult {
  Vector y;
  Vector v;
  Vector grad_f_y;  ///< right-hand side of the CG solve, at (w, y)
  std::int64_t agd_iterations = 0;
  std::int64_t agd_grad_calls = 0;
  std::int64_t cg_iterations = 0;
  std::int64_t cg_matvecs = 0;
};

/// AGD parameters for inner step k. Adaptive mode stops once
/// |grad_y| <= mu sigma / (2 L~), which by strong convexity certifies
/// |y - y*| <= sigma / (2 L~).
AgdParams inner_agd_params(const InnerSolveSpec& spec, std::int64_t k);

/// CG parameters for inner step k >= 0. Adaptive mode stops once
/// |A v - b| <= mu sigma / (2 ell), certifying |v - v*| <= sigma / (2 ell).
CgParams inner_cg_params(const InnerSolveSpec& spec, std::int64_t k);

/// Approximately minimises g(x, .) starting from y0 with the step-k schedule.
/// Throws NonConvergenceError if adaptive mode exhausts the hard cap.
AgdResult solve_lower_level(BilevelOracle& oracle, const Vector& x, Vector y0,
                            const InnerSolveSpec& spec, std::int64_t k);

/// One inner step at w for outer index k >= 0: warm-started AGD on g(w, .)
/// followed by warm-started CG on d2g/dydy(w, y) v = grad_y f(w, y).
/// Updates `state` with the new (y, v).
InnerSolveResult inner_solve(BilevelOracle& oracle, const Vector& w, InnerState& state,
                             const InnerSolveSpec& spec, std::int64_t k);

}  // namespace rahgd
