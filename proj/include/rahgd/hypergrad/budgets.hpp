#pragma once

#include <cstdint>

namespace rahgd {

/// Inputs of the theory inner-loop budgets.
struct BudgetInputs {
  double sigma = 1.0;        ///< hypergradient accuracy target
  double kappa = 1.0;
  double l_tilde = 1.0;
  double ell = 1.0;
  double mu = 1.0;
  double m_bound = 0.0;
  double big_b = 1.0;        ///< restart radius B
  double c_hat = 1.0;        ///< bound on |y*(x_{t,-1})| for the epoch-start solve
  double v_init_norm = 0.0;  ///< |v| at the start of the epoch's first CG call
};

/// AGD iterations for inner step k:
///   k = -1: ceil(2 sqrt(kappa) log(2 L~ sqrt(kappa+1) C^ / sigma))
///   k >= 0: ceil(2 sqrt(kappa) log((2 L~ sqrt(kappa+1) / sigma)(sigma/(2 L~) + 2 kappa B)))
/// Returns 1 when the log argument is <= 1. Throws ConfigError for sigma <= 0 or k < -1.
std::int64_t budget_agd(std::int64_t k, const BudgetInputs& b);

/// CG iterations for inner step k:
///   k = 0:  ceil(((sqrt(kappa)+1)/2) log((4 ell sqrt(kappa) / sigma)(|v_init| + M/mu)))
///   k >= 1: ceil(((sqrt(kappa)+1)/2) log((4 ell sqrt(kappa) / sigma)(sigma/(2 ell) + 2M/mu)))
/// Same clamp and errors as budget_agd; requires k >= 0.
std::int64_t budget_cg(std::int64_t k, const BudgetInputs& b);

}  // namespace rahgd
