#include "rahgd/hypergrad/budgets.hpp"

#include <cmath>
#include <limits>

#include "rahgd/core/errors.hpp"

namespace rahgd {
namespace {

// Budgets beyond this are treated as "effectively unbounded".
constexpr double kMaxBudget = 1e15;

std::int64_t clamped_ceil(double coefficient, double log_argument) {
  if (!(log_argument > 1.0)) return 1;
  const double value = std::ceil(coefficient * std::log(log_argument));
  if (!std::isfinite(value) || value > kMaxBudget) return static_cast<std::int64_t>(kMaxBudget);
  return value < 1.0 ? 1 : static_cast<std::int64_t>(value);
}

void check_inputs(const BudgetInputs& b) {
  if (!(b.sigma > 0.0)) throw ConfigError("budget: sigma must be positive");
  if (!(b.kappa >= 1.0) || !(b.mu > 0.0) || !(b.ell > 0.0) || !(b.l_tilde > 0.0)) {
    throw ConfigError("budget: constants must satisfy kappa >= 1 and ell, mu, L~ > 0");
  }
}

}  // namespace

std::int64_t budget_agd(std::int64_t k, const BudgetInputs& b) {
  check_inputs(b);
  if (k < -1) throw ConfigError("budget_agd: k must be >= -1");
  const double coefficient = 2.0 * std::sqrt(b.kappa);
  const double scale = 2.0 * b.l_tilde * std::sqrt(b.kappa + 1.0) / b.sigma;
  const double radius =
      k == -1 ? b.c_hat : b.sigma / (2.0 * b.l_tilde) + 2.0 * b.kappa * b.big_b;
  return clamped_ceil(coefficient, scale * radius);
}

std::int64_t budget_cg(std::int64_t k, const BudgetInputs& b) {
  check_inputs(b);
  if (k < 0) throw ConfigError("budget_cg: k must be >= 0");
  const double coefficient = (std::sqrt(b.kappa) + 1.0) / 2.0;
  const double scale = 4.0 * b.ell * std::sqrt(b.kappa) / b.sigma;
  const double radius = k == 0 ? b.v_init_norm + b.m_bound / b.mu
                               : b.sigma / (2.0 * b.ell) + 2.0 * b.m_bound / b.mu;
  return clamped_ceil(coefficient, scale * radius);
}

}  // namespace rahgd
