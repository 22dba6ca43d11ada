#pragma once

#include <vector>

#include "rahgd/core/oracle.hpp"
#include "rahgd/hypergrad/inner_solve.hpp"
#include "rahgd/solvers/config.hpp"
#include "rahgd/solvers/report.hpp"

namespace rahgd {

/// Live iterate tuple of the restarted loop.
struct SolverState {
  std::int64_t t = 0;
  std::int64_t k = 0;
  Vector x_prev;
  Vector x_cur;
  Vector w_cur;
  Vector x_epoch_start;
  double disp_sq_sum = 0.0;
  std::vector<Vector> w_history;    ///< w_{t,0..k-1} of the current epoch
  std::vector<double> step_norms;   ///< |x_{t,i+1} - x_{t,i}|, i < k

  /// Sum of squared recorded displacements, recomputed.
  double recomputed_disp_sq_sum() const;
};

/// Restart test: k * sum_{i<k} |x_{i+1} - x_i|^2 > B^2.
bool restart_triggered(std::int64_t k, double disp_sq_sum, double big_b);

/// argmin over floor(K/2) <= k <= K-1 of step_norms[k]; ties go to the smallest k.
std::int64_t select_k0(const std::vector<double>& step_norms);

/// Mean of w_history[0..k0].
Vector average_prefix(const std::vector<Vector>& w_history, std::int64_t k0);

/// Restarted accelerated hypergradient descent. Perturbs restart points iff
/// cfg.perturbation.
RunReport rahgd(BilevelOracle& oracle, const Vector& x0, const SolverConfig& cfg, const RunControl& control = {});

/// rahgd with perturbation forced on.
RunReport prahgd(BilevelOracle& oracle, const Vector& x0, SolverConfig cfg, const RunControl& control = {});

/// Minimax variant: AGD ascent on fbar(w, .), step along grad_x fbar, no CG,
/// perturbation always on. Budgets use the minimax constants.
RunReport pragda(MinimaxOracle& oracle, const Vector& x0, SolverConfig cfg, const RunControl& control = {});

}  // namespace rahgd
