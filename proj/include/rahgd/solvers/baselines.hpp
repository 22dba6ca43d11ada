#pragma once

#include <cstdint>
#include <optional>

#include "rahgd/core/oracle.hpp"
#include "rahgd/hypergrad/inner_solve.hpp"
#include "rahgd/solvers/report.hpp"

namespace rahgd {

struct HgdConfig {
  double step = 0.1;
  double sigma = 1e-6;
  std::int64_t iters = 100;
  InnerMode mode = InnerMode::adaptive;
  double big_b = 1.0;                   ///< per-step displacement bound for theory budgets
  std::optional<double> c_hat;          ///< as SolverConfig::c_hat
  std::int64_t inner_hard_cap = 1'000'000;
  std::optional<double> stop_below;     ///< stop once |u_k| <= stop_below

  void validate() const;
};

/// Hypergradient descent x_{k+1} = x_k - step u_k with the same warm-started
/// inner solves as the restarted solvers (AGD from 0 once, then warm starts;
/// v starts at 0). Trace record k holds |u_k| evaluated at x_k.
RunReport baseline_hgd(BilevelOracle& oracle, const Vector& x0, const HgdConfig& cfg, const RunControl& control = {});

/// Simultaneous gradient descent-ascent
///   x <- x - step_x grad_x fbar(x, y),  y <- y + step_y grad_y fbar(x, y).
/// Each iteration costs one gc_f and one gc_g. Trace record k holds |grad_x fbar|.
RunReport baseline_gda(MinimaxOracle& oracle, const Vector& x0, const Vector& y0, double step_x, double step_y,
                       std::int64_t iters, const RunControl& control = {});

}  // namespace rahgd
