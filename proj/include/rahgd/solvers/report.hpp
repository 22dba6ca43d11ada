#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rahgd/core/oracle.hpp"

namespace rahgd {

/// One outer iteration.
struct TraceRecord {
  std::int64_t epoch = 0;
  std::int64_t iter = 0;          ///< in-epoch index k of the update x_k -> x_{k+1}
  double hypergrad_norm = 0.0;    ///< |u_k|
  double step_norm = 0.0;         ///< |x_{k+1} - x_k|
  OracleCounters counters;        ///< cumulative, after this iteration
  double wall_ms = 0.0;           ///< 0 unless RunControl::record_wall_time
  double dist_from_epoch_start = 0.0;    ///< |x_{k+1} - x_0|
  double w_dist_from_epoch_start = 0.0;  ///< |w_k - x_0|
  bool restart_triggered = false;
  std::int64_t agd_iterations = 0;
  std::int64_t cg_iterations = 0;
};

struct EpochRecord {
  std::int64_t epoch = 0;
  Vector x_start;                ///< x_{t,0}, after any perturbation
  std::int64_t iterations = 0;   ///< updates performed in this epoch
  double perturbation_norm = 0.0;
};

enum class Termination {
  epoch_completed_without_restart,
  max_epochs_hit,
  stopped_by_control,  ///< RunControl::stop_requested returned true (e.g. wall clock)
  iteration_budget,    ///< baselines: fixed iteration count reached
  target_reached,      ///< baselines: optional stopping threshold met
};

std::string termination_name(Termination t);

struct RunReport {
  Vector w_hat;
  Vector y_last;                 ///< last inner solution
  std::int64_t epochs = 0;
  std::int64_t total_outer_iters = 0;
  std::int64_t k0 = -1;          ///< averaging index of the final epoch, -1 if none
  OracleCounters counters;
  std::vector<TraceRecord> trace;
  std::vector<EpochRecord> epoch_log;
  Termination termination = Termination::epoch_completed_without_restart;
};

/// Hooks checked between outer iterations only.
struct RunControl {
  std::function<bool()> stop_requested;
  /// Called after each trace record with the point the hypergradient was
  /// evaluated at (w_k for the restarted solvers, x_k for the baselines).
  std::function<void(const TraceRecord&, const Vector& query_point)> on_iteration;
  bool record_wall_time = false;
  bool keep_trace = true;  ///< false: RunReport::trace stays empty (on_iteration still fires)
};

}  // namespace rahgd
