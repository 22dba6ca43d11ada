#pragma once

#include <cstdint>
#include <functional>

#include "rahgd/core/oracle.hpp"

namespace rahgd {

struct StationarityOptions {
  double grad_tol_ratio = 0.01;            ///< gradient certified at eps * ratio
  double fd_rel_step = 1e-4;               ///< h = fd_rel_step (1 + |x|)
  std::int64_t min_power_iters = 200;
  std::int64_t max_power_iters = 20'000;
  double residual_tol = 1e-4;              ///< power-method stop: |M v - q v| <= residual_tol
  std::uint64_t probe_seed = 12345;        ///< start vector of the power method
  bool estimate_lambda_min = true;
};

struct StationarityReport {
  double epsilon = 0.0;
  double grad_norm = 0.0;
  double grad_tol = 0.0;          ///< certification tolerance of grad_norm
  double lambda_min_est = 0.0;
  double hessian_probe_tol = 0.0; ///< hypergradient tolerance used inside finite differences
  double fd_step = 0.0;
  std::int64_t eig_iterations = 0;
  double eig_residual = 0.0;
  bool eig_converged = false;
  double sosp_threshold = 0.0;    ///< -1.011 sqrt(rho~ eps)
  bool fosp_pass = false;         ///< grad_norm + grad_tol <= eps
  bool sosp_pass = false;         ///< fosp_pass and lambda_min_est >= sosp_threshold
  OracleCounters verification_counters;  ///< cost of this report, kept apart from solver counters
};

/// (x, tol) -> gradient of Phi with |error| <= tol.
using CertifiedGradientFn = std::function<Vector(const Vector& x, double tol)>;

/// Gradient norm plus a smallest-eigenvalue estimate from a shifted power method
/// on v -> L~ v - (grad Phi(x + h v) - grad Phi(x - h v)) / (2h).
StationarityReport verify_stationarity(const CertifiedGradientFn& grad, const Vector& x, double l_tilde,
                                       double rho_tilde, double epsilon, const StationarityOptions& opts = {});

/// Bilevel problems: gradient from exact_hypergradient on a private oracle.
StationarityReport verify_stationarity(const BilevelProblem& problem, const Vector& x, const DerivedConstants& dc,
                                       double epsilon, const StationarityOptions& opts = {});

/// Minimax problems: Danskin gradient of max_y fbar on a private oracle.
StationarityReport verify_stationarity(const MinimaxProblem& problem, const Vector& x, const DerivedConstants& dc,
                                       double epsilon, const StationarityOptions& opts = {});

}  // namespace rahgd
