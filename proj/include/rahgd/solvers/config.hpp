#pragma once

#include <cstdint>
#include <optional>

#include "rahgd/core/constants.hpp"
#include "rahgd/hypergrad/inner_solve.hpp"

namespace rahgd {

struct SolverConfig {
  double epsilon = 1e-3;
  double eta = 0.1;           ///< outer step size
  double theta = 0.5;         ///< momentum parameter, x-extrapolation uses 1 - theta
  double big_b = 1.0;         ///< restart radius
  std::int64_t big_k = 10;    ///< epoch iteration cap
  double alpha = 1.0;         ///< inner AGD step
  double beta = 0.0;          ///< inner AGD momentum
  double sigma = 1e-6;        ///< hypergradient accuracy
  bool perturbation = false;
  double r = 0.0;             ///< perturbation radius
  double zeta = 0.1;          ///< failure probability
  std::int64_t chi = 1;       ///< log factor
  double c_const = 1.0;       ///< free positive constant in the radius formula
  std::int64_t max_epochs = 10'000;
  InnerMode mode = InnerMode::theory;
  std::uint64_t seed = 0;
  std::optional<double> c_hat;       ///< bound on |y*| at epoch starts; default 10 (1 + |y_warm|)
  std::int64_t inner_hard_cap = 1'000'000;
  std::optional<double> delta_hat;   ///< suboptimality guess, only feeds max_epochs
  /// Early stop: end the run at the first query point w_k with |u_k| <= stop_below
  /// (termination target_reached, w_hat = w_k). Off by default.
  std::optional<double> stop_below;

  /// eta > 0, 0 < theta <= 1, B > 0, K >= 1, sigma > 0, r >= 0, 0 < zeta < 1,
  /// alpha > 0, 0 <= beta < 1, max_epochs >= 1, stop_below > 0 if set. Throws ConfigError.
  void validate() const;
};

/// ceil(10 delta_hat sqrt(rho~) eps^{-3/2}) when delta_hat is given, else 10^4.
std::int64_t default_max_epochs(std::optional<double> delta_hat, double rho_tilde, double epsilon);

/// First-order schedule:
///   eta = 1/(4 L~), B = sqrt(eps/rho~), theta = 4 (rho~ eps eta^2)^{1/4},
///   K = ceil(1/theta), alpha = 1/ell, beta = (sqrt(kappa)-1)/(sqrt(kappa)+1), sigma = eps^2.
/// theta is capped at 1 (it reaches 2 at eps = L~^2/rho~).
/// Throws ConfigError for rho~ = 0 or eps > L~^2/rho~.
SolverConfig default_config_fosp(const DerivedConstants& dc, const SmoothnessConstants& sc, double epsilon);

/// Second-order schedule with perturbation:
///   chi = ceil(log(d_x/(zeta eps))), eta = 1/(4 L~), theta = (rho~ eps eta^2)^{1/4} / 2,
///   K = ceil(2 chi/theta), B = sqrt(eps/rho~)/(288 chi^2),
///   r = min{L~ B^2/(4C), (B+B^2)/sqrt(2), theta B/(20K), sqrt(theta B^2/(2K))},
///   sigma = min{rho~ B zeta r theta/(2 sqrt(d_x)), eps^2}.
SolverConfig default_config_sosp(const DerivedConstants& dc, const SmoothnessConstants& sc, double epsilon,
                                 double zeta, std::size_t d_x, double c_const = 1.0);

}  // namespace rahgd
