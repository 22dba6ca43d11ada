#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "rahgd/core/vector.hpp"

namespace rahgd {

using GradientFn = std::function<Vector(const Vector&)>;

struct AgdParams {
  double alpha = 1.0;        ///< step size, > 0
  double beta = 0.0;         ///< momentum, in [0, 1)
  std::int64_t t_max = 0;    ///< iteration count (theory) or hard cap (adaptive)
  std::optional<double> tol; ///< gradient-norm stopping threshold; set => adaptive mode

  void validate() const;
};

struct AgdResult {
  Vector z;
  std::int64_t iterations = 0;  ///< update steps taken
  std::int64_t grad_calls = 0;
  bool converged = false;       ///< adaptive: tolerance met; fixed-T: always true
  double last_grad_norm = 0.0;  ///< norm of the last evaluated gradient (adaptive only)
};

/// Nesterov accelerated gradient descent with constant momentum:
///   z_{t+1} = zt_t - alpha grad(zt_t),  zt_{t+1} = z_{t+1} + beta (z_{t+1} - z_t),  zt_0 = z_0.
/// Without `tol` it runs exactly t_max steps and returns z_T. With `tol` it
/// stops at the first t where |grad(zt_t)| <= tol and returns zt_t; if t_max
/// steps pass first it returns z_T with converged = false.
/// Throws DivergenceError on a non-finite gradient.
AgdResult agd(const GradientFn& grad_h, Vector z0, const AgdParams& params);

}  // namespace rahgd
