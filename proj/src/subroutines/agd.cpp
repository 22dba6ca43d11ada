#include "rahgd/subroutines/agd.hpp"

#include <cmath>

#include "rahgd/core/errors.hpp"

namespace rahgd {

void AgdParams::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ConfigError("AGD step size must be positive");
  if (!(beta >= 0.0 && beta < 1.0)) throw ConfigError("AGD momentum must lie in [0, 1)");
  if (t_max < 0) throw ConfigError("AGD iteration count must be nonnegative");
  if (tol && !(*tol > 0.0)) throw ConfigError("AGD tolerance must be positive");
}

AgdResult agd(const GradientFn& grad_h, Vector z0, const AgdParams& params) {
  params.validate();
  AgdResult result;
  Vector z = std::move(z0);
  Vector z_tilde = z;
  Vector z_next(z.size());

  for (std::int64_t t = 0;; ++t) {
    if (t == params.t_max && !params.tol) break;

    Vector g = grad_h(z_tilde);
    ++result.grad_calls;
    require_same_size(g.size(), z.size(), "agd");
    if (!g.all_finite()) throw DivergenceError("AGD gradient is not finite", t);

    if (params.tol) {
      result.last_grad_norm = norm(g);
      if (result.last_grad_norm <= *params.tol) {
        result.z = std::move(z_tilde);
        result.iterations = t;
        result.converged = true;
        return result;
      }
      if (t == params.t_max) break;
    }

    for (std::size_t i = 0; i < z.size(); ++i) {
      z_next[i] = z_tilde[i] - params.alpha * g[i];
      z_tilde[i] = z_next[i] + params.beta * (z_next[i] - z[i]);
    }
    std::swap(z, z_next);
    result.iterations = t + 1;
  }

  result.z = std::move(z);
  result.converged = !params.tol;
  return result;
}

}  // namespace rahgd
