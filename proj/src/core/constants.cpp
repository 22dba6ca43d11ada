#include "rahgd/core/constants.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rahgd/core/errors.hpp"

namespace rahgd {

void SmoothnessConstants::validate() const {
  const double fields[] = {ell, mu, rho, m_bound, nu};
  for (double v : fields) {
    if (!std::isfinite(v) || v < 0.0) {
      throw ConstantsError("smoothness constants must be finite and nonnegative");
    }
  }
  if (!(mu > 0.0)) throw ConstantsError("strong-convexity modulus mu must be positive");
  if (ell < mu) {
    throw ConstantsError("gradient-Lipschitz constant ell=" + std::to_string(ell) +
                         " is below mu=" + std::to_string(mu));
  }
}

DerivedConstants derive_constants(const SmoothnessConstants& c) {
  c.validate();
  const double l = c.ell;
  const double mu = c.mu;
  const double rho = c.rho;
  const double m = c.m_bound;
  const double nu = c.nu;
  const double mu2 = mu * mu;
  const double mu3 = mu2 * mu;

  DerivedConstants dc;
  dc.kappa = l / mu;
  dc.l_tilde = l + (2.0 * l * l + rho * m) / mu + (l * l * l + 2.0 * rho * l * m) / mu2 +
               rho * l * l * m / mu3;

  const double lift = 1.0 + l / mu;
  const double first =
      rho + (2.0 * l * rho + m * nu) / mu + (2.0 * m * l * nu + rho * l * l) / mu2 + m * l * l * nu / mu3;
  const double second =
      2.0 * l * rho / mu + (4.0 * m * rho * rho + 2.0 * l * l * rho) / mu2 + 2.0 * m * l * rho * rho / mu3;
  const double third = m * rho * rho / mu2 + rho * l / mu;
  dc.rho_tilde = first * lift + second * lift * lift + third * lift * lift * lift;
  return dc;
}

DerivedConstants derive_minimax_constants(const SmoothnessConstants& c) {
  c.validate();
  DerivedConstants dc;
  dc.kappa = c.ell / c.mu;
  dc.l_tilde = (dc.kappa + 1.0) * c.ell;
  dc.rho_tilde = 4.0 * std::sqrt(2.0) * dc.kappa * dc.kappa * dc.kappa * c.rho;
  return dc;
}

DerivedConstants with_rho_tilde_floor(DerivedConstants dc, double floor) {
  dc.rho_tilde = std::max(dc.rho_tilde, floor);
  return dc;
}

}  // namespace rahgd
