#pragma once

namespace rahgd {

/// Problem-level smoothness constants, declared by the problem author.
///   ell      gradient-Lipschitz constant of f and g
///   mu       strong-convexity modulus of g(x, .)
///   rho      Lipschitz constant of the second derivatives of f and g
///   m_bound  Lipschitz constant of f
///   nu       Lipschitz constant of the third derivatives of g
struct SmoothnessConstants {
  double ell = 1.0;
  double mu = 1.0;
  double rho = 0.0;
  double m_bound = 0.0;
  double nu = 0.0;

  /// Throws ConstantsError unless ell >= mu > 0 and every field is finite and nonnegative.
  void validate() const;
};

/// Constants of the upper-level objective Phi(x) = f(x, y*(x)).
struct DerivedConstants {
  double kappa = 1.0;      ///< ell / mu
  double l_tilde = 1.0;    ///< gradient-Lipschitz constant of Phi
  double rho_tilde = 0.0;  ///< Hessian-Lipschitz constant of Phi
};

/// Bilevel closed forms:
///   L~ = ell + (2 ell^2 + rho M)/mu + (ell^3 + 2 rho ell M)/mu^2 + rho ell^2 M/mu^3
/// and the three-term rho~ expression in (rho, ell, mu, M, nu).
DerivedConstants derive_constants(const SmoothnessConstants& c);

/// Minimax specialisation: L~ = (kappa + 1) ell, rho~ = 4 sqrt(2) kappa^3 rho.
DerivedConstants derive_minimax_constants(const SmoothnessConstants& c);

/// Raises rho_tilde to at least `floor`. A larger Hessian-Lipschitz constant is
/// still a valid bound, so this is how exactly-quadratic problems (rho~ = 0)
/// are made usable with the default schedules.
DerivedConstants with_rho_tilde_floor(DerivedConstants dc, double floor);

}  // namespace rahgd
