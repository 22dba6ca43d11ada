#pragma once

#include <cstdint>
#include <optional>

#include "rahgd/core/oracle.hpp"
#include "rahgd/hypergrad/inner_solve.hpp"

namespace rahgd {

/// u = grad_x f(w, y) - d2g/dxdy(w, y) v. Costs one gc_f and one jv_g.
Vector inexact_hypergradient(BilevelOracle& oracle, const Vector& w, const Vector& y, const Vector& v);

/// Inner-solve spec that certifies accuracy `tol` for the problem's own
/// constants (adaptive mode, alpha = 1/ell, beta from kappa).
InnerSolveSpec certified_spec(const SmoothnessConstants& sc, double tol,
                              std::int64_t hard_cap = 1'000'000);

/// High-accuracy hypergradient for verification: adaptive inner solve at
/// sigma = tol followed by inexact_hypergradient, so |result - grad Phi(x)| <= tol.
/// `warm` (optional) seeds and receives the inner solutions.
Vector exact_hypergradient(BilevelOracle& oracle, const Vector& x, double tol,
                           InnerState* warm = nullptr);

/// Phi(x) = f(x, y*(x)) with |y - y*| <= tol / (2 L~). Empty if the problem
/// has no value_f.
std::optional<double> phi_value(BilevelOracle& oracle, const Vector& x, double tol,
                                Vector* y_warm = nullptr);

/// Danskin gradient grad_x fbar(x, y*(x)) of the max-function, with y
/// certified by |grad_y fbar| <= mu tol / (2 L~) using minimax constants.
Vector exact_minimax_gradient(MinimaxOracle& oracle, const Vector& x, double tol,
                              Vector* y_warm = nullptr);

/// max_y fbar(x, y) at the same accuracy. Empty without a value oracle.
std::optional<double> minimax_phi_value(MinimaxOracle& oracle, const Vector& x, double tol,
                                        Vector* y_warm = nullptr);

/// Maximises fbar(x, .) by AGD on -fbar from y0 with the given parameters.
AgdResult solve_minimax_inner(MinimaxOracle& oracle, const Vector& x, Vector y0, const AgdParams& params);

}  // namespace rahgd
