#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "rahgd/core/vector.hpp"

namespace rahgd {

using LinearMapFn = std::function<Vector(const Vector&)>;

struct CgParams {
  std::int64_t t_max = 0;    ///< iteration count (theory) or hard cap (adaptive)
  std::optional<double> tol; ///< residual-norm threshold; set => adaptive mode

  void validate() const;
};

struct CgResult {
  Vector q;
  std::int64_t iterations = 0;
  std::int64_t matvecs = 0;  ///< includes the initial residual product unless q0 == 0
  bool converged = false;
  double residual_norm = 0.0;  ///< |r_T| from the recursion
};

/// Relative residual below which CG exits cleanly instead of dividing by ~0.
inline constexpr double kCgBreakdownRatio = 1e-14;

/// Linear conjugate gradient for A q = b with A symmetric positive definite:
///   r_0 = A q_0 - b, p_0 = -r_0,
///   a_t = r_t.r_t / p_t.A p_t, q_{t+1} = q_t + a_t p_t, r_{t+1} = r_t + a_t A p_t,
///   b_{t+1} = r_{t+1}.r_{t+1} / r_t.r_t, p_{t+1} = -r_{t+1} + b_{t+1} p_t.
/// Exits early when |r_t| <= kCgBreakdownRatio |b| or (adaptive) |r_t| <= tol.
/// Throws NotPositiveDefiniteError when p.A p <= 0.
CgResult cg(const LinearMapFn& apply_a, const Vector& b, Vector q0, const CgParams& params);

}  // namespace rahgd
