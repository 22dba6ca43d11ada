#include "rahgd/subroutines/cg.hpp"

#include <cmath>

#include "rahgd/core/errors.hpp"

namespace rahgd {

void CgParams::validate() const {
  if (t_max < 0) throw ConfigError("CG iteration count must be nonnegative");
  if (tol && !(*tol > 0.0)) throw ConfigError("CG tolerance must be positive");
}

CgResult cg(const LinearMapFn& apply_a, const Vector& b, Vector q0, const CgParams& params) {
  params.validate();
  require_same_size(q0.size(), b.size(), "cg");

  CgResult result;
  Vector q = std::move(q0);
  Vector r = -b;
  if (!q.is_zero()) {
    r += apply_a(q);
    ++result.matvecs;
  }
  Vector p = -r;

  const double breakdown = kCgBreakdownRatio * norm(b);
  double rr = norm_sq(r);

  auto stop_now = [&](double r_norm) {
    if (params.tol && r_norm <= *params.tol) return true;
    return r_norm <= breakdown;
  };

  std::int64_t t = 0;
  for (; t < params.t_max; ++t) {
    if (stop_now(std::sqrt(rr))) break;
    const Vector ap = apply_a(p);
    ++result.matvecs;
    require_same_size(ap.size(), b.size(), "cg");
    const double pap = dot(p, ap);
    if (!std::isfinite(pap)) throw DivergenceError("CG curvature is not finite", t);
    if (pap <= 0.0) throw NotPositiveDefiniteError("CG found p^T A p <= 0: linear map is not SPD");
    const double step = rr / pap;
    axpy_inplace(step, p, q);
    axpy_inplace(step, ap, r);
    const double rr_next = norm_sq(r);
    const double momentum = rr_next / rr;
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = -r[i] + momentum * p[i];
    rr = rr_next;
  }

  result.q = std::move(q);
  result.iterations = t;
  result.residual_norm = std::sqrt(rr);
  result.converged = params.tol ? result.residual_norm <= *params.tol : true;
  if (result.residual_norm <= breakdown) result.converged = true;
  return result;
}

}  // namespace rahgd
