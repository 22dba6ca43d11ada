#include "rahgd/problems/wshape.hpp"

#include <cmath>

#include "rahgd/core/errors.hpp"

namespace rahgd {

void WShapeParams::validate() const {
  if (!(eps_w > 0.0) || !std::isfinite(eps_w)) throw ConfigError("wshape: eps_w must be positive");
  if (!(l_w >= 1.0) || !std::isfinite(l_w)) throw ConfigError("wshape: l_w must be >= 1");
}

double w_shape(double x, const WShapeParams& p) {
  const double s = std::sqrt(p.eps_w);
  const double e32 = p.eps_w * s;
  const double L = p.l_w;
  if (x <= -L * s) {
    const double u = x + (L + 1.0) * s;
    return s * u * u - u * u * u / 3.0 - (3.0 * L + 1.0) * e32 / 3.0;
  }
  if (x <= -s) return p.eps_w * x + e32 / 3.0;
  if (x <= 0.0) return -s * x * x - x * x * x / 3.0;
  if (x <= s) return -s * x * x + x * x * x / 3.0;
  if (x <= L * s) return -p.eps_w * x + e32 / 3.0;
  const double u = x - (L + 1.0) * s;
  return s * u * u + u * u * u / 3.0 - (3.0 * L + 1.0) * e32 / 3.0;
}

double w_shape_d1(double x, const WShapeParams& p) {
  const double s = std::sqrt(p.eps_w);
  const double L = p.l_w;
  if (x <= -L * s) {
    const double u = x + (L + 1.0) * s;
    return 2.0 * s * u - u * u;
  }
  if (x <= -s) return p.eps_w;
  if (x <= 0.0) return -2.0 * s * x - x * x;
  if (x <= s) return -2.0 * s * x + x * x;
  if (x <= L * s) return -p.eps_w;
  const double u = x - (L + 1.0) * s;
  return 2.0 * s * u + u * u;
}

double w_shape_d2(double x, const WShapeParams& p) {
  const double s = std::sqrt(p.eps_w);
  const double L = p.l_w;
  if (x <= -L * s) return 2.0 * s - 2.0 * (x + (L + 1.0) * s);
  if (x <= -s) return 0.0;
  if (x <= 0.0) return -2.0 * s - 2.0 * x;
  if (x <= s) return -2.0 * s + 2.0 * x;
  if (x <= L * s) return 0.0;
  return 2.0 * s + 2.0 * (x - (L + 1.0) * s);
}

WShapeProblem::WShapeProblem(WShapeParams params, bool with_w) : params_(params), with_w_(with_w) {
  params_.validate();
  // |w''| on the region the solvers visit: the cubic pieces reach 2 sqrt(eps) + 2 (L+1) eps
  // at the outer minima; the declared ell must dominate it.
  const double s = std::sqrt(params_.eps_w);
  const double w_curv = 2.0 * s + 2.0 * (params_.l_w + 1.0) * params_.eps_w;
  if (with_w_ && w_curv > constants().ell) {
    throw ConstantsError("wshape: w'' bound exceeds the declared ell = 20");
  }
}

SmoothnessConstants WShapeProblem::constants() const {
  SmoothnessConstants c;
  c.ell = 20.0;
  c.mu = 10.0;
  c.rho = with_w_ ? 2.0 : 0.0;
  c.m_bound = 1.0;
  c.nu = 0.0;
  return c;
}

Vector WShapeProblem::grad_fbar_x(const Vector& x, const Vector& y) const {
  return Vector{y[0], y[1], with_w_ ? w_shape_d1(x[2], params_) : 0.0};
}

Vector WShapeProblem::grad_fbar_y(const Vector& x, const Vector& y) const {
  return Vector{-20.0 * y[0] + x[0], -10.0 * y[1] + x[1]};
}

std::optional<double> WShapeProblem::value(const Vector& x, const Vector& y) const {
  const double w = with_w_ ? w_shape(x[2], params_) : 0.0;
  return w - 10.0 * y[0] * y[0] + x[0] * y[0] - 5.0 * y[1] * y[1] + x[1] * y[1];
}

Vector WShapeProblem::grad_f_x(const Vector& x, const Vector& y) const { return grad_fbar_x(x, y); }
Vector WShapeProblem::grad_f_y(const Vector& x, const Vector& y) const { return grad_fbar_y(x, y); }
Vector WShapeProblem::grad_g_y(const Vector& x, const Vector& y) const { return -grad_fbar_y(x, y); }

Vector WShapeProblem::hvp_g_yy(const Vector&, const Vector&, const Vector& v) const {
  return Vector{20.0 * v[0], 10.0 * v[1]};
}

Vector WShapeProblem::jvp_g_xy(const Vector&, const Vector&, const Vector& v) const {
  return Vector{-v[0], -v[1], 0.0};
}

std::optional<double> WShapeProblem::value_f(const Vector& x, const Vector& y) const { return value(x, y); }
std::optional<double> WShapeProblem::value_g(const Vector& x, const Vector& y) const { return -*value(x, y); }

Vector WShapeProblem::y_star(const Vector& x) { return Vector{x[0] / 20.0, x[1] / 10.0}; }

double WShapeProblem::phi_bar(const Vector& x) const {
  const double w = with_w_ ? w_shape(x[2], params_) : 0.0;
  return w + x[0] * x[0] / 40.0 + x[1] * x[1] / 20.0;
}

Vector WShapeProblem::grad_phi_bar(const Vector& x) const {
  return Vector{x[0] / 20.0, x[1] / 10.0, with_w_ ? w_shape_d1(x[2], params_) : 0.0};
}

}  // namespace rahgd
