#pragma once

#include "rahgd/core/oracle.hpp"

namespace rahgd {

struct WShapeParams {
  double eps_w = 0.01;
  double l_w = 5.0;

  void validate() const;
};

/// Piecewise quadratic-cubic-linear W-shape function and its derivatives.
double w_shape(double x, const WShapeParams& p);
double w_shape_d1(double x, const WShapeParams& p);
double w_shape_d2(double x, const WShapeParams& p);

/// fbar(x, y) = w(x3) - 10 y1^2 + x1 y1 - 5 y2^2 + x2 y2, with x in R^3, y in R^2.
///
/// Implements both views: as a minimax problem, and as the equivalent
/// bilevel problem f = fbar, g = -fbar, so the bilevel verification
/// machinery (exact_hypergradient, verify_stationarity) applies to it.
/// With `with_w = false` the w(x3) term is dropped (bilinear-regularised toy).
class WShapeProblem final : public MinimaxProblem, public BilevelProblem {
 public:
  explicit WShapeProblem(WShapeParams params = {}, bool with_w = true);

  std::size_t dim_x() const override { return 3; }
  std::size_t dim_y() const override { return 2; }

  Vector grad_fbar_x(const Vector& x, const Vector& y) const override;
  Vector grad_fbar_y(const Vector& x, const Vector& y) const override;
  std::optional<double> value(const Vector& x, const Vector& y) const override;

  Vector grad_f_x(const Vector& x, const Vector& y) const override;
  Vector grad_f_y(const Vector& x, const Vector& y) const override;
  Vector grad_g_y(const Vector& x, const Vector& y) const override;
  Vector hvp_g_yy(const Vector& x, const Vector& y, const Vector& v) const override;
  Vector jvp_g_xy(const Vector& x, const Vector& y, const Vector& v) const override;
  std::optional<double> value_f(const Vector& x, const Vector& y) const override;
  std::optional<double> value_g(const Vector& x, const Vector& y) const override;

  /// mu = 10, ell = 20, rho = 2 (|w'''| <= 2), M = 1 (box bound, only feeds L~).
  SmoothnessConstants constants() const override;
  std::string name() const override { return with_w_ ? "wshape" : "bilinear"; }

  const WShapeParams& params() const { return params_; }

  /// Closed forms: y*(x) = (x1/20, x2/10), Phibar(x) = w(x3) + x1^2/40 + x2^2/20.
  static Vector y_star(const Vector& x);
  double phi_bar(const Vector& x) const;
  Vector grad_phi_bar(const Vector& x) const;

 private:
  WShapeParams params_;
  bool with_w_;
};

}  // namespace rahgd
