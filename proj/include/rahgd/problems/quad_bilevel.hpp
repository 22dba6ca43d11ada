#pragma once

#include <cstdint>
#include <vector>

#include "rahgd/core/oracle.hpp"

namespace rahgd {

struct QuadBilevelParams {
  std::size_t dim_x = 0;
  std::size_t dim_y = 0;
  std::vector<double> a_matrix;  ///< dim_y x dim_x, row-major
  Vector b_vec;                  ///< size dim_y
  double box_radius = 10.0;      ///< |x| bound used for the declared M

  void validate() const;
};

/// Entries of A ~ N(0, scale^2 / dim_x), b ~ N(0, 1).
QuadBilevelParams random_quad_params(std::size_t dim_x, std::size_t dim_y, std::uint64_t seed,
                                     double scale = 1.0);

/// f(x, y) = 1/2 |x|^2 + b^T y,  g(x, y) = 1/2 |y - A x|^2.
class QuadBilevelProblem final : public BilevelProblem {
 public:
  explicit QuadBilevelProblem(QuadBilevelParams params);

  std::size_t dim_x() const override { return params_.dim_x; }
  std::size_t dim_y() const override { return params_.dim_y; }

  Vector grad_f_x(const Vector& x, const Vector& y) const override;
  Vector grad_f_y(const Vector& x, const Vector& y) const override;
  Vector grad_g_y(const Vector& x, const Vector& y) const override;
  Vector hvp_g_yy(const Vector& x, const Vector& y, const Vector& v) const override;
  Vector jvp_g_xy(const Vector& x, const Vector& y, const Vector& v) const override;
  std::optional<double> value_f(const Vector& x, const Vector& y) const override;
  std::optional<double> value_g(const Vector& x, const Vector& y) const override;

  /// ell = 1 + sigma_max(A)^2 (largest eigenvalue of the joint Hessian of g),
  /// mu = 1, rho = nu = 0, M = sqrt(R^2 + |b|^2).
  SmoothnessConstants constants() const override { return constants_; }
  std::string name() const override { return "quad_bilevel"; }

  const QuadBilevelParams& params() const { return params_; }
  double sigma_max_sq() const { return sigma_max_sq_; }

  Vector apply_a(const Vector& x) const;
  Vector apply_at(const Vector& y) const;

  /// Closed forms: y*(x) = A x, grad Phi(x) = x + A^T b, Phi(x) = 1/2 |x|^2 + b^T A x.
  Vector y_star(const Vector& x) const { return apply_a(x); }
  Vector grad_phi(const Vector& x) const;
  double phi(const Vector& x) const;
  Vector x_star() const;

 private:
  QuadBilevelParams params_;
  double sigma_max_sq_ = 0.0;
  SmoothnessConstants constants_;
};

}  // namespace rahgd
