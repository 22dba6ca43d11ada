#pragma once

#include "rahgd/core/oracle.hpp"
#include "rahgd/problems/dataset.hpp"
#include "rahgd/problems/hyperclean.hpp"

namespace rahgd {

struct HyperoptParams {
  Dataset train_set;
  Dataset val_set;
  double lambda_box = 10.0;  ///< |lambda|_inf bound used for the declared mu and ell
  double w_box = 10.0;       ///< |w| bound used for the declared constants
  KernelBackend backend = KernelBackend::parallel;

  void validate() const;
};

/// Per-feature regularisation weights for softmax regression. x = lambda in
/// R^p, y = vec(w) in R^{c p}, w row-major c x p.
///   g(lambda, w) = (1/N_tr) sum_i CE_i(w) + 1/(2 c p) sum_{j,k} exp(lambda_k) w_jk^2
///   f(lambda, w) = (1/N_val) sum_i CE_i^val(w)
class HyperoptProblem final : public BilevelProblem {
 public:
  explicit HyperoptProblem(HyperoptParams params);

  std::size_t dim_x() const override { return params_.train_set.num_features; }
  std::size_t dim_y() const override { return params_.train_set.num_classes * params_.train_set.num_features; }

  Vector grad_f_x(const Vector& x, const Vector& y) const override;
  Vector grad_f_y(const Vector& x, const Vector& y) const override;
  Vector grad_g_y(const Vector& x, const Vector& y) const override;
  Vector hvp_g_yy(const Vector& x, const Vector& y, const Vector& v) const override;
  Vector jvp_g_xy(const Vector& x, const Vector& y, const Vector& v) const override;
  std::optional<double> value_f(const Vector& x, const Vector& y) const override;
  std::optional<double> value_g(const Vector& x, const Vector& y) const override;

  /// mu = exp(-lambda_box) / (c p); ell, rho, nu from the lambda and w boxes.
  SmoothnessConstants constants() const override { return constants_; }
  std::string name() const override { return "hyperopt"; }

  const HyperoptParams& params() const { return params_; }

 private:
  double reg_scale() const;

  HyperoptParams params_;
  SmoothnessConstants constants_;
};

}  // namespace rahgd
