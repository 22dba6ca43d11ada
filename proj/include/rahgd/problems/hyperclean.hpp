#pragma once

#include "rahgd/core/oracle.hpp"
#include "rahgd/problems/dataset.hpp"

namespace rahgd {

enum class KernelBackend { parallel, serial };

struct HypercleanParams {
  Dataset train_set;
  Dataset val_set;
  double c_r = 0.001;
  double corruption_rate = 0.0;  ///< recorded for reporting; the data already carries it
  double w_box = 10.0;           ///< |W| bound used for the declared constants
  KernelBackend backend = KernelBackend::parallel;

  void validate() const;
};

/// Data hyper-cleaning on softmax regression. x = lambda in R^{N_tr} (one
/// logit weight per training sample), y = vec(W) in R^{c d}, W row-major c x d.
///   g(lambda, W) = (1/N_tr) sum_i sigmoid(lambda_i) CE_i(W) + c_r |W|^2
///   f(lambda, W) = (1/N_val) sum_i CE_i^val(W)
class HypercleanProblem final : public BilevelProblem {
 public:
  explicit HypercleanProblem(HypercleanParams params);

  std::size_t dim_x() const override { return params_.train_set.num_samples; }
  std::size_t dim_y() const override { return params_.train_set.num_classes * params_.train_set.num_features; }

  Vector grad_f_x(const Vector& x, const Vector& y) const override;
  Vector grad_f_y(const Vector& x, const Vector& y) const override;
  Vector grad_g_y(const Vector& x, const Vector& y) const override;
  Vector hvp_g_yy(const Vector& x, const Vector& y, const Vector& v) const override;
  Vector jvp_g_xy(const Vector& x, const Vector& y, const Vector& v) const override;
  std::optional<double> value_f(const Vector& x, const Vector& y) const override;
  std::optional<double> value_g(const Vector& x, const Vector& y) const override;

  /// Box-bound constants with R = max feature norm:
  /// ell = R^2/2 + 2 c_r + sqrt(2) R / 4 + 0.0962 (log c + 2 R w_box),
  /// mu = 2 c_r, M = sqrt(2) R, rho and nu polynomial in R.
  SmoothnessConstants constants() const override { return constants_; }
  std::string name() const override { return "hyperclean"; }

  const HypercleanParams& params() const { return params_; }

 private:
  Vector train_weights(const Vector& x) const;

  HypercleanParams params_;
  SmoothnessConstants constants_;
};

/// Shared helpers for the softmax data term, dispatching on backend.
namespace data_term {
double value_grad(KernelBackend b, const kernels::SampleView& s, std::span<const double> weights,
                  std::span<const double> w, std::span<double> grad);
double value(KernelBackend b, const kernels::SampleView& s, std::span<const double> weights,
             std::span<const double> w);
void hvp(KernelBackend b, const kernels::SampleView& s, std::span<const double> weights, std::span<const double> w,
         std::span<const double> v, std::span<double> out);
void sample_grad_dots(KernelBackend b, const kernels::SampleView& s, std::span<const double> w,
                      std::span<const double> v, std::span<double> out);
}  // namespace data_term

}  // namespace rahgd
