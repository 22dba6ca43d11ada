#include "rahgd/problems/hyperclean.hpp"

#include <cmath>
#include <vector>

#include "rahgd/core/errors.hpp"

namespace rahgd {

namespace data_term {

double value_grad(KernelBackend b, const kernels::SampleView& s, std::span<const double> weights,
                  std::span<const double> w, std::span<double> grad) {
  return b == KernelBackend::serial ? kernels::serial::ce_value_grad(s, weights, w, grad)
                                    : kernels::ce_value_grad(s, weights, w, grad);
}

double value(KernelBackend b, const kernels::SampleView& s, std::span<const double> weights,
             std::span<const double> w) {
  return b == KernelBackend::serial ? kernels::serial::ce_value(s, weights, w) : kernels::ce_value(s, weights, w);
}

void hvp(KernelBackend b, const kernels::SampleView& s, std::span<const double> weights, std::span<const double> w,
         std::span<const double> v, std::span<double> out) {
  if (b == KernelBackend::serial) {
    kernels::serial::ce_hvp(s, weights, w, v, out);
  } else {
    kernels::ce_hvp(s, weights, w, v, out);
  }
}

void sample_grad_dots(KernelBackend b, const kernels::SampleView& s, std::span<const double> w,
                      std::span<const double> v, std::span<double> out) {
  if (b == KernelBackend::serial) {
    kernels::serial::ce_sample_grad_dots(s, w, v, out);
  } else {
    kernels::ce_sample_grad_dots(s, w, v, out);
  }
}

}  // namespace data_term

namespace {

double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

double sigmoid_d1(double t) {
  const double s = sigmoid(t);
  return s * (1.0 - s);
}

}  // namespace

void HypercleanParams::validate() const {
  train_set.validate();
  val_set.validate();
  if (train_set.num_features != val_set.num_features || train_set.num_classes != val_set.num_classes) {
    throw ConfigError("hyperclean: train and validation shapes differ");
  }
  if (!(c_r > 0.0) || !std::isfinite(c_r)) throw ConfigError("hyperclean: c_r must be positive");
  if (!(corruption_rate >= 0.0 && corruption_rate <= 1.0)) throw ConfigError("hyperclean: corruption rate outside [0, 1]");
  if (!(w_box > 0.0) || !std::isfinite(w_box)) throw ConfigError("hyperclean: w_box must be positive");
}

HypercleanProblem::HypercleanProblem(HypercleanParams params) : params_(std::move(params)) {
  params_.validate();
  const double r = std::max(params_.train_set.max_feature_norm(), params_.val_set.max_feature_norm());
  const double ce_max = std::log(static_cast<double>(params_.train_set.num_classes)) + 2.0 * r * params_.w_box;
  constexpr double kSigmoidD2Max = 0.0962;
  constants_.ell = 0.5 * r * r + 2.0 * params_.c_r + std::sqrt(2.0) * r / 4.0 + kSigmoidD2Max * ce_max;
  constants_.mu = 2.0 * params_.c_r;
  constants_.m_bound = std::sqrt(2.0) * r;
  constants_.rho = r * r * r + r * r + r + kSigmoidD2Max * ce_max;
  constants_.nu = r * r * r * r + r * r * r + r * r + r + 0.125 * ce_max;
  constants_.validate();
}

Vector HypercleanProblem::train_weights(const Vector& x) const {
  const double inv_n = 1.0 / static_cast<double>(params_.train_set.num_samples);
  Vector w(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) w[i] = sigmoid(x[i]) * inv_n;
  return w;
}

Vector HypercleanProblem::grad_f_x(const Vector&, const Vector&) const { return Vector::zeros(dim_x()); }

Vector HypercleanProblem::grad_f_y(const Vector&, const Vector& y) const {
  const Dataset& val = params_.val_set;
  const Vector weights(val.num_samples, 1.0 / static_cast<double>(val.num_samples));
  Vector grad(dim_y());
  data_term::value_grad(params_.backend, val.view(), weights.span(), y.span(), grad.span());
  return grad;
}

Vector HypercleanProblem::grad_g_y(const Vector& x, const Vector& y) const {
  const Vector weights = train_weights(x);
  Vector grad(dim_y());
  data_term::value_grad(params_.backend, params_.train_set.view(), weights.span(), y.span(), grad.span());
  axpy_inplace(2.0 * params_.c_r, y, grad);
  return grad;
}

Vector HypercleanProblem::hvp_g_yy(const Vector& x, const Vector& y, const Vector& v) const {
  const Vector weights = train_weights(x);
  Vector out(dim_y());
  data_term::hvp(params_.backend, params_.train_set.view(), weights.span(), y.span(), v.span(), out.span());
  axpy_inplace(2.0 * params_.c_r, v, out);
  return out;
}

Vector HypercleanProblem::jvp_g_xy(const Vector& x, const Vector& y, const Vector& v) const {
  Vector out(dim_x());
  data_term::sample_grad_dots(params_.backend, params_.train_set.view(), y.span(), v.span(), out.span());
  const double inv_n = 1.0 / static_cast<double>(params_.train_set.num_samples);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= sigmoid_d1(x[i]) * inv_n;
  return out;
}

std::optional<double> HypercleanProblem::value_f(const Vector&, const Vector& y) const {
  const Dataset& val = params_.val_set;
  const Vector weights(val.num_samples, 1.0 / static_cast<double>(val.num_samples));
  return data_term::value(params_.backend, val.view(), weights.span(), y.span());
}

std::optional<double> HypercleanProblem::value_g(const Vector& x, const Vector& y) const {
  const Vector weights = train_weights(x);
  return data_term::value(params_.backend, params_.train_set.view(), weights.span(), y.span()) +
         params_.c_r * norm_sq(y);
}

}  // namespace rahgd
