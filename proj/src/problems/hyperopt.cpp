#include "rahgd/problems/hyperopt.hpp"

#include <cmath>

#include "rahgd/core/errors.hpp"

namespace rahgd {

void HyperoptParams::validate() const {
  train_set.validate();
  val_set.validate();
  if (train_set.num_features != val_set.num_features || train_set.num_classes != val_set.num_classes) {
    throw ConfigError("hyperopt: train and validation shapes differ");
  }
  if (!(lambda_box >= 0.0) || !std::isfinite(lambda_box)) throw ConfigError("hyperopt: lambda_box must be >= 0");
  if (!(w_box > 0.0) || !std::isfinite(w_box)) throw ConfigError("hyperopt: w_box must be positive");
}

HyperoptProblem::HyperoptProblem(HyperoptParams params) : params_(std::move(params)) {
  params_.validate();
  const double r = std::max(params_.train_set.max_feature_norm(), params_.val_set.max_feature_norm());
  const double hi = std::exp(params_.lambda_box) * reg_scale();
  const double reg = hi * (1.0 + params_.w_box + 0.5 * params_.w_box * params_.w_box);
  constants_.mu = std::exp(-params_.lambda_box) * reg_scale();
  constants_.ell = 0.5 * r * r + reg;
  constants_.m_bound = std::sqrt(2.0) * r;
  constants_.rho = r * r * r + reg;
  constants_.nu = r * r * r * r + reg;
  constants_.validate();
}

double HyperoptProblem::reg_scale() const {
  return 1.0 / static_cast<double>(params_.train_set.num_classes * params_.train_set.num_features);
}

Vector HyperoptProblem::grad_f_x(const Vector&, const Vector&) const { return Vector::zeros(dim_x()); }

Vector HyperoptProblem::grad_f_y(const Vector&, const Vector& y) const {
  const Dataset& val = params_.val_set;
  const Vector weights(val.num_samples, 1.0 / static_cast<double>(val.num_samples));
  Vector grad(dim_y());
  data_term::value_grad(params_.backend, val.view(), weights.span(), y.span(), grad.span());
  return grad;
}

Vector HyperoptProblem::grad_g_y(const Vector& x, const Vector& y) const {
  const Dataset& tr = params_.train_set;
  const Vector weights(tr.num_samples, 1.0 / static_cast<double>(tr.num_samples));
  Vector grad(dim_y());
  data_term::value_grad(params_.backend, tr.view(), weights.span(), y.span(), grad.span());
  const std::size_t p = tr.num_features;
  const double s = reg_scale();
  for (std::size_t j = 0; j < tr.num_classes; ++j) {
    for (std::size_t k = 0; k < p; ++k) grad[j * p + k] += s * std::exp(x[k]) * y[j * p + k];
  }
  return grad;
}

Vector HyperoptProblem::hvp_g_yy(const Vector& x, const Vector& y, const Vector& v) const {
  const Dataset& tr = params_.train_set;
  const Vector weights(tr.num_samples, 1.0 / static_cast<double>(tr.num_samples));
  Vector out(dim_y());
  data_term::hvp(params_.backend, tr.view(), weights.span(), y.span(), v.span(), out.span());
  const std::size_t p = tr.num_features;
  const double s = reg_scale();
  for (std::size_t j = 0; j < tr.num_classes; ++j) {
    for (std::size_t k = 0; k < p; ++k) out[j * p + k] += s * std::exp(x[k]) * v[j * p + k];
  }
  return out;
}

Vector HyperoptProblem::jvp_g_xy(const Vector& x, const Vector& y, const Vector& v) const {
  const std::size_t p = dim_x();
  const std::size_t c = params_.train_set.num_classes;
  const double s = reg_scale();
  Vector out = Vector::zeros(p);
  for (std::size_t k = 0; k < p; ++k) {
    double acc = 0.0;
    for (std::size_t j = 0; j < c; ++j) acc += y[j * p + k] * v[j * p + k];
    out[k] = s * std::exp(x[k]) * acc;
  }
  return out;
}

std::optional<double> HyperoptProblem::value_f(const Vector&, const Vector& y) const {
  const Dataset& val = params_.val_set;
  const Vector weights(val.num_samples, 1.0 / static_cast<double>(val.num_samples));
  return data_term::value(params_.backend, val.view(), weights.span(), y.span());
}

std::optional<double> HyperoptProblem::value_g(const Vector& x, const Vector& y) const {
  const Dataset& tr = params_.train_set;
  const Vector weights(tr.num_samples, 1.0 / static_cast<double>(tr.num_samples));
  double reg = 0.0;
  const std::size_t p = tr.num_features;
  for (std::size_t j = 0; j < tr.num_classes; ++j) {
    for (std::size_t k = 0; k < p; ++k) reg += std::exp(x[k]) * y[j * p + k] * y[j * p + k];
  }
  return data_term::value(params_.backend, tr.view(), weights.span(), y.span()) + 0.5 * reg_scale() * reg;
}

}  // namespace rahgd
