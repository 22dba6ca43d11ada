#include "rahgd/problems/quad_bilevel.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "rahgd/core/errors.hpp"

namespace rahgd {

void QuadBilevelParams::validate() const {
  if (dim_x == 0 || dim_y == 0) throw ConfigError("quad_bilevel: dimensions must be positive");
  if (a_matrix.size() != dim_x * dim_y) throw ConfigError("quad_bilevel: A has the wrong size");
  if (b_vec.size() != dim_y) throw ConfigError("quad_bilevel: b has the wrong size");
  for (double a : a_matrix) {
    if (!std::isfinite(a)) throw ConfigError("quad_bilevel: A has non-finite entries");
  }
  if (!b_vec.all_finite()) throw ConfigError("quad_bilevel: b has non-finite entries");
  if (!(box_radius >= 0.0) || !std::isfinite(box_radius)) throw ConfigError("quad_bilevel: bad box radius");
}

QuadBilevelParams random_quad_params(std::size_t dim_x, std::size_t dim_y, std::uint64_t seed, double scale) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  QuadBilevelParams p;
  p.dim_x = dim_x;
  p.dim_y = dim_y;
  p.a_matrix.resize(dim_x * dim_y);
  const double s = scale / std::sqrt(static_cast<double>(dim_x));
  for (double& a : p.a_matrix) a = s * normal(rng);
  p.b_vec = Vector::zeros(dim_y);
  for (std::size_t i = 0; i < dim_y; ++i) p.b_vec[i] = normal(rng);
  return p;
}

QuadBilevelProblem::QuadBilevelProblem(QuadBilevelParams params) : params_(std::move(params)) {
  params_.validate();
  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const Eigen::Map<const RowMajor> a(params_.a_matrix.data(), static_cast<Eigen::Index>(params_.dim_y),
                                     static_cast<Eigen::Index>(params_.dim_x));
  const Eigen::MatrixXd ata = a.transpose() * a;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(ata, Eigen::EigenvaluesOnly);
  sigma_max_sq_ = std::max(0.0, eig.eigenvalues().maxCoeff());

  constants_.ell = 1.0 + sigma_max_sq_;
  constants_.mu = 1.0;
  constants_.rho = 0.0;
  constants_.nu = 0.0;
  constants_.m_bound = std::sqrt(params_.box_radius * params_.box_radius + norm_sq(params_.b_vec));
  constants_.validate();
}

Vector QuadBilevelProblem::apply_a(const Vector& x) const {
  Vector out = Vector::zeros(params_.dim_y);
  for (std::size_t i = 0; i < params_.dim_y; ++i) {
    const double* row = params_.a_matrix.data() + i * params_.dim_x;
    double acc = 0.0;
    for (std::size_t j = 0; j < params_.dim_x; ++j) acc += row[j] * x[j];
    out[i] = acc;
  }
  return out;
}

Vector QuadBilevelProblem::apply_at(const Vector& y) const {
  Vector out = Vector::zeros(params_.dim_x);
  for (std::size_t i = 0; i < params_.dim_y; ++i) {
    const double* row = params_.a_matrix.data() + i * params_.dim_x;
    for (std::size_t j = 0; j < params_.dim_x; ++j) out[j] += row[j] * y[i];
  }
  return out;
}

Vector QuadBilevelProblem::grad_f_x(const Vector& x, const Vector&) const { return x; }
Vector QuadBilevelProblem::grad_f_y(const Vector&, const Vector&) const { return params_.b_vec; }
Vector QuadBilevelProblem::grad_g_y(const Vector& x, const Vector& y) const { return y - apply_a(x); }
Vector QuadBilevelProblem::hvp_g_yy(const Vector&, const Vector&, const Vector& v) const { return v; }
Vector QuadBilevelProblem::jvp_g_xy(const Vector&, const Vector&, const Vector& v) const { return -apply_at(v); }

std::optional<double> QuadBilevelProblem::value_f(const Vector& x, const Vector& y) const {
  return 0.5 * norm_sq(x) + dot(params_.b_vec, y);
}

std::optional<double> QuadBilevelProblem::value_g(const Vector& x, const Vector& y) const {
  return 0.5 * norm_sq(y - apply_a(x));
}

Vector QuadBilevelProblem::grad_phi(const Vector& x) const { return x + apply_at(params_.b_vec); }

double QuadBilevelProblem::phi(const Vector& x) const {
  return 0.5 * norm_sq(x) + dot(params_.b_vec, apply_a(x));
}

Vector QuadBilevelProblem::x_star() const { return -apply_at(params_.b_vec); }

}  // namespace rahgd
