#include "rahgd/harness/stationarity.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "rahgd/core/errors.hpp"
#include "rahgd/hypergrad/hypergradient.hpp"

namespace rahgd {

StationarityReport verify_stationarity(const CertifiedGradientFn& grad, const Vector& x, double l_tilde,
                                       double rho_tilde, double epsilon, const StationarityOptions& opts) {
  if (!(epsilon > 0.0)) throw ConfigError("verify_stationarity: epsilon must be positive");
  StationarityReport rep;
  rep.epsilon = epsilon;
  rep.grad_tol = epsilon * opts.grad_tol_ratio;
  rep.grad_norm = norm(grad(x, rep.grad_tol));
  rep.sosp_threshold = -1.011 * std::sqrt(rho_tilde * epsilon);
  rep.fosp_pass = rep.grad_norm + rep.grad_tol <= epsilon;

  if (!opts.estimate_lambda_min) return rep;

  const std::size_t d = x.size();
  rep.fd_step = opts.fd_rel_step * (1.0 + norm(x));
  // The finite-difference quotient divides gradient errors by h; certify the
  // probes tightly enough that this noise stays far below the residual target.
  rep.hessian_probe_tol = std::min(rep.grad_tol, 1e-6 * rep.fd_step);
  const double h = rep.fd_step;

  auto apply_shifted = [&](const Vector& v) {
    const Vector gp = grad(axpy(h, v, x), rep.hessian_probe_tol);
    const Vector gm = grad(axpy(-h, v, x), rep.hessian_probe_tol);
    Vector hv = gp - gm;
    hv *= 1.0 / (2.0 * h);
    Vector out = v * l_tilde;
    out -= hv;
    return out;
  };

  std::mt19937_64 rng(opts.probe_seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(d);
  for (std::size_t i = 0; i < d; ++i) v[i] = normal(rng);
  v *= 1.0 / norm(v);

  double q = 0.0;
  for (std::int64_t it = 1; it <= opts.max_power_iters; ++it) {
    const Vector mv = apply_shifted(v);
    q = dot(v, mv);
    rep.eig_residual = norm(axpy(-q, v, mv));
    rep.eig_iterations = it;
    const double n = norm(mv);
    if (!(n > 0.0) || !std::isfinite(n)) break;
    if (it >= opts.min_power_iters && rep.eig_residual <= opts.residual_tol) {
      rep.eig_converged = true;
      break;
    }
    v = mv * (1.0 / n);
  }
  rep.lambda_min_est = l_tilde - q;
  rep.sosp_pass = rep.fosp_pass && rep.lambda_min_est >= rep.sosp_threshold;
  return rep;
}

StationarityReport verify_stationarity(const BilevelProblem& problem, const Vector& x, const DerivedConstants& dc,
                                       double epsilon, const StationarityOptions& opts) {
  BilevelOracle oracle(problem);
  InnerState warm{Vector::zeros(problem.dim_y()), Vector::zeros(problem.dim_y())};
  auto grad = [&](const Vector& p, double tol) { return exact_hypergradient(oracle, p, tol, &warm); };
  StationarityReport rep = verify_stationarity(grad, x, dc.l_tilde, dc.rho_tilde, epsilon, opts);
  rep.verification_counters = oracle.counters();
  return rep;
}

StationarityReport verify_stationarity(const MinimaxProblem& problem, const Vector& x, const DerivedConstants& dc,
                                       double epsilon, const StationarityOptions& opts) {
  MinimaxOracle oracle(problem);
  Vector warm = Vector::zeros(problem.dim_y());
  auto grad = [&](const Vector& p, double tol) { return exact_minimax_gradient(oracle, p, tol, &warm); };
  StationarityReport rep = verify_stationarity(grad, x, dc.l_tilde, dc.rho_tilde, epsilon, opts);
  rep.verification_counters = oracle.counters();
  return rep;
}

}  // namespace rahgd
