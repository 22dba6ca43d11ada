#include "rahgd/solvers/config.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rahgd/core/errors.hpp"

namespace rahgd {

void SolverConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(std::string("solver config: ") + what);
  };
  require(epsilon > 0.0 && std::isfinite(epsilon), "epsilon must be positive");
  require(eta > 0.0 && std::isfinite(eta), "eta must be positive");
  require(theta > 0.0 && theta <= 1.0, "theta must lie in (0, 1]");
  require(big_b > 0.0 && std::isfinite(big_b), "B must be positive");
  require(big_k >= 1, "K must be >= 1");
  require(alpha > 0.0 && std::isfinite(alpha), "alpha must be positive");
  require(beta >= 0.0 && beta < 1.0, "beta must lie in [0, 1)");
  require(sigma > 0.0 && std::isfinite(sigma), "sigma must be positive");
  require(r >= 0.0 && std::isfinite(r), "r must be nonnegative");
  require(zeta > 0.0 && zeta < 1.0, "zeta must lie in (0, 1)");
  require(chi >= 1, "chi must be >= 1");
  require(c_const > 0.0 && std::isfinite(c_const), "C must be positive");
  require(max_epochs >= 1, "max_epochs must be >= 1");
  require(!stop_below || *stop_below > 0.0, "stop_below must be positive");
  require(inner_hard_cap >= 1, "inner hard cap must be >= 1");
  require(!c_hat || (*c_hat > 0.0 && std::isfinite(*c_hat)), "c_hat must be positive");
}

std::int64_t default_max_epochs(std::optional<double> delta_hat, double rho_tilde, double epsilon) {
  if (!delta_hat) return 10'000;
  const double n = std::ceil(10.0 * *delta_hat * std::sqrt(rho_tilde) * std::pow(epsilon, -1.5));
  if (!(n >= 1.0)) return 1;
  return n > 1e15 ? static_cast<std::int64_t>(1e15) : static_cast<std::int64_t>(n);
}

namespace {

void check_schedule_inputs(const DerivedConstants& dc, const SmoothnessConstants& sc, double epsilon) {
  sc.validate();
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw ConfigError("epsilon must be positive");
  if (!(dc.rho_tilde > 0.0)) {
    throw ConfigError(
        "rho~ = 0 (exactly quadratic Phi): B and theta are undefined; raise it with "
        "with_rho_tilde_floor(dc, 1e-12) or larger");
  }
  if (epsilon > dc.l_tilde * dc.l_tilde / dc.rho_tilde) {
    throw ConfigError("epsilon exceeds L~^2/rho~");
  }
}

SolverConfig common(const DerivedConstants& dc, const SmoothnessConstants& sc, double epsilon) {
  SolverConfig cfg;
  cfg.epsilon = epsilon;
  cfg.eta = 1.0 / (4.0 * dc.l_tilde);
  cfg.alpha = 1.0 / sc.ell;
  const double s = std::sqrt(dc.kappa);
  cfg.beta = (s - 1.0) / (s + 1.0);
  cfg.mode = InnerMode::theory;
  return cfg;
}

std::int64_t ceil_count(double v) {
  const double c = std::ceil(v);
  return c > 1e15 ? static_cast<std::int64_t>(1e15) : std::max<std::int64_t>(1, static_cast<std::int64_t>(c));
}

}  // namespace

SolverConfig default_config_fosp(const DerivedConstants& dc, const SmoothnessConstants& sc, double epsilon) {
  check_schedule_inputs(dc, sc, epsilon);
  SolverConfig cfg = common(dc, sc, epsilon);
  cfg.big_b = std::sqrt(epsilon / dc.rho_tilde);
  cfg.theta = std::min(1.0, 4.0 * std::pow(dc.rho_tilde * epsilon * cfg.eta * cfg.eta, 0.25));
  cfg.big_k = ceil_count(1.0 / cfg.theta);
  cfg.sigma = epsilon * epsilon;
  cfg.perturbation = false;
  cfg.r = 0.0;
  cfg.max_epochs = default_max_epochs(std::nullopt, dc.rho_tilde, epsilon);
  return cfg;
}

SolverConfig default_config_sosp(const DerivedConstants& dc, const SmoothnessConstants& sc, double epsilon,
                                 double zeta, std::size_t d_x, double c_const) {
  check_schedule_inputs(dc, sc, epsilon);
  if (!(zeta > 0.0 && zeta < 1.0)) throw ConfigError("zeta must lie in (0, 1)");
  if (d_x < 1) throw ConfigError("d_x must be >= 1");
  if (!(c_const > 0.0)) throw ConfigError("C must be positive");

  SolverConfig cfg = common(dc, sc, epsilon);
  const double dx = static_cast<double>(d_x);
  cfg.zeta = zeta;
  cfg.c_const = c_const;
  cfg.chi = ceil_count(std::log(dx / (zeta * epsilon)));
  const double chi = static_cast<double>(cfg.chi);
  cfg.theta = std::min(1.0, 0.5 * std::pow(dc.rho_tilde * epsilon * cfg.eta * cfg.eta, 0.25));
  cfg.big_k = ceil_count(2.0 * chi / cfg.theta);
  const double b = std::sqrt(epsilon / dc.rho_tilde) / (288.0 * chi * chi);
  cfg.big_b = b;
  const double k = static_cast<double>(cfg.big_k);
  cfg.r = std::min({dc.l_tilde * b * b / (4.0 * c_const), (b + b * b) / std::sqrt(2.0), cfg.theta * b / (20.0 * k),
                    std::sqrt(cfg.theta * b * b / (2.0 * k))});
  cfg.sigma = std::min(dc.rho_tilde * b * zeta * cfg.r * cfg.theta / (2.0 * std::sqrt(dx)), epsilon * epsilon);
  cfg.perturbation = true;
  cfg.max_epochs = default_max_epochs(std::nullopt, dc.rho_tilde, epsilon);
  return cfg;
}

}  // namespace rahgd
