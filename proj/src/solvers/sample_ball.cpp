#include "rahgd/solvers/sample_ball.hpp"

#include <cmath>

#include "rahgd/core/errors.hpp"

namespace rahgd {

Vector sample_ball(std::size_t d, double r, std::mt19937_64& rng) {
  if (d < 1) throw ConfigError("sample_ball: dimension must be >= 1");
  if (!(r >= 0.0) || !std::isfinite(r)) throw ConfigError("sample_ball: radius must be nonnegative");
  Vector xi = Vector::zeros(d);
  if (r == 0.0) return xi;

  std::normal_distribution<double> normal(0.0, 1.0);
  double n = 0.0;
  while (n == 0.0) {
    for (std::size_t i = 0; i < d; ++i) xi[i] = normal(rng);
    n = norm(xi);
  }
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double radius = r * std::pow(unif(rng), 1.0 / static_cast<double>(d));
  xi *= radius / n;
  return xi;
}

}  // namespace rahgd
