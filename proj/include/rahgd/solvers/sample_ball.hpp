#pragma once

#include <random>

#include "rahgd/core/vector.hpp"

namespace rahgd {

/// Uniform draw from the closed Euclidean ball of radius r in R^d: normalised
/// Gaussian direction times r U^{1/d}. r = 0 returns zeros without drawing.
Vector sample_ball(std::size_t d, double r, std::mt19937_64& rng);

}  // namespace rahgd
