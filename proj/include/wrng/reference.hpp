#pragma once

#include <span>

#include "wrng/uniform.hpp"

namespace wrng {

struct NormalPair {
    double x;
    double y;
};

/// Box-Muller transform of (u1, u2). Requires u1 in (0, 1) strictly;
/// throws std::invalid_argument otherwise. x^2 + y^2 == -2 ln(u1) up to
/// rounding.
NormalPair box_muller_pair(double u1, double u2);

/// Draws (u1, u2) from the uniform state and applies box_muller_pair,
/// mapping a raw u1 of 0 to 2^-53 to stay clear of the log singularity.
NormalPair box_muller_next(UniformState& us);

/// Accepted branch of the polar method: (v1, v2) with 0 < v1^2 + v2^2 < 1
/// mapped to a normal pair.
NormalPair polar_transform(double v1, double v2);

/// Polar (Marsaglia) method: rejection-samples (v1, v2) on [-1, 1)^2 until
/// 0 < s < 1. Consumes a variable number of uniforms (two per attempt).
NormalPair polar_next(UniformState& us);

/// Fill out with mu + sigma * z, z ~ N(0,1) by the respective method.
/// Pairs are consumed in order; an odd count drops the final partner value.
void box_muller_fill(UniformState& us, std::span<double> out, double mu = 0.0,
                     double sigma = 1.0);
void polar_fill(UniformState& us, std::span<double> out, double mu = 0.0,
                double sigma = 1.0);

}  // namespace wrng
