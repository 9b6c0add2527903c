#pragma once

#include <cstdint>

#include "magdim/metric.hpp"

namespace magdim {

/// n i.i.d. uniform samples on [0, 1] embedded in R^1.
PointCloud gen_segment(Eigen::Index n, std::uint64_t seed);

/// n i.i.d. uniform samples on [0, 1]^2.
PointCloud gen_square(Eigen::Index n, std::uint64_t seed);

/// Left endpoints of the 2^depth intervals left after `depth` rounds of
/// middle-thirds removal. jitter in [0, 1] moves each point uniformly within
/// jitter * (its interval length). Ground-truth dimension ln 2 / ln 3.
PointCloud gen_cantor(int depth, std::uint64_t seed, double jitter = 0.0);

struct LevyConfig {
  double alpha = 2.0;        // stability index in (0, 2]; 2 is Brownian motion
  Eigen::Index d = 10;       // ambient dimension
  Eigen::Index n_steps = 1000;
  std::uint64_t seed = 0;
  double step_scale = 1.0;
};

/// One symmetric alpha-stable variate (beta = 0, unit scale) by the
/// Chambers-Mallows-Stuck transform of u ~ U(-pi/2, pi/2) and e ~ Exp(1).
double stable_variate(double alpha, double u, double e);

/// Positions x_1..x_{n_steps} of a random walk whose increments are i.i.d.
/// symmetric alpha-stable in each coordinate, scaled by step_scale. Draws for
/// (coordinate, step) come from a counter stream keyed on (seed, coordinate),
/// so coordinates can be generated in any order. For d >= 2 the path has
/// dimension alpha.
PointCloud gen_levy(const LevyConfig& config);

}  // namespace magdim
