#include "magdim/synthetic.hpp"

#include <cmath>
#include <numbers>

#include "magdim/random.hpp"

namespace magdim {

namespace {

PointCloud uniform_cube(Eigen::Index n, Eigen::Index d, std::uint64_t seed) {
  if (n < 1) throw Error(ErrorKind::InvalidInputs, "sample count must be >= 1");
  PointCloud::Matrix points(n, d);
  CounterStream rng(derive_key(seed, static_cast<std::uint64_t>(d)));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < d; ++j) points(i, j) = rng.uniform();
  return PointCloud(std::move(points));
}

}  // namespace

PointCloud gen_segment(Eigen::Index n, std::uint64_t seed) { return uniform_cube(n, 1, seed); }

PointCloud gen_square(Eigen::Index n, std::uint64_t seed) { return uniform_cube(n, 2, seed); }

PointCloud gen_cantor(int depth, std::uint64_t seed, double jitter) {
  if (depth < 1 || depth > 14) throw Error(ErrorKind::InvalidInputs, "Cantor depth must be in [1, 14]");
  if (!(jitter >= 0.0 && jitter <= 1.0)) throw Error(ErrorKind::InvalidInputs, "jitter must be in [0, 1]");
  const Eigen::Index count = Eigen::Index{1} << depth;
  const double width = std::pow(3.0, -depth);
  PointCloud::Matrix points(count, 1);
  CounterStream rng(derive_key(seed, 0xCA17u));
  for (Eigen::Index k = 0; k < count; ++k) {
    // binary digit b of k selects offset 0 or 2 * 3^-(b+1), most significant first
    double left = 0.0;
    double scale = 1.0;
    for (int level = depth - 1; level >= 0; --level) {
      scale /= 3.0;
      if ((k >> level) & 1) left += 2.0 * scale;
    }
    points(k, 0) = left + (jitter > 0.0 ? jitter * width * rng.uniform() : 0.0);
  }
  return PointCloud(std::move(points));
}

double stable_variate(double alpha, double u, double e) {
  if (alpha == 1.0) return std::tan(u);
  return std::sin(alpha * u) / std::pow(std::cos(u), 1.0 / alpha) *
         std::pow(std::cos(u - alpha * u) / e, (1.0 - alpha) / alpha);
}

PointCloud gen_levy(const LevyConfig& config) {
  if (!(config.alpha > 0.0 && config.alpha <= 2.0))
    throw Error(ErrorKind::InvalidAlpha, "alpha must lie in (0, 2], got " + std::to_string(config.alpha));
  if (config.d < 1 || config.n_steps < 2)
    throw Error(ErrorKind::InvalidInputs, "Levy path needs d >= 1 and n_steps >= 2");
  if (!(config.step_scale > 0.0)) throw Error(ErrorKind::InvalidInputs, "step_scale must be positive");

  PointCloud::Matrix path(config.n_steps, config.d);
  for (Eigen::Index c = 0; c < config.d; ++c) {
    CounterStream rng(derive_key(config.seed, 0x1E7Au, static_cast<std::uint64_t>(c)));
    double position = 0.0;
    for (Eigen::Index s = 0; s < config.n_steps; ++s) {
      const double u = std::numbers::pi * (rng.uniform_open() - 0.5);
      const double e = rng.exponential();
      position += config.step_scale * stable_variate(config.alpha, u, e);
      path(s, c) = position;
    }
  }
  return PointCloud(std::move(path));
}

}  // namespace magdim
