#include "magdim/bound.hpp"

#include <cmath>

namespace magdim {

void validate(const BoundInputs& in) {
  auto fail = [](const char* what) { throw Error(ErrorKind::InvalidInputs, what); };
  for (double v : {in.dim, in.n, in.C, in.K, in.M, in.gamma})
    if (!std::isfinite(v)) fail("bound inputs must be finite");
  if (in.dim < 0.0) fail("dim must be >= 0");
  if (in.n < 1.0 || in.n != std::floor(in.n)) fail("n must be an integer >= 1");
  if (!(in.C > 0.0)) fail("C must be positive");
  if (!(in.K > 0.0)) fail("K must be positive");
  if (in.M < 1.0) fail("M must be >= 1");
  if (!(in.gamma > 0.0 && in.gamma < 1.0)) fail("gamma must lie in (0, 1)");
}

double generalisation_bound(const BoundInputs& in) {
  validate(in);
  const double log_nk = std::log(in.n * in.K * in.K);
  const double complexity = (in.dim + 1.0) * log_nk * log_nk / in.n;
  const double confidence = std::log(7.0 * in.M / in.gamma) / in.n;
  return 2.0 * in.C * std::sqrt(complexity + confidence);
}

double effective_models(const MagnitudeCurve& curve, double t) {
  check_scale(t);
  if (curve.samples.empty()) throw Error(ErrorKind::OutOfRange, "curve has no samples");
  if (t < curve.samples.front().t || t > curve.samples.back().t)
    throw Error(ErrorKind::OutOfRange, "scale " + std::to_string(t) + " outside the sampled range");
  const double lt = std::log(t);
  const CurveSample* best = &curve.samples.front();
  for (const auto& s : curve.samples)
    if (std::abs(std::log(s.t) - lt) < std::abs(std::log(best->t) - lt)) best = &s;
  return best->magnitude;
}

double effective_models(const DistanceMatrix& dm, double t) { return magnitude_at(dm, t).value; }

}  // namespace magdim
