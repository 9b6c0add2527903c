#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "magdim/magnitude.hpp"

namespace magdim {

/// Inputs of the magnitude-dimension generalisation bound.
struct BoundInputs {
  double dim = 0.0;    // magnitude dimension estimate, >= 0
  double n = 1.0;      // training-set size, integer >= 1
  double C = 1.0;      // bound on the loss
  double K = 1.0;      // Lipschitz constant of the loss in w
  double M = 1.0;      // mixing constant, >= 1
  double gamma = 0.05; // failure probability in (0, 1)
};

/// InvalidInputs unless every field is finite and in range.
void validate(const BoundInputs& in);

/// 2C sqrt( (dim + 1) ln^2(n K^2) / n + ln(7 M / gamma) / n ), natural logs.
/// Holds with probability 1 - gamma for n large enough; the formula is
/// evaluated for any n >= 1.
double generalisation_bound(const BoundInputs& in);

/// True when n K^2 <= 1, where the log^2 term no longer grows with n K^2.
inline bool bound_log_term_flagged(const BoundInputs& in) { return in.n * in.K * in.K <= 1.0; }

/// Cross-section scales of the magnitude function used for trajectory windows.
inline constexpr std::array<double, 4> kDefaultScales{1.36, 6.78, 16.95, 30.51};

/// Effective number of models: Mag at the sample whose scale is nearest to t
/// in log space. OutOfRange when t lies outside the sampled scales.
double effective_models(const MagnitudeCurve& curve, double t);

/// Exact variant: solves at t itself.
double effective_models(const DistanceMatrix& dm, double t);

}  // namespace magdim
