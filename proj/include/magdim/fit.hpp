#pragma once

#include <cstddef>
#include <span>
#include <utility>

namespace magdim {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  /// 1 - SS_res / SS_tot clamped to [0, 1]; 0 when the responses are constant
  /// (a flat series explains nothing, which keeps plateaus out of window
  /// selection).
  double r_squared = 0.0;
};

/// Ordinary least squares y = slope * x + intercept. Needs >= 2 points with
/// distinct x.
LineFit ols(std::span<const double> x, std::span<const double> y);

/// OLS on (log x, log y) restricted to lo <= x <= hi.
struct LogLogFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double lo = 0.0;  // interval endpoints, both members of the sampled x values
  double hi = 0.0;
  std::size_t points = 0;
};

/// Throws InsufficientPoints when fewer than `min_points` samples fall in
/// [lo, hi], NonPositiveMagnitude when any of them has y <= 0.
LogLogFit fit_loglog(std::span<const double> x, std::span<const double> y, double lo, double hi,
                     std::size_t min_points = 2);

/// Contiguous window of at least `min_points` samples whose log-log OLS has
/// the highest r^2. Ties (within 1e-12) go to the wider window, then to the
/// smaller left end. x must be strictly increasing and y positive.
std::pair<double, double> best_loglog_window(std::span<const double> x, std::span<const double> y,
                                             std::size_t min_points);

}  // namespace magdim
