#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "magdim/fit.hpp"
#include "magdim/magnitude.hpp"
#include "magdim/metric.hpp"

namespace magdim {

enum class DimensionMethod { Magnitude, Ph0, Box };

std::string to_string(DimensionMethod method);

/// A dimension value with the fit it came from. For Magnitude and Box the
/// value is the fitted slope; for Ph0 it is alpha / (1 - slope).
struct DimensionEstimate {
  double value = 0.0;
  DimensionMethod method = DimensionMethod::Magnitude;
  std::optional<LogLogFit> fit;
  /// The (x, y) series the fit was run on, in original (non-log) units:
  /// (t, Mag) for Magnitude, (1/delta, N) for Box, (n_k, exp(mean log E)) for Ph0.
  std::vector<std::pair<double, double>> series;
  std::map<std::string, double> notes;
};

// ---- magnitude dimension ----

/// Window of the curve (>= min_points samples) with the straightest log-log
/// profile, see best_loglog_window. The choice is a convenience; pass an
/// explicit interval to estimate_dim_mag to override it.
std::pair<double, double> auto_interval(const MagnitudeCurve& curve, std::size_t min_points = 8);

/// Slope of log Mag against log t over [t_lo, t_hi]. Needs >= 4 samples
/// inside the interval.
DimensionEstimate estimate_dim_mag(const MagnitudeCurve& curve, std::pair<double, double> interval);

struct MagDimOptions {
  std::vector<double> grid;  // empty: estimation_grid(distances)
  std::optional<std::pair<double, double>> interval;  // empty: auto_interval
  std::size_t min_points = 8;
};

/// Full pipeline: distances, magnitude function, interval, fit.
DimensionEstimate estimate_dim_mag(const PointCloud& cloud, const MagDimOptions& options = {});
DimensionEstimate estimate_dim_mag(const DistanceMatrix& dm, const MagDimOptions& options = {});

// ---- PH0 dimension ----

/// Sum of (edge length)^alpha over the Euclidean minimum spanning tree. The
/// finite degree-0 Rips bars are born at 0 and die at the MST edge lengths,
/// so this is the alpha-lifetime sum of PH0.
double mst_alpha_lifetime(const PointCloud& cloud, double alpha);
double mst_alpha_lifetime(const DistanceMatrix& dm, double alpha);

struct Ph0Options {
  double alpha = 1.0;
  std::vector<Eigen::Index> sizes;  // empty: default_ph0_sizes(n)
  std::size_t reps = 5;
  std::uint64_t seed = 0;
};

/// Nine sizes log-spaced from max(32, n/20) to n (duplicates after rounding
/// dropped).
std::vector<Eigen::Index> default_ph0_sizes(Eigen::Index n);

/// Subsampling regression: mean of log E_alpha over `reps` random subsets per
/// size, OLS of that against log size giving slope m, value alpha / (1 - m).
/// DegenerateSlope when m >= 1.
DimensionEstimate estimate_dim_ph0(const PointCloud& cloud, const Ph0Options& options);
DimensionEstimate estimate_dim_ph0(const DistanceMatrix& dm, const Ph0Options& options);

// ---- box counting ----

/// Number of occupied axis-aligned cells of side delta, anchored at the
/// coordinate-wise minimum of the cloud.
std::size_t box_count(const PointCloud& cloud, double delta);

struct BoxOptions {
  std::vector<double> delta_grid;  // strictly decreasing; empty: default_box_grid
  std::optional<std::pair<double, double>> interval;  // in 1/delta units; empty: auto
  std::size_t min_points = 8;
};

/// 24 log-spaced deltas from extent/2 down to extent/n, where extent is the
/// largest coordinate range (1 for a single point).
std::vector<double> default_box_grid(const PointCloud& cloud);

/// Slope of log N(delta) against log(1/delta).
DimensionEstimate estimate_dim_box(const PointCloud& cloud, const BoxOptions& options = {});

// ---- comparison ----

struct CompareConfig {
  MagDimOptions magnitude;
  Ph0Options ph0;
  BoxOptions box;
};

struct MethodOutcome {
  DimensionMethod method;
  std::optional<DimensionEstimate> estimate;
  std::string error;  // set when estimate is empty
};

struct DimensionComparison {
  std::vector<MethodOutcome> outcomes;  // magnitude, ph0, box in that order
  /// |dim_mag - dim_ph0| when both succeeded.
  std::optional<double> mag_ph0_gap;
  std::optional<double> mag_box_gap;
  std::optional<double> ph0_box_gap;
};

/// Runs all three estimators on one cloud. A failing method is recorded in
/// its outcome instead of aborting the others.
DimensionComparison compare_dims(const PointCloud& cloud, const CompareConfig& config = {});

/// `method,value,slope,intercept,r_squared,t_lo,t_hi`; Ph0 rows put the
/// smallest and largest subsample sizes in the t columns. Failed methods are
/// written as `# error <method>: <message>` comment lines.
void write_dimension_csv(std::ostream& out, const std::vector<MethodOutcome>& outcomes);

}  // namespace magdim
