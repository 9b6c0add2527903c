#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "magdim/bound.hpp"
#include "magdim/dimension.hpp"
#include "magdim/trainer.hpp"

namespace magdim {

enum class Normalization { Median, None };

struct AnalyzeOptions {
  std::vector<double> scales{kDefaultScales.begin(), kDefaultScales.end()};
  std::size_t window = 1000;
  std::size_t stride = 1000;
  std::size_t thin = 1;
  /// Median: divide each window's distances by their median before applying
  /// the scales, so fixed scales mean the same thing across architectures.
  Normalization normalize = Normalization::Median;
  bool with_dim_mag = true;
  std::size_t curve_points = 32;  // grid size for the dim_mag curve
  std::size_t min_points = 8;
  bool with_ph0 = false;
  Ph0Options ph0;
};

struct WindowRow {
  std::size_t window_id = 0;
  double end_test_accuracy = 0.0;
  std::optional<double> dim_mag;
  std::optional<double> r_squared;
  std::optional<double> dim_ph0;
  std::vector<std::optional<double>> mag_at;  // one per scale
  std::string error;                          // why metrics are missing, if any are
};

struct CorrelationRow {
  std::string metric;
  double pearson = 0.0;
  double spearman = 0.0;
  std::size_t count = 0;
};

struct AnalysisReport {
  std::vector<double> scales;
  std::vector<WindowRow> rows;  // ordered by window_id
  std::vector<CorrelationRow> summary;
  std::vector<std::string> summary_notes;  // metrics left out of the summary, with reasons
};

/// Per-window magnitude metrics and their correlation with the test accuracy
/// at the end of each window. A window whose solve fails keeps empty metrics
/// and is left out of the correlations.
AnalysisReport analyze(const TrajectoryLog& log, const AnalyzeOptions& options);

/// Header `window_id,end_test_accuracy,dim_mag,r_squared,dim_ph0,mag_at_<t>...`,
/// then a `# summary` block of `metric,pearson,spearman` lines. Missing
/// values are empty fields.
void write_analysis_csv(std::ostream& out, const AnalysisReport& report);

/// NaN when fewer than two pairs or either side is constant.
double pearson(std::span<const double> x, std::span<const double> y);
/// Pearson correlation of average ranks (ties share their mean rank).
double spearman(std::span<const double> x, std::span<const double> y);

}  // namespace magdim
