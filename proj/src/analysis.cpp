#include "magdim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>

#include "magdim/pointcloud_io.hpp"

namespace magdim {

namespace {

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

std::string scale_label(double t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", t);
  return buf;
}

std::string optional_field(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

}  // namespace

double pearson(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) return std::numeric_limits<double>::quiet_NaN();
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) return std::numeric_limits<double>::quiet_NaN();
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  return pearson(rx, ry);
}

AnalysisReport analyze(const TrajectoryLog& log, const AnalyzeOptions& options) {
  check_grid(options.scales);
  AnalysisReport report;
  report.scales = options.scales;
  const auto windows = sliding_windows(log, options.window, options.stride, options.thin);

  for (const auto& view : windows) {
    WindowRow row;
    row.window_id = view.window_id;
    row.end_test_accuracy = view.end_test_accuracy;
    row.mag_at.assign(options.scales.size(), std::nullopt);
    try {
      DistanceMatrix dm = pairwise_distances(view.cloud);
      if (options.normalize == Normalization::Median) {
        const double med = median_distance(dm);
        if (!(med > 0.0))
          throw Error(ErrorKind::NumericallySingular,
                      "window points coincide (median distance 0); deduplicate before analysis");
        dm = scale_distances(dm, 1.0 / med);
      }
      std::vector<std::optional<double>> mags(options.scales.size());
      parallel_for(options.scales.size(), [&](std::size_t k) { mags[k] = effective_models(dm, options.scales[k]); });
      row.mag_at = std::move(mags);
      if (options.with_dim_mag) {
        MagDimOptions mag_options;
        mag_options.grid = estimation_grid(dm, options.curve_points);
        mag_options.min_points = options.min_points;
        const auto est = estimate_dim_mag(dm, mag_options);
        row.dim_mag = est.value;
        row.r_squared = est.fit->r_squared;
      }
      if (options.with_ph0) row.dim_ph0 = estimate_dim_ph0(dm, options.ph0).value;
    } catch (const Error& e) {
      row.error = e.what();
    }
    report.rows.push_back(std::move(row));
  }

  struct Column {
    std::string name;
    std::vector<std::optional<double>> values;
  };
  std::vector<Column> columns;
  auto collect = [&](std::string name, auto&& get) {
    Column c{std::move(name), {}};
    for (const auto& r : report.rows) c.values.push_back(get(r));
    columns.push_back(std::move(c));
  };
  if (options.with_dim_mag) collect("dim_mag", [](const WindowRow& r) { return r.dim_mag; });
  if (options.with_ph0) collect("dim_ph0", [](const WindowRow& r) { return r.dim_ph0; });
  for (std::size_t k = 0; k < options.scales.size(); ++k)
    collect("mag_at_" + scale_label(options.scales[k]), [k](const WindowRow& r) { return r.mag_at[k]; });

  for (const auto& c : columns) {
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
      if (!c.values[i] || std::isnan(report.rows[i].end_test_accuracy)) continue;
      xs.push_back(*c.values[i]);
      ys.push_back(report.rows[i].end_test_accuracy);
    }
    if (xs.size() < 3) {
      report.summary_notes.push_back(c.name + ": only " + std::to_string(xs.size()) +
                                     " windows with both the metric and a test accuracy (need 3)");
      continue;
    }
    const double p = pearson(xs, ys), s = spearman(xs, ys);
    if (std::isnan(p) || std::isnan(s)) {
      report.summary_notes.push_back(c.name + ": metric or accuracy is constant across windows");
      continue;
    }
    report.summary.push_back({c.name, p, s, xs.size()});
  }
  return report;
}

void write_analysis_csv(std::ostream& out, const AnalysisReport& report) {
  out << "window_id,end_test_accuracy,dim_mag,r_squared,dim_ph0";
  for (double t : report.scales) out << ",mag_at_" << scale_label(t);
  out << '\n';
  for (const auto& r : report.rows) {
    out << r.window_id << ',' << (std::isnan(r.end_test_accuracy) ? std::string() : format_double(r.end_test_accuracy))
        << ',' << optional_field(r.dim_mag) << ',' << optional_field(r.r_squared) << ',' << optional_field(r.dim_ph0);
    for (const auto& m : r.mag_at) out << ',' << optional_field(m);
    out << '\n';
  }
  for (const auto& r : report.rows)
    if (!r.error.empty()) out << "# window " << r.window_id << ": " << r.error << '\n';
  out << "# summary\n";
  if (report.summary.empty()) out << "# no correlations\n";
  else out << "metric,pearson,spearman\n";
  for (const auto& c : report.summary)
    out << c.metric << ',' << format_double(c.pearson) << ',' << format_double(c.spearman) << '\n';
  for (const auto& note : report.summary_notes) out << "# " << note << '\n';
}

}  // namespace magdim
