#include "magdim/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <unordered_set>

#include "magdim/mst.hpp"
#include "magdim/pointcloud_io.hpp"
#include "magdim/random.hpp"

namespace magdim {

std::string to_string(DimensionMethod method) {
  switch (method) {
    case DimensionMethod::Magnitude: return "magnitude";
    case DimensionMethod::Ph0: return "ph0";
    case DimensionMethod::Box: return "box";
  }
  return "unknown";
}

namespace {

struct Edge {
  double length;
  std::uint32_t a;
  std::uint32_t b;
};

/// Kruskal restricted to the listed points of `dm`; returns MST edges with
/// endpoints given as positions in `rows`.
std::vector<MstEdge> kruskal(const DistanceMatrix& dm, const std::vector<Eigen::Index>& rows) {
  const std::size_t n = rows.size();
  std::vector<Edge> edges;
  edges.reserve(n * (n - 1) / 2);
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = i + 1; j < n; ++j) edges.push_back({dm(rows[i], rows[j]), i, j});
  std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) {
    if (x.length != y.length) return x.length < y.length;
    if (x.a != y.a) return x.a < y.a;
    return x.b < y.b;
  });
  DisjointSets sets(n);
  std::vector<MstEdge> tree;
  tree.reserve(n > 0 ? n - 1 : 0);
  for (const Edge& e : edges) {
    if (sets.unite(e.a, e.b)) {
      tree.push_back({e.a, e.b, e.length});
      if (tree.size() + 1 == n) break;
    }
  }
  return tree;
}

std::vector<Eigen::Index> all_rows(Eigen::Index n) {
  std::vector<Eigen::Index> rows(static_cast<std::size_t>(n));
  std::iota(rows.begin(), rows.end(), Eigen::Index{0});
  return rows;
}

double alpha_sum(const std::vector<MstEdge>& tree, double alpha) {
  double total = 0.0;
  for (const auto& e : tree) total += std::pow(e.length, alpha);
  return total;
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw Error(ErrorKind::InvalidInputs, "alpha must be a positive finite value");
}

/// Uniform random k-subset of [0, n) from a partial Fisher-Yates shuffle.
std::vector<Eigen::Index> random_subset(Eigen::Index n, Eigen::Index k, std::uint64_t key) {
  std::vector<Eigen::Index> pool = all_rows(n);
  CounterStream rng(key);
  for (Eigen::Index i = 0; i < k; ++i) {
    const auto j = i + static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n - i)));
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
  }
  pool.resize(static_cast<std::size_t>(k));
  return pool;
}

struct CellHash {
  std::size_t operator()(const std::vector<std::int64_t>& cell) const {
    std::uint64_t h = 0x84222325CBF29CE4ull;
    for (auto c : cell) h = mix64(h ^ static_cast<std::uint64_t>(c));
    return static_cast<std::size_t>(h);
  }
};

}  // namespace

std::vector<MstEdge> minimum_spanning_tree(const DistanceMatrix& dm) { return kruskal(dm, all_rows(dm.size())); }

std::pair<double, double> auto_interval(const MagnitudeCurve& curve, std::size_t min_points) {
  const auto t = curve.scales();
  const auto m = curve.values();
  return best_loglog_window(t, m, min_points);
}

DimensionEstimate estimate_dim_mag(const MagnitudeCurve& curve, std::pair<double, double> interval) {
  if (!(interval.first < interval.second))
    throw Error(ErrorKind::InsufficientPoints, "interval must satisfy t_lo < t_hi");
  const auto t = curve.scales();
  const auto m = curve.values();
  DimensionEstimate est;
  est.method = DimensionMethod::Magnitude;
  est.fit = fit_loglog(t, m, interval.first, interval.second, 4);
  est.value = est.fit->slope;
  for (std::size_t i = 0; i < t.size(); ++i) est.series.emplace_back(t[i], m[i]);
  est.notes["n_points"] = static_cast<double>(curve.n_points);
  est.notes["grid_size"] = static_cast<double>(t.size());
  est.notes["failed_scales"] = static_cast<double>(curve.failed.size());
  est.notes["jittered_scales"] = static_cast<double>(curve.jittered.size());
  return est;
}

DimensionEstimate estimate_dim_mag(const DistanceMatrix& dm, const MagDimOptions& options) {
  const auto grid = options.grid.empty() ? estimation_grid(dm) : options.grid;
  const MagnitudeCurve curve = magnitude_function(dm, grid);
  const auto interval = options.interval ? *options.interval : auto_interval(curve, options.min_points);
  return estimate_dim_mag(curve, interval);
}

DimensionEstimate estimate_dim_mag(const PointCloud& cloud, const MagDimOptions& options) {
  return estimate_dim_mag(pairwise_distances(cloud), options);
}

double mst_alpha_lifetime(const DistanceMatrix& dm, double alpha) {
  check_alpha(alpha);
  if (dm.size() < 2) throw Error(ErrorKind::DegenerateInput, "alpha-lifetime sum needs at least two points");
  return alpha_sum(minimum_spanning_tree(dm), alpha);
}

double mst_alpha_lifetime(const PointCloud& cloud, double alpha) {
  if (cloud.size() < 2) throw Error(ErrorKind::DegenerateInput, "alpha-lifetime sum needs at least two points");
  return mst_alpha_lifetime(pairwise_distances(cloud), alpha);
}

std::vector<Eigen::Index> default_ph0_sizes(Eigen::Index n) {
  const double lo = std::max(32.0, static_cast<double>(n) / 20.0);
  const double hi = static_cast<double>(n);
  std::vector<Eigen::Index> sizes;
  if (lo >= hi) return sizes;
  for (double v : log_grid(lo, hi, 9)) {
    const auto k = static_cast<Eigen::Index>(std::llround(v));
    if (sizes.empty() || k > sizes.back()) sizes.push_back(k);
  }
  return sizes;
}

DimensionEstimate estimate_dim_ph0(const DistanceMatrix& dm, const Ph0Options& options) {
  check_alpha(options.alpha);
  const Eigen::Index n = dm.size();
  const auto sizes = options.sizes.empty() ? default_ph0_sizes(n) : options.sizes;
  if (sizes.size() < 2)
    throw Error(ErrorKind::InsufficientPoints,
                "need at least two subsample sizes (cloud of " + std::to_string(n) + " points is too small)");
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    if (sizes[k] < 2 || sizes[k] > n || (k > 0 && sizes[k] <= sizes[k - 1]))
      throw Error(ErrorKind::InsufficientPoints, "subsample sizes must be strictly increasing within [2, n]");
  }
  if (options.reps < 1) throw Error(ErrorKind::InvalidInputs, "reps must be >= 1");

  const std::size_t jobs = sizes.size() * options.reps;
  std::vector<double> log_e(jobs);
  parallel_for(jobs, [&](std::size_t job) {
    const std::size_t k = job / options.reps, r = job % options.reps;
    const auto rows = random_subset(n, sizes[k], derive_key(options.seed, k, r));
    log_e[job] = std::log(alpha_sum(kruskal(dm, rows), options.alpha));
  });

  std::vector<double> xs, ys;
  DimensionEstimate est;
  est.method = DimensionMethod::Ph0;
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    double mean = 0.0;
    for (std::size_t r = 0; r < options.reps; ++r) mean += log_e[k * options.reps + r];
    mean /= static_cast<double>(options.reps);
    xs.push_back(static_cast<double>(sizes[k]));
    ys.push_back(std::exp(mean));
    est.series.emplace_back(xs.back(), ys.back());
  }
  est.fit = fit_loglog(xs, ys, xs.front(), xs.back(), 2);
  const double m = est.fit->slope;
  if (!(m < 1.0))
    throw Error(ErrorKind::DegenerateSlope, "log E_alpha vs log n slope " + std::to_string(m) +
                                                " >= 1; choose a smaller alpha or supply more points");
  est.value = options.alpha / (1.0 - m);
  est.notes["alpha"] = options.alpha;
  est.notes["reps"] = static_cast<double>(options.reps);
  est.notes["seed"] = static_cast<double>(options.seed);
  return est;
}

DimensionEstimate estimate_dim_ph0(const PointCloud& cloud, const Ph0Options& options) {
  return estimate_dim_ph0(pairwise_distances(cloud), options);
}

std::size_t box_count(const PointCloud& cloud, double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw Error(ErrorKind::InvalidScale, "box side must be positive");
  const auto& p = cloud.points();
  const Eigen::RowVectorXd origin = p.colwise().minCoeff();
  std::unordered_set<std::vector<std::int64_t>, CellHash> cells;
  cells.reserve(static_cast<std::size_t>(cloud.size()));
  std::vector<std::int64_t> cell(static_cast<std::size_t>(cloud.dim()));
  for (Eigen::Index i = 0; i < cloud.size(); ++i) {
    for (Eigen::Index j = 0; j < cloud.dim(); ++j)
      cell[static_cast<std::size_t>(j)] = static_cast<std::int64_t>(std::floor((p(i, j) - origin(j)) / delta));
    cells.insert(cell);
  }
  return cells.size();
}

std::vector<double> default_box_grid(const PointCloud& cloud) {
  const auto& p = cloud.points();
  double extent = (p.colwise().maxCoeff() - p.colwise().minCoeff()).maxCoeff();
  if (!(extent > 0.0)) extent = 1.0;
  const double n = std::max<double>(static_cast<double>(cloud.size()), 4.0);
  auto grid = log_grid(extent / n, extent / 2.0, 24);
  std::reverse(grid.begin(), grid.end());
  return grid;
}

DimensionEstimate estimate_dim_box(const PointCloud& cloud, const BoxOptions& options) {
  const auto deltas = options.delta_grid.empty() ? default_box_grid(cloud) : options.delta_grid;
  for (std::size_t k = 0; k < deltas.size(); ++k)
    if (!(deltas[k] > 0.0) || (k > 0 && !(deltas[k] < deltas[k - 1])))
      throw Error(ErrorKind::InvalidScale, "delta grid must be positive and strictly decreasing");

  std::vector<double> inv(deltas.size()), counts(deltas.size());
  parallel_for(deltas.size(), [&](std::size_t k) {
    inv[k] = 1.0 / deltas[k];
    counts[k] = static_cast<double>(box_count(cloud, deltas[k]));
  });
  const auto interval = options.interval ? *options.interval : best_loglog_window(inv, counts, options.min_points);

  DimensionEstimate est;
  est.method = DimensionMethod::Box;
  est.fit = fit_loglog(inv, counts, interval.first, interval.second, 2);
  est.value = est.fit->slope;
  for (std::size_t k = 0; k < deltas.size(); ++k) est.series.emplace_back(inv[k], counts[k]);
  return est;
}

DimensionComparison compare_dims(const PointCloud& cloud, const CompareConfig& config) {
  DimensionComparison report;
  const DistanceMatrix dm = pairwise_distances(cloud);
  auto attempt = [&](DimensionMethod method, auto&& run) {
    MethodOutcome outcome{method, std::nullopt, {}};
    try {
      outcome.estimate = run();
    } catch (const Error& e) {
      outcome.error = e.what();
    }
    report.outcomes.push_back(std::move(outcome));
  };
  attempt(DimensionMethod::Magnitude, [&] { return estimate_dim_mag(dm, config.magnitude); });
  attempt(DimensionMethod::Ph0, [&] { return estimate_dim_ph0(dm, config.ph0); });
  attempt(DimensionMethod::Box, [&] { return estimate_dim_box(cloud, config.box); });

  auto gap = [&](std::size_t a, std::size_t b) -> std::optional<double> {
    const auto& x = report.outcomes[a].estimate;
    const auto& y = report.outcomes[b].estimate;
    if (!x || !y) return std::nullopt;
    return std::abs(x->value - y->value);
  };
  report.mag_ph0_gap = gap(0, 1);
  report.mag_box_gap = gap(0, 2);
  report.ph0_box_gap = gap(1, 2);
  return report;
}

void write_dimension_csv(std::ostream& out, const std::vector<MethodOutcome>& outcomes) {
  out << "method,value,slope,intercept,r_squared,t_lo,t_hi\n";
  for (const auto& o : outcomes) {
    if (!o.estimate) {
      out << "# error " << to_string(o.method) << ": " << o.error << '\n';
      continue;
    }
    const auto& e = *o.estimate;
    const LogLogFit fit = e.fit.value_or(LogLogFit{});
    out << to_string(e.method) << ',' << format_double(e.value) << ',' << format_double(fit.slope) << ','
        << format_double(fit.intercept) << ',' << format_double(fit.r_squared) << ',' << format_double(fit.lo) << ','
        << format_double(fit.hi) << '\n';
  }
}

}  // namespace magdim
