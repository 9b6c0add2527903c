#include "magdim/magnitude.hpp"

#include <istream>
#include <ostream>

#include "magdim/pointcloud_io.hpp"

namespace magdim {

std::vector<double> MagnitudeCurve::scales() const {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.t);
  return out;
}

std::vector<double> MagnitudeCurve::values() const {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.magnitude);
  return out;
}

std::vector<double> log_grid(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi > lo) || count < 2)
    throw Error(ErrorKind::InvalidScale, "log grid needs 0 < lo < hi and at least two points");
  std::vector<double> grid(count);
  const double a = std::log(lo), b = std::log(hi);
  for (std::size_t i = 0; i < count; ++i)
    grid[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

std::vector<double> default_curve_grid() { return log_grid(0.01, 40.0, 64); }

std::vector<double> estimation_grid(const DistanceMatrix& dm, std::size_t count) {
  const double med = median_distance(dm);
  if (!(med > 0.0))
    throw Error(ErrorKind::DegenerateInput, "median pairwise distance is zero; cannot anchor the scale grid");
  const double t_star = 1.0 / med;
  return log_grid(0.1 * t_star, 100.0 * t_star, count);
}

void check_grid(const std::vector<double>& grid) {
  if (grid.empty()) throw Error(ErrorKind::InvalidScale, "scale grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    check_scale(grid[i]);
    if (i > 0 && !(grid[i] > grid[i - 1]))
      throw Error(ErrorKind::InvalidScale, "scale grid must be strictly increasing");
  }
}

MagnitudeCurve magnitude_function(const DistanceMatrix& dm, const std::vector<double>& grid) {
  check_grid(grid);
  struct Slot {
    std::optional<MagnitudeResult> result;
    std::string failure;
  };
  std::vector<Slot> slots(grid.size());
  parallel_for(grid.size(), [&](std::size_t k) {
    try {
      slots[k].result = magnitude_at(dm, grid[k]);
      slots[k].result->weights.weights.resize(0);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NumericallySingular) throw;
      slots[k].failure = e.what();
    }
  });

  MagnitudeCurve curve;
  curve.n_points = dm.size();
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto& slot = slots[k];
    if (!slot.result) {
      curve.failed.push_back({grid[k], slot.failure});
      continue;
    }
    const auto& diag = slot.result->diagnostics;
    curve.samples.push_back({grid[k], slot.result->value, diag.condition_estimate});
    if (diag.jittered) curve.jittered.push_back(grid[k]);
    if (diag.ill_conditioned) curve.ill_conditioned.push_back(grid[k]);
  }
  if (curve.samples.empty()) {
    std::string why = curve.failed.empty() ? std::string("no scales") : curve.failed.front().reason;
    throw Error(ErrorKind::EmptyCurve, "every scale failed (" + why + ")");
  }
  return curve;
}

MagnitudeCurve magnitude_function(const PointCloud& cloud, const std::vector<double>& grid) {
  return magnitude_function(pairwise_distances(cloud), grid);
}

void write_curve_csv(std::ostream& out, const MagnitudeCurve& curve) {
  out << "t,magnitude,condition_estimate\n";
  for (const auto& s : curve.samples)
    out << format_double(s.t) << ',' << format_double(s.magnitude) << ',' << format_double(s.condition_estimate)
        << '\n';
}

MagnitudeCurve read_curve_csv(std::istream& in) {
  MagnitudeCurve curve;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      header_seen = true;
      if (line.rfind("t,magnitude", 0) == 0) continue;
    }
    const std::string_view view(line);
    const std::size_t c1 = view.find(',');
    const std::size_t c2 = c1 == std::string_view::npos ? c1 : view.find(',', c1 + 1);
    if (c2 == std::string_view::npos) throw Error(ErrorKind::DegenerateInput, "malformed curve row: " + line);
    CurveSample s;
    s.t = parse_double(view.substr(0, c1));
    s.magnitude = parse_double(view.substr(c1 + 1, c2 - c1 - 1));
    s.condition_estimate = parse_double(view.substr(c2 + 1));
    if (!curve.samples.empty() && !(s.t > curve.samples.back().t))
      throw Error(ErrorKind::InvalidScale, "curve scales must be strictly increasing");
    curve.samples.push_back(s);
  }
  if (curve.samples.empty()) throw Error(ErrorKind::EmptyCurve, "curve file has no samples");
  return curve;
}

}  // namespace magdim
