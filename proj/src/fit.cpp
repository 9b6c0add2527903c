#include "magdim/fit.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "magdim/errors.hpp"

namespace magdim {

LineFit ols(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw Error(ErrorKind::InsufficientPoints, "line fit needs at least two points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (!(sxx > 0.0)) throw Error(ErrorKind::InsufficientPoints, "line fit needs distinct abscissae");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (syy > 0.0) {
    double ss_res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = y[i] - (fit.slope * x[i] + fit.intercept);
      ss_res += r * r;
    }
    fit.r_squared = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
  }
  return fit;
}

LogLogFit fit_loglog(std::span<const double> x, std::span<const double> y, double lo, double hi,
                     std::size_t min_points) {
  std::vector<double> lx, ly;
  LogLogFit out;
  out.lo = lo;
  out.hi = hi;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < lo || x[i] > hi) continue;
    if (!(y[i] > 0.0))
      throw Error(ErrorKind::NonPositiveMagnitude, "non-positive value at x = " + std::to_string(x[i]));
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  if (lx.size() < std::max<std::size_t>(min_points, 2))
    throw Error(ErrorKind::InsufficientPoints, "interval holds " + std::to_string(lx.size()) +
                                                   " samples, need " + std::to_string(std::max<std::size_t>(min_points, 2)));
  const LineFit line = ols(lx, ly);
  out.slope = line.slope;
  out.intercept = line.intercept;
  out.r_squared = line.r_squared;
  out.points = lx.size();
  return out;
}

std::pair<double, double> best_loglog_window(std::span<const double> x, std::span<const double> y,
                                             std::size_t min_points) {
  const std::size_t m = x.size();
  min_points = std::max<std::size_t>(min_points, 2);
  if (m < min_points || y.size() != m)
    throw Error(ErrorKind::InsufficientPoints,
                "have " + std::to_string(m) + " samples, need at least " + std::to_string(min_points));
  std::vector<double> lx(m), ly(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (!(y[i] > 0.0))
      throw Error(ErrorKind::NonPositiveMagnitude, "non-positive value at x = " + std::to_string(x[i]));
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  constexpr double kTie = 1e-12;
  double best_r2 = -1.0;
  std::size_t best_lo = 0, best_hi = min_points - 1;
  for (std::size_t lo = 0; lo + min_points <= m; ++lo) {
    for (std::size_t hi = lo + min_points - 1; hi < m; ++hi) {
      const std::size_t len = hi - lo + 1;
      const double r2 = ols(std::span(lx).subspan(lo, len), std::span(ly).subspan(lo, len)).r_squared;
      const std::size_t best_len = best_hi - best_lo + 1;
      // lo only increases, so on a full tie the earlier window already wins
      if (r2 > best_r2 + kTie || (std::abs(r2 - best_r2) <= kTie && len > best_len)) {
        best_r2 = r2;
        best_lo = lo;
        best_hi = hi;
      }
    }
  }
  return {x[best_lo], x[best_hi]};
}

}  // namespace magdim
