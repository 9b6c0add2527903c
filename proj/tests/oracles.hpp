#pragma once

// Independent reference computations used only by the tests. Nothing here
// calls into the library's solvers, MST or bound code.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

namespace oracle {

using Matrix = std::vector<std::vector<long double>>;

/// Explicit inverse by Gauss-Jordan elimination with partial pivoting, in
/// long double.
inline Matrix invert(Matrix a) {
  const std::size_t n = a.size();
  Matrix inv(n, std::vector<long double>(n, 0.0L));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0L;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
    std::swap(a[col], a[pivot]);
    std::swap(inv[col], inv[pivot]);
    const long double p = a[col][col];
    for (std::size_t c = 0; c < n; ++c) {
      a[col][c] /= p;
      inv[col][c] /= p;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const long double f = a[r][col];
      for (std::size_t c = 0; c < n; ++c) {
        a[r][c] -= f * a[col][c];
        inv[r][c] -= f * inv[col][c];
      }
    }
  }
  return inv;
}

/// Sum of all entries of the inverse of exp(-d).
inline long double magnitude_by_inverse(const std::vector<std::vector<double>>& dist) {
  const std::size_t n = dist.size();
  Matrix zeta(n, std::vector<long double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) zeta[i][j] = std::exp(-static_cast<long double>(dist[i][j]));
  const Matrix inv = invert(zeta);
  long double total = 0.0L;
  for (const auto& row : inv)
    for (long double v : row) total += v;
  return total;
}

inline std::vector<std::vector<double>> euclidean(const std::vector<std::vector<double>>& pts) {
  const std::size_t n = pts.size();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      long double s = 0.0L;
      for (std::size_t k = 0; k < pts[i].size(); ++k) {
        const long double diff = static_cast<long double>(pts[i][k]) - pts[j][k];
        s += diff * diff;
      }
      d[i][j] = static_cast<double>(std::sqrt(s));
    }
  return d;
}

/// Minimum over every labelled tree on n vertices (Pruefer sequences) of the
/// summed edge weight^alpha. n <= 9 keeps this under ~5M trees.
inline double brute_force_mst(const std::vector<std::vector<double>>& dist, double alpha = 1.0) {
  const std::size_t n = dist.size();
  if (n < 2) return 0.0;
  if (n == 2) return std::pow(dist[0][1], alpha);
  std::vector<std::size_t> seq(n - 2, 0);
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    std::vector<std::size_t> degree(n, 1);
    for (auto v : seq) ++degree[v];
    double total = 0.0;
    std::vector<std::size_t> deg = degree;
    for (auto v : seq) {
      std::size_t leaf = 0;
      while (deg[leaf] != 1) ++leaf;
      total += std::pow(dist[leaf][v], alpha);
      --deg[leaf];
      --deg[v];
      deg[leaf] = 0;
    }
    std::size_t u = n, w = n;
    for (std::size_t i = 0; i < n; ++i)
      if (deg[i] == 1) (u == n ? u : w) = i;
    total += std::pow(dist[u][w], alpha);
    best = std::min(best, total);
    std::size_t k = 0;
    while (k < seq.size() && ++seq[k] == n) seq[k++] = 0;
    if (k == seq.size()) break;
  }
  return best;
}

}  // namespace oracle
