#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "magdim/errors.hpp"
#include "magdim/parallel.hpp"

namespace magdim {

template <typename Scalar>
using RowMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// n points in R^d, one per row. Coordinates are checked finite on
/// construction and the object is immutable afterwards.
template <typename Scalar>
class BasicPointCloud {
 public:
  using Matrix = RowMatrix<Scalar>;

  explicit BasicPointCloud(Matrix points) : points_(std::move(points)) {
    if (points_.rows() < 1 || points_.cols() < 1)
      throw Error(ErrorKind::DegenerateInput, "point cloud needs n >= 1 and d >= 1");
    if (!points_.allFinite())
      throw Error(ErrorKind::DegenerateInput, "point cloud has non-finite coordinates");
  }

  Eigen::Index size() const { return points_.rows(); }
  Eigen::Index dim() const { return points_.cols(); }
  const Matrix& points() const { return points_; }
  auto point(Eigen::Index i) const { return points_.row(i); }

  /// Cloud made of the listed rows, in the given order.
  BasicPointCloud subset(const std::vector<Eigen::Index>& rows) const {
    Matrix out(static_cast<Eigen::Index>(rows.size()), dim());
    for (std::size_t k = 0; k < rows.size(); ++k) out.row(static_cast<Eigen::Index>(k)) = points_.row(rows[k]);
    return BasicPointCloud(std::move(out));
  }

 private:
  Matrix points_;
};

/// Dense symmetric matrix of pairwise distances with zero diagonal.
template <typename Scalar>
class BasicDistanceMatrix {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  /// Validates symmetry, zero diagonal, finiteness and non-negativity.
  explicit BasicDistanceMatrix(Matrix entries) : entries_(std::move(entries)) {
    const Eigen::Index n = entries_.rows();
    if (n < 1 || entries_.cols() != n)
      throw Error(ErrorKind::DegenerateInput, "distance matrix must be square and non-empty");
    for (Eigen::Index j = 0; j < n; ++j) {
      if (entries_(j, j) != Scalar(0))
        throw Error(ErrorKind::DegenerateInput, "distance matrix diagonal must be zero");
      for (Eigen::Index i = j + 1; i < n; ++i) {
        const Scalar v = entries_(i, j);
        if (!std::isfinite(v) || v < Scalar(0) || v != entries_(j, i))
          throw Error(ErrorKind::DegenerateInput, "distance matrix entries must be finite, >= 0 and symmetric");
      }
    }
  }

  Eigen::Index size() const { return entries_.rows(); }
  const Matrix& entries() const { return entries_; }
  Scalar operator()(Eigen::Index i, Eigen::Index j) const { return entries_(i, j); }

  /// Entries strictly above the diagonal, row by row.
  std::vector<Scalar> upper_triangle() const {
    const Eigen::Index n = size();
    std::vector<Scalar> out;
    out.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i + 1; j < n; ++j) out.push_back(entries_(i, j));
    return out;
  }

 private:
  struct Trusted {};
  BasicDistanceMatrix(Matrix entries, Trusted) : entries_(std::move(entries)) {}

  template <typename S>
  friend BasicDistanceMatrix<S> pairwise_distances(const BasicPointCloud<S>&);
  template <typename S>
  friend BasicDistanceMatrix<S> scale_distances(const BasicDistanceMatrix<S>&, S);

  Matrix entries_;
};

using PointCloud = BasicPointCloud<double>;
using DistanceMatrix = BasicDistanceMatrix<double>;

/// Euclidean distances. Each unordered pair is computed once and mirrored,
/// so the result is exactly symmetric. Rows are split across the worker pool.
template <typename Scalar>
BasicDistanceMatrix<Scalar> pairwise_distances(const BasicPointCloud<Scalar>& cloud) {
  const Eigen::Index n = cloud.size();
  const auto& p = cloud.points();
  typename BasicDistanceMatrix<Scalar>::Matrix d(n, n);
  d.diagonal().setZero();
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t row) {
    const auto i = static_cast<Eigen::Index>(row);
    for (Eigen::Index j = i + 1; j < n; ++j) d(j, i) = (p.row(i) - p.row(j)).norm();
  });
  d.template triangularView<Eigen::StrictlyUpper>() = d.transpose();
  return BasicDistanceMatrix<Scalar>(std::move(d), typename BasicDistanceMatrix<Scalar>::Trusted{});
}

inline void check_scale(double t) {
  if (!(t > 0.0) || !std::isfinite(t))
    throw Error(ErrorKind::InvalidScale, "scale must be a finite value in (0, inf), got " + std::to_string(t));
}

/// The metric space tX: every distance multiplied by t > 0.
template <typename Scalar>
BasicDistanceMatrix<Scalar> scale_distances(const BasicDistanceMatrix<Scalar>& dm, Scalar t) {
  check_scale(static_cast<double>(t));
  return BasicDistanceMatrix<Scalar>(dm.entries() * t, typename BasicDistanceMatrix<Scalar>::Trusted{});
}

template <typename Scalar>
Scalar diameter(const BasicDistanceMatrix<Scalar>& dm) {
  return dm.entries().maxCoeff();
}

/// Median of the off-diagonal distances (mean of the two middle values for
/// an even count). Zero for a single point.
template <typename Scalar>
Scalar median_distance(const BasicDistanceMatrix<Scalar>& dm) {
  auto values = dm.upper_triangle();
  if (values.empty()) return Scalar(0);
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  Scalar upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  Scalar lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return (lower + upper) / Scalar(2);
}

/// Smallest non-zero pairwise distance; zero if every pair coincides.
template <typename Scalar>
Scalar min_positive_distance(const BasicDistanceMatrix<Scalar>& dm) {
  Scalar best = Scalar(0);
  for (Scalar v : dm.upper_triangle())
    if (v > Scalar(0) && (best == Scalar(0) || v < best)) best = v;
  return best;
}

}  // namespace magdim
