#pragma once

#include <vector>

#include "magdim/metric.hpp"
#include "magdim/random.hpp"

namespace testing_util {

inline magdim::PointCloud cloud_of(const std::vector<std::vector<double>>& rows) {
  magdim::PointCloud::Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return magdim::PointCloud(std::move(m));
}

/// n points uniform in [0, scale]^d.
inline magdim::PointCloud random_cloud(Eigen::Index n, Eigen::Index d, std::uint64_t seed, double scale = 1.0) {
  magdim::CounterStream rng(magdim::derive_key(seed, 0x7E57u));
  magdim::PointCloud::Matrix m(n, d);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = scale * rng.uniform();
  return magdim::PointCloud(std::move(m));
}

inline std::vector<std::vector<double>> rows_of(const magdim::PointCloud& c) {
  std::vector<std::vector<double>> out(static_cast<std::size_t>(c.size()));
  for (Eigen::Index i = 0; i < c.size(); ++i)
    for (Eigen::Index j = 0; j < c.dim(); ++j) out[static_cast<std::size_t>(i)].push_back(c.points()(i, j));
  return out;
}

}  // namespace testing_util
