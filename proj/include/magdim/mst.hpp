#pragma once

#include <cstddef>
#include <numeric>
#include <vector>

#include "magdim/metric.hpp"

namespace magdim {

/// Union-find with path halving and union by size.
class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), size_(n, 1) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  /// False when a and b were already connected.
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
};

struct MstEdge {
  Eigen::Index a = 0;
  Eigen::Index b = 0;
  double length = 0.0;
};

/// Kruskal over all n(n-1)/2 edges. Equal lengths are ordered by (a, b) so
/// the tree is deterministic.
std::vector<MstEdge> minimum_spanning_tree(const DistanceMatrix& dm);

}  // namespace magdim
