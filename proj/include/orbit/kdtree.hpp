#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "orbit/matcore.hpp"

namespace orbit {

/// Exact k-nearest-neighbour index over fixed-dimension points. Ties in
/// distance are broken by the smaller point index, so results match a
/// stable brute-force sort.
class KdTree {
 public:
  struct Neighbor {
    std::size_t index;
    double distance;
  };

  KdTree() = default;
  /// Columns of `points` are the points.
  explicit KdTree(RealMatrix points);

  std::vector<Neighbor> nearest(const RealVector& query, std::size_t k) const;

  std::size_t size() const { return static_cast<std::size_t>(points_.cols()); }
  Eigen::Index dim() const { return points_.rows(); }

 private:
  struct Node {
    std::size_t point;   // index into points_
    int axis = -1;       // -1 for leaves
    int left = -1;
    int right = -1;
  };

  int build(std::vector<std::size_t>& order, std::size_t lo, std::size_t hi, int depth);
  void search(int node, const RealVector& query, std::size_t k,
              std::vector<std::pair<double, std::size_t>>& heap) const;

  RealMatrix points_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

}  // namespace orbit
