#include "orbit/kdtree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace orbit {

KdTree::KdTree(RealMatrix points) : points_(std::move(points)) {
  if (points_.cols() == 0) return;
  std::vector<std::size_t> order(static_cast<std::size_t>(points_.cols()));
  std::iota(order.begin(), order.end(), std::size_t{0});
  nodes_.reserve(order.size());
  root_ = build(order, 0, order.size(), 0);
}

int KdTree::build(std::vector<std::size_t>& order, std::size_t lo, std::size_t hi, int depth) {
  if (lo >= hi) return -1;
  const int id = static_cast<int>(nodes_.size());
  nodes_.push_back({});
  if (hi - lo == 1 || points_.rows() == 0) {
    nodes_[id].point = order[lo];
    if (hi - lo > 1) {
      // zero-dimensional points: chain the rest as a degenerate list
      nodes_[id].axis = 0;
      nodes_[id].right = build(order, lo + 1, hi, depth + 1);
    }
    return id;
  }
  const int axis = static_cast<int>(depth % points_.rows());
  const std::size_t mid = lo + (hi - lo) / 2;
  std::nth_element(order.begin() + static_cast<std::ptrdiff_t>(lo), order.begin() + static_cast<std::ptrdiff_t>(mid),
                   order.begin() + static_cast<std::ptrdiff_t>(hi), [&](std::size_t a, std::size_t b) {
                     const double va = points_(axis, static_cast<Eigen::Index>(a));
                     const double vb = points_(axis, static_cast<Eigen::Index>(b));
                     return va < vb || (va == vb && a < b);
                   });
  nodes_[id].point = order[mid];
  nodes_[id].axis = axis;
  const int left = build(order, lo, mid, depth + 1);
  const int right = build(order, mid + 1, hi, depth + 1);
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

void KdTree::search(int node, const RealVector& query, std::size_t k,
                    std::vector<std::pair<double, std::size_t>>& heap) const {
  if (node < 0) return;
  const Node& nd = nodes_[static_cast<std::size_t>(node)];
  const auto col = static_cast<Eigen::Index>(nd.point);
  const std::pair<double, std::size_t> candidate{(points_.col(col) - query).squaredNorm(), nd.point};
  if (heap.size() < k) {
    heap.push_back(candidate);
    std::push_heap(heap.begin(), heap.end());
  } else if (candidate < heap.front()) {
    std::pop_heap(heap.begin(), heap.end());
    heap.back() = candidate;
    std::push_heap(heap.begin(), heap.end());
  }
  if (nd.axis < 0) return;
  if (points_.rows() == 0) {
    search(nd.right, query, k, heap);
    return;
  }
  const double diff = query(nd.axis) - points_(nd.axis, col);
  const int near = diff < 0.0 ? nd.left : nd.right;
  const int far = diff < 0.0 ? nd.right : nd.left;
  search(near, query, k, heap);
  // <= keeps equal-distance candidates with smaller indices reachable
  if (heap.size() < k || diff * diff <= heap.front().first) search(far, query, k, heap);
}

std::vector<KdTree::Neighbor> KdTree::nearest(const RealVector& query, std::size_t k) const {
  if (query.size() != points_.rows()) {
    throw Error(ErrorCode::ShapeMismatch, "query dimension does not match the index");
  }
  k = std::min(k, size());
  std::vector<std::pair<double, std::size_t>> heap;
  heap.reserve(k + 1);
  if (k > 0) search(root_, query, k, heap);
  std::sort_heap(heap.begin(), heap.end());
  std::vector<Neighbor> out;
  out.reserve(heap.size());
  for (const auto& [d2, idx] : heap) out.push_back({idx, std::sqrt(d2)});
  return out;
}

}  // namespace orbit
