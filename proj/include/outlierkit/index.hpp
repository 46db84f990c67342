/// @file index.hpp
/// Exact Euclidean nearest-neighbor and radius search.
///
/// Two paths share one distance kernel: a brute-force reference and a k-d
/// partition tree. Queries on either path return identical results (same
/// indices, same distances). Candidates are ordered by (squared distance,
/// training-row index); ties in distance always resolve to the lower index.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <sstream>
#include <utility>
#include <vector>

#include "outlierkit/core.hpp"
#include "outlierkit/error.hpp"

namespace outlierkit {

enum class IndexMode { brute, tree };

/// Neighbor query result; distances ascending, indices ascending among
/// equal distances.
struct NeighborResult {
  std::vector<std::size_t> indices;
  std::vector<double> distances;

  std::size_t size() const noexcept { return indices.size(); }
};

namespace detail {

/// Shared per-pair kernel: sum of squared coordinate differences in
/// ascending dimension order. noinline keeps both query paths on the one
/// compiled instance, which is what makes tree == brute an exact equality.
[[gnu::noinline]] inline double squared_distance(const double* a, const double* b,
                                                 std::size_t dim) {
  double sum = 0.0;
  for (std::size_t j = 0; j < dim; ++j) {
    double diff = a[j] - b[j];
    sum += diff * diff;
  }
  return sum;
}

struct Candidate {
  double sq_dist;
  std::size_t index;

  friend bool operator<(const Candidate& a, const Candidate& b) {
    if (a.sq_dist != b.sq_dist) return a.sq_dist < b.sq_dist;
    return a.index < b.index;
  }
};

}  // namespace detail

/// Immutable index over a copy of the training matrix.
class NeighborIndex {
 public:
  static constexpr std::size_t kLeafSize = 16;

  NeighborIndex(const Dataset& train, IndexMode mode)
      : points_(train.features), mode_(mode) {
    if (mode_ == IndexMode::tree) build_tree();
  }

  std::size_t size() const noexcept { return points_.rows(); }
  std::size_t dimension() const noexcept { return points_.cols(); }
  IndexMode mode() const noexcept { return mode_; }
  std::span<const double> point(std::size_t i) const { return points_.row(i); }

  /// The k nearest training points to `point`, optionally pretending one
  /// training row does not exist.
  NeighborResult query_knn(std::span<const double> point, std::size_t k,
                           std::optional<std::size_t> exclude = std::nullopt) const {
    check_dimension(point.size());
    std::size_t available = size() - (exclude.has_value() ? 1 : 0);
    if (k == 0 || k > available) {
      std::ostringstream msg;
      msg << "k=" << k << " exceeds available training points (" << available << ")";
      throw Error(ErrorCode::k_too_large, msg.str());
    }
    std::vector<detail::Candidate> best;
    if (mode_ == IndexMode::tree) {
      best.reserve(k + 1);
      knn_tree(0, point.data(), k, exclude, best);
      std::sort(best.begin(), best.end());
    } else {
      best = knn_brute(point.data(), k, exclude);
    }
    return to_result(best);
  }

  /// All training points within distance r (inclusive), ordered as in
  /// query_knn.
  NeighborResult query_radius(std::span<const double> point, double radius,
                              std::optional<std::size_t> exclude = std::nullopt) const {
    check_dimension(point.size());
    if (!(radius > 0.0)) {
      std::ostringstream msg;
      msg << "radius must be positive, got " << radius;
      throw Error(ErrorCode::non_positive_radius, msg.str());
    }
    std::vector<detail::Candidate> hits;
    if (mode_ == IndexMode::tree) {
      radius_tree(0, point.data(), radius, exclude, hits);
    } else {
      for (std::size_t i = 0; i < size(); ++i) {
        if (exclude && *exclude == i) continue;
        double sq = detail::squared_distance(point.data(), points_.row(i).data(), dimension());
        if (std::sqrt(sq) <= radius) hits.push_back({sq, i});
      }
    }
    std::sort(hits.begin(), hits.end());
    return to_result(hits);
  }

 private:
  struct Node {
    std::uint32_t begin = 0;
    std::uint32_t end = 0;    // leaf range into order_ when leaf
    std::int32_t left = -1;   // child node ids, -1 for leaf
    std::int32_t right = -1;
    std::uint32_t dim = 0;
    double split = 0.0;
  };

  void check_dimension(std::size_t got) const {
    if (got != dimension()) {
      std::ostringstream msg;
      msg << "expected dimension " << dimension() << ", got " << got;
      throw Error(ErrorCode::dimension_mismatch, msg.str());
    }
  }

  void build_tree() {
    order_.resize(size());
    for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = i;
    if (size() > 0) build_node(0, order_.size());
  }

  // Returns the node id. Splits on the widest-spread dimension at the
  // median under the (coordinate, index) total order.
  std::int32_t build_node(std::size_t begin, std::size_t end) {
    std::int32_t id = static_cast<std::int32_t>(nodes_.size());
    nodes_.emplace_back();
    std::size_t count = end - begin;

    double best_spread = -1.0;
    std::size_t best_dim = 0;
    for (std::size_t j = 0; j < dimension(); ++j) {
      double lo = std::numeric_limits<double>::infinity();
      double hi = -std::numeric_limits<double>::infinity();
      for (std::size_t p = begin; p < end; ++p) {
        double v = points_(order_[p], j);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      double spread = hi - lo;
      if (spread > best_spread) {
        best_spread = spread;
        best_dim = j;
      }
    }

    if (count <= kLeafSize || best_spread == 0.0) {
      std::sort(order_.begin() + begin, order_.begin() + end);
      nodes_[id].begin = static_cast<std::uint32_t>(begin);
      nodes_[id].end = static_cast<std::uint32_t>(end);
      return id;
    }

    std::size_t mid = begin + count / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](std::size_t a, std::size_t b) {
                       double va = points_(a, best_dim);
                       double vb = points_(b, best_dim);
                       if (va != vb) return va < vb;
                       return a < b;
                     });
    double split = points_(order_[mid], best_dim);

    nodes_[id].dim = static_cast<std::uint32_t>(best_dim);
    nodes_[id].split = split;
    std::int32_t left = build_node(begin, mid);
    std::int32_t right = build_node(mid, end);
    nodes_[id].left = left;
    nodes_[id].right = right;
    return id;
  }

  std::vector<detail::Candidate> knn_brute(const double* q, std::size_t k,
                                           std::optional<std::size_t> exclude) const {
    std::vector<detail::Candidate> all;
    all.reserve(size());
    for (std::size_t i = 0; i < size(); ++i) {
      if (exclude && *exclude == i) continue;
      all.push_back({detail::squared_distance(q, points_.row(i).data(), dimension()), i});
    }
    std::partial_sort(all.begin(), all.begin() + k, all.end());
    all.resize(k);
    return all;
  }

  // Bounded worst-first heap on (sq_dist, index). A subtree is pruned only
  // when the squared plane distance strictly exceeds the current worst;
  // equality must still be visited so a tied lower index can win.
  void knn_tree(std::int32_t id, const double* q, std::size_t k,
                std::optional<std::size_t> exclude,
                std::vector<detail::Candidate>& heap) const {
    const Node& node = nodes_[id];
    if (node.left < 0) {
      for (std::uint32_t p = node.begin; p < node.end; ++p) {
        std::size_t i = order_[p];
        if (exclude && *exclude == i) continue;
        detail::Candidate cand{detail::squared_distance(q, points_.row(i).data(), dimension()), i};
        if (heap.size() < k) {
          heap.push_back(cand);
          std::push_heap(heap.begin(), heap.end());
        } else if (cand < heap.front()) {
          std::pop_heap(heap.begin(), heap.end());
          heap.back() = cand;
          std::push_heap(heap.begin(), heap.end());
        }
      }
      return;
    }
    double diff = q[node.dim] - node.split;
    std::int32_t near = diff <= 0.0 ? node.left : node.right;
    std::int32_t far = diff <= 0.0 ? node.right : node.left;
    knn_tree(near, q, k, exclude, heap);
    double plane_sq = diff * diff;
    if (heap.size() < k || !(plane_sq > heap.front().sq_dist)) {
      knn_tree(far, q, k, exclude, heap);
    }
  }

  // Pruning compares the plane distance routed through the same
  // square-then-sqrt rounding as reported distances, keeping the inclusive
  // boundary exact against brute force.
  void radius_tree(std::int32_t id, const double* q, double radius,
                   std::optional<std::size_t> exclude,
                   std::vector<detail::Candidate>& hits) const {
    const Node& node = nodes_[id];
    if (node.left < 0) {
      for (std::uint32_t p = node.begin; p < node.end; ++p) {
        std::size_t i = order_[p];
        if (exclude && *exclude == i) continue;
        double sq = detail::squared_distance(q, points_.row(i).data(), dimension());
        if (std::sqrt(sq) <= radius) hits.push_back({sq, i});
      }
      return;
    }
    double diff = q[node.dim] - node.split;
    std::int32_t near = diff <= 0.0 ? node.left : node.right;
    std::int32_t far = diff <= 0.0 ? node.right : node.left;
    radius_tree(near, q, radius, exclude, hits);
    if (!(std::sqrt(diff * diff) > radius)) {
      radius_tree(far, q, radius, exclude, hits);
    }
  }

  static NeighborResult to_result(const std::vector<detail::Candidate>& sorted) {
    NeighborResult result;
    result.indices.reserve(sorted.size());
    result.distances.reserve(sorted.size());
    for (const auto& c : sorted) {
      result.indices.push_back(c.index);
      result.distances.push_back(std::sqrt(c.sq_dist));
    }
    return result;
  }

  Matrix points_;
  IndexMode mode_;
  std::vector<Node> nodes_;
  std::vector<std::size_t> order_;
};

inline NeighborIndex build_index(const Dataset& train, IndexMode mode) {
  return NeighborIndex(train, mode);
}

}  // namespace outlierkit
