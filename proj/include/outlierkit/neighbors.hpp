/// @file neighbors.hpp
/// Neighbor-based detectors: k-NN distance, Local Outlier Factor, and the
/// radius-count DNN detector.
///
/// The `exclude` argument names a training row that is treated as absent
/// from the training set for the whole evaluation. Fitting passes each
/// row's own index here; scoring passes nothing.

#pragma once

#include <algorithm>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <sstream>
#include <utility>
#include <vector>

#include "outlierkit/core.hpp"
#include "outlierkit/detail/parallel.hpp"
#include "outlierkit/error.hpp"
#include "outlierkit/index.hpp"

namespace outlierkit {

enum class KnnReduction { maximum, mean, median };

inline std::string_view to_string(KnnReduction r) {
  switch (r) {
    case KnnReduction::maximum: return "maximum";
    case KnnReduction::mean: return "mean";
    case KnnReduction::median: return "median";
  }
  return "mean";
}

inline KnnReduction knn_reduction_from_string(std::string_view token) {
  if (token == "maximum") return KnnReduction::maximum;
  if (token == "mean") return KnnReduction::mean;
  if (token == "median") return KnnReduction::median;
  throw Error(ErrorCode::constraint_violation,
              "reduction must be one of {maximum, mean, median}, got '" + std::string(token) + "'");
}

struct KnnParams {
  std::size_t k = 5;
  KnnReduction reduction = KnnReduction::mean;
};

struct LofParams {
  std::size_t k = 5;
};

struct DnnParams {
  double radius = 0.0;
};

namespace detail {

/// Reduces the ascending k-NN distance list. Median of an even-length list
/// is the mean of the two central values.
inline double reduce_distances(const std::vector<double>& dists, KnnReduction reduction) {
  switch (reduction) {
    case KnnReduction::maximum:
      return dists.back();
    case KnnReduction::mean: {
      double sum = 0.0;
      for (double d : dists) sum += d;
      return sum / static_cast<double>(dists.size());
    }
    case KnnReduction::median: {
      std::size_t mid = dists.size() / 2;
      if (dists.size() % 2 == 1) return dists[mid];
      return (dists[mid - 1] + dists[mid]) / 2.0;
    }
  }
  return 0.0;
}

/// Local reachability densities capped here when duplicated points drive the
/// mean reachability to zero; a CAP/CAP ratio counts as exactly 1.
constexpr double kLrdCap = 1e12;

/// Precomputed per-training-point neighbor lists for LOF. Lists hold
/// min(k+1, n-1) self-excluded nearest neighbors, one more than k so that
/// removing one further row still leaves k usable entries.
class LofContext {
 public:
  LofContext(const NeighborIndex& index, std::size_t k) : index_(&index), k_(k) {
    std::size_t n = index.size();
    if (k_ == 0 || k_ + 1 > n) {
      std::ostringstream msg;
      msg << "lof requires 1 <= k <= n-1 (k=" << k_ << ", n=" << n << ")";
      throw Error(ErrorCode::k_too_large, msg.str());
    }
    std::size_t list_len = std::min(k_ + 1, n - 1);
    lists_.resize(n);
    parallel_for(n, [&](std::size_t i) {
      lists_[i] = index.query_knn(index.point(i), list_len, i);
    });
  }

  const NeighborIndex& index() const noexcept { return *index_; }
  std::size_t k() const noexcept { return k_; }

  /// First k self-excluded neighbors of training row t, skipping `exclude`.
  /// Writes (index, distance) pairs into out; requires the list to still
  /// cover k entries after the skip.
  void neighbors_of(std::size_t t, std::optional<std::size_t> exclude,
                    std::vector<std::pair<std::size_t, double>>& out) const {
    out.clear();
    const NeighborResult& list = lists_[t];
    for (std::size_t p = 0; p < list.size() && out.size() < k_; ++p) {
      if (exclude && *exclude == list.indices[p]) continue;
      out.emplace_back(list.indices[p], list.distances[p]);
    }
  }

  /// k-distance of training row t with `exclude` treated as absent.
  double k_distance(std::size_t t, std::optional<std::size_t> exclude) const {
    const NeighborResult& list = lists_[t];
    std::size_t seen = 0;
    for (std::size_t p = 0; p < list.size(); ++p) {
      if (exclude && *exclude == list.indices[p]) continue;
      if (++seen == k_) return list.distances[p];
    }
    std::ostringstream msg;
    msg << "k=" << k_ << " exceeds usable neighbors of training row " << t;
    throw Error(ErrorCode::k_too_large, msg.str());
  }

  /// lrd of training row t under the exclusion.
  double lrd_of(std::size_t t, std::optional<std::size_t> exclude) const {
    thread_local std::vector<std::pair<std::size_t, double>> nbrs;
    neighbors_of(t, exclude, nbrs);
    double sum = 0.0;
    for (const auto& [u, dist] : nbrs) {
      sum += std::max(k_distance(u, exclude), dist);
    }
    double mean = sum / static_cast<double>(k_);
    return mean == 0.0 ? kLrdCap : 1.0 / mean;
  }

 private:
  const NeighborIndex* index_;
  std::size_t k_;
  std::vector<NeighborResult> lists_;
};

inline double lof_eval(const LofContext& ctx, std::span<const double> point,
                       std::optional<std::size_t> exclude) {
  std::size_t n = ctx.index().size();
  std::size_t k = ctx.k();
  std::size_t effective = n - (exclude.has_value() ? 1 : 0);
  if (k + 1 > effective) {
    std::ostringstream msg;
    msg << "lof requires k <= effective n - 1 (k=" << k << ", effective n=" << effective << ")";
    throw Error(ErrorCode::k_too_large, msg.str());
  }

  NeighborResult knn = ctx.index().query_knn(point, k, exclude);

  double reach_sum = 0.0;
  for (std::size_t p = 0; p < knn.size(); ++p) {
    reach_sum += std::max(ctx.k_distance(knn.indices[p], exclude), knn.distances[p]);
  }
  double reach_mean = reach_sum / static_cast<double>(k);
  double lrd_point = reach_mean == 0.0 ? kLrdCap : 1.0 / reach_mean;

  double ratio_sum = 0.0;
  for (std::size_t p = 0; p < knn.size(); ++p) {
    double lrd_nbr = ctx.lrd_of(knn.indices[p], exclude);
    if (lrd_nbr == kLrdCap && lrd_point == kLrdCap) {
      ratio_sum += 1.0;
    } else {
      ratio_sum += lrd_nbr / lrd_point;
    }
  }
  return ratio_sum / static_cast<double>(k);
}

}  // namespace detail

/// Reduction (max / mean / median) of the k nearest-neighbor distances.
inline double knn_score(const NeighborIndex& index, const KnnParams& params,
                        std::span<const double> point,
                        std::optional<std::size_t> exclude = std::nullopt) {
  NeighborResult knn = index.query_knn(point, params.k, exclude);
  return detail::reduce_distances(knn.distances, params.reduction);
}

/// Local Outlier Factor of `point` against the indexed training set.
inline double lof_score(const NeighborIndex& index, const LofParams& params,
                        std::span<const double> point,
                        std::optional<std::size_t> exclude = std::nullopt) {
  detail::LofContext ctx(index, params.k);
  return detail::lof_eval(ctx, point, exclude);
}

/// Radius-count score 1 / (c + 1), where c counts training points within
/// `radius` (boundary inclusive). Range (0, 1], higher = more outlying.
inline double dnn_score(const NeighborIndex& index, const DnnParams& params,
                        std::span<const double> point,
                        std::optional<std::size_t> exclude = std::nullopt) {
  NeighborResult hits = index.query_radius(point, params.radius, exclude);
  return 1.0 / (static_cast<double>(hits.size()) + 1.0);
}

// --- detector models -------------------------------------------------------

class KnnModel : public Model {
 public:
  KnnModel(NeighborIndex index, KnnParams params)
      : index_(std::move(index)), params_(params) {}

  std::size_t dimension() const override { return index_.dimension(); }

  ScoreVector score_rows(const Matrix& points) const override {
    ScoreVector out(points.rows());
    detail::parallel_for(points.rows(),
                         [&](std::size_t i) { out[i] = knn_score(index_, params_, points.row(i)); });
    return out;
  }

  const NeighborIndex& index() const noexcept { return index_; }
  const KnnParams& params() const noexcept { return params_; }

 private:
  NeighborIndex index_;
  KnnParams params_;
};

class LofModel : public Model {
 public:
  LofModel(std::shared_ptr<const NeighborIndex> index, LofParams params)
      : index_(std::move(index)), params_(params), context_(*index_, params.k) {}

  std::size_t dimension() const override { return index_->dimension(); }

  ScoreVector score_rows(const Matrix& points) const override {
    ScoreVector out(points.rows());
    detail::parallel_for(points.rows(), [&](std::size_t i) {
      out[i] = detail::lof_eval(context_, points.row(i), std::nullopt);
    });
    return out;
  }

  const detail::LofContext& context() const noexcept { return context_; }

 private:
  std::shared_ptr<const NeighborIndex> index_;
  LofParams params_;
  detail::LofContext context_;
};

class DnnModel : public Model {
 public:
  DnnModel(NeighborIndex index, DnnParams params)
      : index_(std::move(index)), params_(params) {}

  std::size_t dimension() const override { return index_.dimension(); }

  ScoreVector score_rows(const Matrix& points) const override {
    ScoreVector out(points.rows());
    detail::parallel_for(points.rows(),
                         [&](std::size_t i) { out[i] = dnn_score(index_, params_, points.row(i)); });
    return out;
  }

  const NeighborIndex& index() const noexcept { return index_; }

 private:
  NeighborIndex index_;
  DnnParams params_;
};

// --- fit entry points ------------------------------------------------------

inline FitOutcome fit_knn(const Dataset& train, const KnnParams& params) {
  if (params.k >= train.size()) {
    std::ostringstream msg;
    msg << "knn needs k < n for self-excluded training scores (k=" << params.k
        << ", n=" << train.size() << ")";
    throw Error(ErrorCode::insufficient_data, msg.str());
  }
  auto model = std::make_shared<KnnModel>(NeighborIndex(train, IndexMode::tree), params);
  ScoreVector train_scores(train.size());
  detail::parallel_for(train.size(), [&](std::size_t i) {
    train_scores[i] = knn_score(model->index(), params, train.features.row(i), i);
  });
  return {std::move(model), std::move(train_scores)};
}

inline FitOutcome fit_lof(const Dataset& train, const LofParams& params) {
  if (params.k + 2 > train.size()) {
    std::ostringstream msg;
    msg << "lof needs k <= n - 2 for self-excluded training scores (k=" << params.k
        << ", n=" << train.size() << ")";
    throw Error(ErrorCode::insufficient_data, msg.str());
  }
  auto index = std::make_shared<const NeighborIndex>(train, IndexMode::tree);
  auto model = std::make_shared<LofModel>(index, params);
  ScoreVector train_scores(train.size());
  detail::parallel_for(train.size(), [&](std::size_t i) {
    train_scores[i] = detail::lof_eval(model->context(), train.features.row(i), i);
  });
  return {std::move(model), std::move(train_scores)};
}

inline FitOutcome fit_dnn(const Dataset& train, const DnnParams& params) {
  if (!(params.radius > 0.0)) {
    std::ostringstream msg;
    msg << "radius must be positive, got " << params.radius;
    throw Error(ErrorCode::non_positive_radius, msg.str());
  }
  auto model = std::make_shared<DnnModel>(NeighborIndex(train, IndexMode::tree), params);
  ScoreVector train_scores(train.size());
  detail::parallel_for(train.size(), [&](std::size_t i) {
    train_scores[i] = dnn_score(model->index(), params, train.features.row(i), i);
  });
  return {std::move(model), std::move(train_scores)};
}

}  // namespace outlierkit
