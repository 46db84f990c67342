/// @file eval.hpp
/// Benchmark metrics. ROC-AUC uses the Mann-Whitney rank statistic with
/// midrank tie handling; precision@n breaks score ties at the cut by
/// ascending instance index so benchmark output is bit-stable.

#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <sstream>
#include <vector>

#include "outlierkit/core.hpp"
#include "outlierkit/error.hpp"

namespace outlierkit {

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  bool operator==(const ConfusionCounts&) const = default;
};

namespace detail {

inline void check_two_classes(const std::vector<Label>& labels) {
  bool has_outlier = false;
  bool has_normal = false;
  for (Label l : labels) {
    (l == Label::outlier ? has_outlier : has_normal) = true;
  }
  if (!has_outlier) {
    throw Error(ErrorCode::single_class, "ground truth contains no outlier labels");
  }
  if (!has_normal) {
    throw Error(ErrorCode::single_class, "ground truth contains no normal labels");
  }
}

}  // namespace detail

/// AUC = (sum of outlier midranks - n_pos(n_pos+1)/2) / (n_pos * n_neg).
inline double roc_auc(const ScoreVector& scores, const std::vector<Label>& labels) {
  if (scores.size() != labels.size()) {
    std::ostringstream msg;
    msg << "scores (" << scores.size() << ") and labels (" << labels.size() << ") differ in length";
    throw Error(ErrorCode::length_mismatch, msg.str());
  }
  detail::check_two_classes(labels);

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] < scores[b];
    return a < b;
  });

  double positive_rank_sum = 0.0;
  std::size_t n_pos = 0;
  std::size_t lo = 0;
  while (lo < order.size()) {
    std::size_t hi = lo;
    while (hi + 1 < order.size() && scores[order[hi + 1]] == scores[order[lo]]) ++hi;
    double midrank = (static_cast<double>(lo + 1) + static_cast<double>(hi + 1)) / 2.0;
    for (std::size_t p = lo; p <= hi; ++p) {
      if (labels[order[p]] == Label::outlier) {
        positive_rank_sum += midrank;
        ++n_pos;
      }
    }
    lo = hi + 1;
  }
  double pos = static_cast<double>(n_pos);
  double neg = static_cast<double>(labels.size() - n_pos);
  return (positive_rank_sum - pos * (pos + 1.0) / 2.0) / (pos * neg);
}

/// Fraction of true outliers among the n highest-scoring instances; ties at
/// the cut resolve to the lower instance index.
inline double precision_at_n(const ScoreVector& scores, const std::vector<Label>& labels,
                             std::size_t n) {
  if (scores.size() != labels.size()) {
    std::ostringstream msg;
    msg << "scores (" << scores.size() << ") and labels (" << labels.size() << ") differ in length";
    throw Error(ErrorCode::length_mismatch, msg.str());
  }
  if (n == 0 || n > scores.size()) {
    std::ostringstream msg;
    msg << "n=" << n << " must lie in [1, " << scores.size() << "]";
    throw Error(ErrorCode::n_too_large, msg.str());
  }
  if (std::none_of(labels.begin(), labels.end(),
                   [](Label l) { return l == Label::outlier; })) {
    throw Error(ErrorCode::single_class, "ground truth contains no outlier labels");
  }

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::partial_sort(order.begin(), order.begin() + n, order.end(),
                    [&](std::size_t a, std::size_t b) {
                      if (scores[a] != scores[b]) return scores[a] > scores[b];
                      return a < b;
                    });
  std::size_t hits = 0;
  for (std::size_t p = 0; p < n; ++p) {
    if (labels[order[p]] == Label::outlier) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(n);
}

/// Outliers are the positive class.
inline ConfusionCounts confusion_counts(const std::vector<Label>& predicted,
                                        const std::vector<Label>& truth) {
  if (predicted.size() != truth.size()) {
    std::ostringstream msg;
    msg << "predicted (" << predicted.size() << ") and truth (" << truth.size()
        << ") differ in length";
    throw Error(ErrorCode::length_mismatch, msg.str());
  }
  ConfusionCounts counts;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    bool pred_out = predicted[i] == Label::outlier;
    bool true_out = truth[i] == Label::outlier;
    if (pred_out && true_out) ++counts.tp;
    else if (pred_out && !true_out) ++counts.fp;
    else if (!pred_out && !true_out) ++counts.tn;
    else ++counts.fn;
  }
  return counts;
}

}  // namespace outlierkit
