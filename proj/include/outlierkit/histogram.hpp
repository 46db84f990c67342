/// @file histogram.hpp
/// HBOS-style histogram detector: per-feature equal-width histograms over
/// the training range, scored as summed negative log densities with Laplace
/// smoothing so every density stays strictly positive.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <span>
#include <sstream>
#include <vector>

#include "outlierkit/core.hpp"
#include "outlierkit/detail/parallel.hpp"
#include "outlierkit/error.hpp"

namespace outlierkit {

struct HbosParams {
  std::size_t bins = 10;
};

/// One fitted feature: [lo, hi] training range, equal-width bin counts, and
/// a degenerate marker when the feature is constant.
struct FeatureHistogram {
  double lo = 0.0;
  double hi = 0.0;
  double width = 0.0;
  bool degenerate = false;
  std::vector<std::size_t> counts;
};

class HbosModel : public Model {
 public:
  HbosModel(std::vector<FeatureHistogram> features, std::size_t train_size, std::size_t bins)
      : features_(std::move(features)), train_size_(train_size), bins_(bins) {}

  std::size_t dimension() const override { return features_.size(); }
  std::size_t train_size() const noexcept { return train_size_; }
  std::size_t bins() const noexcept { return bins_; }
  const std::vector<FeatureHistogram>& features() const noexcept { return features_; }

  ScoreVector score_rows(const Matrix& points) const override;

 private:
  std::vector<FeatureHistogram> features_;
  std::size_t train_size_;
  std::size_t bins_;
};

/// Equal-width histograms over the training range; a value equal to the
/// range maximum falls in the last bin (right-closed last bin).
inline HbosModel hbos_fit(const Dataset& train, const HbosParams& params) {
  if (params.bins == 0) {
    throw Error(ErrorCode::constraint_violation, "bins must be >= 1");
  }
  if (train.size() == 0 || train.dimension() == 0) {
    throw Error(ErrorCode::empty_data, "hbos requires a non-empty training set");
  }
  std::size_t n = train.size();
  std::size_t d = train.dimension();
  std::size_t b = params.bins;

  std::vector<FeatureHistogram> features(d);
  for (std::size_t j = 0; j < d; ++j) {
    FeatureHistogram& f = features[j];
    f.lo = train.features(0, j);
    f.hi = train.features(0, j);
    for (std::size_t i = 1; i < n; ++i) {
      f.lo = std::min(f.lo, train.features(i, j));
      f.hi = std::max(f.hi, train.features(i, j));
    }
    if (f.lo == f.hi) {
      f.degenerate = true;
      continue;
    }
    f.width = (f.hi - f.lo) / static_cast<double>(b);
    f.counts.assign(b, 0);
    for (std::size_t i = 0; i < n; ++i) {
      double v = train.features(i, j);
      auto bin = static_cast<std::size_t>((v - f.lo) / f.width);
      if (bin >= b) bin = b - 1;
      ++f.counts[bin];
    }
  }
  return HbosModel(std::move(features), n, b);
}

/// Sum over features of -log(density). Smoothed density per feature:
///   in range:       (count + 1) / ((n + b) * width)
///   out of range:   1 / ((n + b) * width)
///   degenerate:     (n + 1)/(n + 1) = 1 on the constant, 1/(n + 1) elsewhere
inline double hbos_score(const HbosModel& model, std::span<const double> point) {
  if (point.size() != model.dimension()) {
    std::ostringstream msg;
    msg << "expected dimension " << model.dimension() << ", got " << point.size();
    throw Error(ErrorCode::dimension_mismatch, msg.str());
  }
  double n = static_cast<double>(model.train_size());
  double b = static_cast<double>(model.bins());
  double score = 0.0;
  for (std::size_t j = 0; j < model.dimension(); ++j) {
    const FeatureHistogram& f = model.features()[j];
    double x = point[j];
    double density;
    if (f.degenerate) {
      double match = x == f.lo ? n : 0.0;
      density = (match + 1.0) / (n + 1.0);
    } else if (x < f.lo || x > f.hi) {
      density = 1.0 / ((n + b) * f.width);
    } else {
      auto bin = static_cast<std::size_t>((x - f.lo) / f.width);
      if (bin >= f.counts.size()) bin = f.counts.size() - 1;
      density = (static_cast<double>(f.counts[bin]) + 1.0) / ((n + b) * f.width);
    }
    score += -std::log(density);
  }
  return score;
}

inline ScoreVector HbosModel::score_rows(const Matrix& points) const {
  ScoreVector out(points.rows());
  detail::parallel_for(points.rows(),
                       [&](std::size_t i) { out[i] = hbos_score(*this, points.row(i)); });
  return out;
}

/// Training scores are plain model scores of the training rows: histogram
/// counts keep the scored point (removing it would change the model's own
/// ranges, unlike the neighbor detectors' self-exclusion).
inline FitOutcome fit_hbos(const Dataset& train, const HbosParams& params) {
  auto model = std::make_shared<HbosModel>(hbos_fit(train, params));
  ScoreVector train_scores = model->score_rows(train.features);
  return {std::move(model), std::move(train_scores)};
}

}  // namespace outlierkit
