/// @file transform.hpp
/// Score conversion: calibration statistics, [0,1] normalization,
/// probability-style unification, and threshold classification.
///
/// Every statistic here is computed from training scores only; test scores
/// are never part of a calibration. Thresholds come from the nearest-rank
/// upper quantile of the training scores, and the outlier decision uses a
/// strict inequality so threshold ties stay "normal".

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <sstream>
#include <vector>

#include "outlierkit/core.hpp"
#include "outlierkit/error.hpp"

namespace outlierkit {

enum class CalibrationKind { minmax, unify };

inline std::string_view to_string(CalibrationKind kind) {
  return kind == CalibrationKind::minmax ? "minmax" : "unify";
}

inline CalibrationKind calibration_kind_from_string(std::string_view token) {
  if (token == "minmax") return CalibrationKind::minmax;
  if (token == "unify") return CalibrationKind::unify;
  throw Error(ErrorCode::parse_error,
              "normalization must be 'minmax' or 'unify', got '" + std::string(token) + "'");
}

/// Training-score statistics backing normalize/unify.
struct Calibration {
  CalibrationKind kind = CalibrationKind::minmax;
  double train_min = 0.0;
  double train_max = 0.0;
  double train_mean = 0.0;
  double train_stddev = 0.0;  // population formula

  bool degenerate() const noexcept {
    return kind == CalibrationKind::minmax ? train_min == train_max : train_stddev == 0.0;
  }
};

inline Calibration calibrate(const ScoreVector& train_scores, CalibrationKind kind) {
  if (train_scores.empty()) {
    throw Error(ErrorCode::empty_scores, "cannot calibrate on an empty score vector");
  }
  Calibration cal;
  cal.kind = kind;
  if (kind == CalibrationKind::minmax) {
    auto [lo, hi] = std::minmax_element(train_scores.begin(), train_scores.end());
    cal.train_min = *lo;
    cal.train_max = *hi;
  } else {
    double n = static_cast<double>(train_scores.size());
    double sum = 0.0;
    for (double s : train_scores) sum += s;
    double mean = sum / n;
    double sq = 0.0;
    for (double s : train_scores) {
      double diff = s - mean;
      sq += diff * diff;
    }
    cal.train_mean = mean;
    cal.train_stddev = std::sqrt(sq / n);
  }
  return cal;
}

/// Min-max scaling clamped to [0,1]; a degenerate (constant) calibration
/// maps everything to 0.5.
inline ScoreVector normalize(const Calibration& cal, const ScoreVector& scores) {
  if (cal.kind != CalibrationKind::minmax) {
    throw Error(ErrorCode::wrong_calibration_kind, "normalize requires a minmax calibration");
  }
  ScoreVector out(scores.size());
  double range = cal.train_max - cal.train_min;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (range == 0.0) {
      out[i] = 0.5;
    } else {
      out[i] = std::clamp((scores[i] - cal.train_min) / range, 0.0, 1.0);
    }
  }
  return out;
}

/// Gaussian-style scaling: erf of the standardized score, negatives clipped
/// to 0. Below-mean scores carry no outlier evidence.
inline ScoreVector unify(const Calibration& cal, const ScoreVector& scores) {
  if (cal.kind != CalibrationKind::unify) {
    throw Error(ErrorCode::wrong_calibration_kind, "unify requires a unify calibration");
  }
  ScoreVector out(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    double s = scores[i];
    if (cal.train_stddev == 0.0) {
      out[i] = s == cal.train_mean ? 0.5 : (s > cal.train_mean ? 1.0 : 0.0);
    } else {
      double z = (s - cal.train_mean) / (cal.train_stddev * std::numbers::sqrt2);
      out[i] = std::max(0.0, std::erf(z));
    }
  }
  return out;
}

inline ScoreVector apply_calibration(const Calibration& cal, const ScoreVector& scores) {
  return cal.kind == CalibrationKind::minmax ? normalize(cal, scores) : unify(cal, scores);
}

/// Nearest-rank upper quantile of the training scores: the
/// ceil((1 - f) * n)-th smallest value.
inline double classification_threshold(const ScoreVector& train_scores, double outlier_fraction) {
  if (train_scores.empty()) {
    throw Error(ErrorCode::empty_scores, "cannot derive a threshold from empty training scores");
  }
  if (!(outlier_fraction > 0.0) || !(outlier_fraction < 1.0)) {
    std::ostringstream msg;
    msg << "outlier_fraction must lie in (0, 1), got " << outlier_fraction;
    throw Error(ErrorCode::fraction_out_of_range, msg.str());
  }
  std::size_t n = train_scores.size();
  auto rank = static_cast<std::size_t>(
      std::ceil((1.0 - outlier_fraction) * static_cast<double>(n)));
  rank = std::clamp<std::size_t>(rank, 1, n);
  ScoreVector sorted(train_scores);
  std::nth_element(sorted.begin(), sorted.begin() + (rank - 1), sorted.end());
  return sorted[rank - 1];
}

/// Labels test scores as outlier iff strictly above the training threshold.
inline std::vector<Label> classify(const ScoreVector& train_scores,
                                   const ScoreVector& test_scores, double outlier_fraction) {
  double threshold = classification_threshold(train_scores, outlier_fraction);
  std::vector<Label> labels(test_scores.size());
  for (std::size_t i = 0; i < test_scores.size(); ++i) {
    labels[i] = test_scores[i] > threshold ? Label::outlier : Label::normal;
  }
  return labels;
}

}  // namespace outlierkit
