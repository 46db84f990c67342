/// @file ensemble.hpp
/// Model composition over normalized score matrices. Each member is fitted
/// on the full training set and calibrated on its own training scores;
/// combination happens only after per-member normalization because raw
/// scales across detectors are not comparable.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "outlierkit/core.hpp"
#include "outlierkit/error.hpp"
#include "outlierkit/registry.hpp"
#include "outlierkit/transform.hpp"

namespace outlierkit {

enum class CombineRule { mean, maximum, median };

inline std::string_view to_string(CombineRule rule) {
  switch (rule) {
    case CombineRule::mean: return "mean";
    case CombineRule::maximum: return "maximum";
    case CombineRule::median: return "median";
  }
  return "mean";
}

/// Accepts "max" as an alias for maximum.
inline CombineRule combine_rule_from_string(std::string_view token) {
  if (token == "mean") return CombineRule::mean;
  if (token == "maximum" || token == "max") return CombineRule::maximum;
  if (token == "median") return CombineRule::median;
  throw Error(ErrorCode::parse_error,
              "combination must be one of {mean, maximum, median}, got '" + std::string(token) + "'");
}

/// Instances x detectors matrix of normalized scores.
struct ScoreMatrix {
  Matrix values;
  std::vector<std::string> column_names;

  std::size_t instances() const noexcept { return values.rows(); }
  std::size_t members() const noexcept { return values.cols(); }
};

inline ScoreMatrix make_score_matrix(const std::vector<ScoreVector>& columns,
                                     std::vector<std::string> column_names) {
  std::size_t m = columns.size();
  std::size_t n = m == 0 ? 0 : columns.front().size();
  Matrix values(n, m);
  for (std::size_t c = 0; c < m; ++c) {
    if (columns[c].size() != n) {
      throw Error(ErrorCode::length_mismatch, "score columns differ in length");
    }
    for (std::size_t r = 0; r < n; ++r) values(r, c) = columns[c][r];
  }
  return ScoreMatrix{std::move(values), std::move(column_names)};
}

/// Row-wise reduction of a normalized score matrix.
inline ScoreVector combine(const ScoreMatrix& matrix, CombineRule rule) {
  std::size_t m = matrix.members();
  if (m == 0) {
    throw Error(ErrorCode::empty_matrix, "score matrix has no detector columns");
  }
  for (std::size_t r = 0; r < matrix.instances(); ++r) {
    for (std::size_t c = 0; c < m; ++c) {
      double v = matrix.values(r, c);
      if (!std::isfinite(v) || v < -1e-12 || v > 1.0 + 1e-12) {
        std::ostringstream msg;
        msg << "score at row " << r << ", column " << c << " is not normalized: " << v;
        throw Error(ErrorCode::unnormalized_input, msg.str());
      }
    }
  }

  ScoreVector out(matrix.instances());
  std::vector<double> row(m);
  for (std::size_t r = 0; r < matrix.instances(); ++r) {
    for (std::size_t c = 0; c < m; ++c) row[c] = matrix.values(r, c);
    switch (rule) {
      case CombineRule::mean: {
        double sum = 0.0;
        for (double v : row) sum += v;
        out[r] = sum / static_cast<double>(m);
        break;
      }
      case CombineRule::maximum:
        out[r] = *std::max_element(row.begin(), row.end());
        break;
      case CombineRule::median: {
        std::sort(row.begin(), row.end());
        std::size_t mid = m / 2;
        out[r] = m % 2 == 1 ? row[mid] : (row[mid - 1] + row[mid]) / 2.0;
        break;
      }
    }
  }
  return out;
}

/// Declarative pipeline: members, normalization, combination, and the
/// outlier fraction used for classification.
struct EnsembleConfig {
  std::vector<DetectorSpec> members;
  CalibrationKind normalization = CalibrationKind::minmax;
  CombineRule combination = CombineRule::mean;
  double outlier_fraction = 0.1;
};

struct FittedEnsemble {
  EnsembleConfig config;
  std::vector<FitResult> members;
  std::vector<Calibration> calibrations;
  ScoreVector train_combined;
};

/// Fits every member independently on the full training set, calibrates
/// each on its own training scores, and stores the combined training score
/// vector for later classification. Member failures carry the member index.
inline FittedEnsemble fit_ensemble(const Registry& registry, const EnsembleConfig& config,
                                   const Dataset& train) {
  if (config.members.empty()) {
    throw Error(ErrorCode::empty_matrix, "ensemble config has no members");
  }
  if (!(config.outlier_fraction > 0.0) || !(config.outlier_fraction < 1.0)) {
    std::ostringstream msg;
    msg << "outlier_fraction must lie in (0, 1), got " << config.outlier_fraction;
    throw Error(ErrorCode::fraction_out_of_range, msg.str());
  }

  FittedEnsemble fitted;
  fitted.config = config;
  std::vector<ScoreVector> normalized_columns;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < config.members.size(); ++i) {
    const DetectorSpec& spec = config.members[i];
    try {
      FitResult member = fit(registry, spec, train);
      Calibration cal = calibrate(member.train_scores, config.normalization);
      normalized_columns.push_back(apply_calibration(cal, member.train_scores));
      names.push_back(member.detector_name);
      fitted.members.push_back(std::move(member));
      fitted.calibrations.push_back(cal);
    } catch (const Error& e) {
      std::ostringstream msg;
      msg << "member " << i << " ('" << spec.name << "'): " << e.message();
      throw Error(e.code(), msg.str());
    }
  }
  fitted.train_combined =
      combine(make_score_matrix(normalized_columns, names), config.combination);
  return fitted;
}

inline FittedEnsemble fit_ensemble(const EnsembleConfig& config, const Dataset& train) {
  return fit_ensemble(builtin_registry(), config, train);
}

/// Raw per-member scores of the test set (instances x members).
inline ScoreMatrix member_scores(const FittedEnsemble& fitted, const Dataset& test) {
  std::vector<ScoreVector> columns;
  std::vector<std::string> names;
  for (const FitResult& member : fitted.members) {
    columns.push_back(score(member, test));
    names.push_back(member.detector_name);
  }
  return make_score_matrix(columns, names);
}

/// Per-member calibrations applied to a raw score matrix.
inline ScoreMatrix apply_calibrations(const FittedEnsemble& fitted, const ScoreMatrix& raw) {
  std::vector<ScoreVector> columns;
  for (std::size_t c = 0; c < raw.members(); ++c) {
    ScoreVector column(raw.instances());
    for (std::size_t r = 0; r < raw.instances(); ++r) column[r] = raw.values(r, c);
    columns.push_back(apply_calibration(fitted.calibrations[c], column));
  }
  return make_score_matrix(columns, raw.column_names);
}

/// Combined normalized scores in [0,1]: score each member, apply its
/// calibration, combine by the configured rule.
inline ScoreVector predict_proba(const FittedEnsemble& fitted, const Dataset& test) {
  ScoreMatrix raw = member_scores(fitted, test);
  ScoreMatrix normalized = apply_calibrations(fitted, raw);
  return combine(normalized, fitted.config.combination);
}

/// Threshold classification of the combined scores against the combined
/// training scores.
inline std::vector<Label> predict_labels(const FittedEnsemble& fitted, const Dataset& test) {
  ScoreVector proba = predict_proba(fitted, test);
  return classify(fitted.train_combined, proba, fitted.config.outlier_fraction);
}

}  // namespace outlierkit
