/// @file core.hpp
/// Shared data model and the detector contract.
///
/// Conventions fixed across the toolkit:
///   - outlier scores are finite doubles, higher = more outlying
///   - outliers are the positive class; labels serialize as "normal"/"outlier"
///   - features live in a row-major dense double matrix
///   - fitting excludes a training point from its own neighborhood, scoring
///     compares test points against the full training set

#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <variant>
#include <vector>

#include "outlierkit/error.hpp"

namespace outlierkit {

using ScoreVector = std::vector<double>;

enum class Label : std::uint8_t { normal = 0, outlier = 1 };

inline std::string_view to_string(Label label) {
  return label == Label::outlier ? "outlier" : "normal";
}

inline Label label_from_string(std::string_view token) {
  if (token == "normal") return Label::normal;
  if (token == "outlier") return Label::outlier;
  throw Error(ErrorCode::parse_error, "unrecognized label token '" + std::string(token) + "'");
}

/// Numeric ground truth maps 0 -> normal, 1 -> outlier.
inline Label label_from_numeric(double value) {
  if (value == 0.0) return Label::normal;
  if (value == 1.0) return Label::outlier;
  std::ostringstream msg;
  msg << "numeric label must be 0 or 1, got " << value;
  throw Error(ErrorCode::parse_error, msg.str());
}

/// Row-major dense matrix of doubles. The only feature container.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
      throw Error(ErrorCode::dimension_mismatch,
                  "matrix storage size does not match rows * cols");
    }
  }

  /// Builds from nested rows; all rows must have equal length.
  static Matrix from_rows(const std::vector<std::vector<double>>& rows) {
    Matrix m;
    m.rows_ = rows.size();
    m.cols_ = rows.empty() ? 0 : rows.front().size();
    m.data_.reserve(m.rows_ * m.cols_);
    for (const auto& row : rows) {
      if (row.size() != m.cols_) {
        throw Error(ErrorCode::dimension_mismatch, "ragged rows in matrix literal");
      }
      m.data_.insert(m.data_.end(), row.begin(), row.end());
    }
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(data_.data() + i * cols_, cols_);
  }
  std::span<double> row(std::size_t i) {
    return std::span<double>(data_.data() + i * cols_, cols_);
  }

  const std::vector<double>& data() const noexcept { return data_; }

  bool operator==(const Matrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Feature matrix with optional ground truth and column names.
/// Construct through validate_dataset so the invariants hold.
struct Dataset {
  Matrix features;
  std::optional<std::vector<Label>> labels;
  std::optional<std::vector<std::string>> feature_names;

  std::size_t size() const noexcept { return features.rows(); }
  std::size_t dimension() const noexcept { return features.cols(); }
};

/// Validating constructor for Dataset.
inline Dataset validate_dataset(Matrix features,
                                std::optional<std::vector<Label>> labels = std::nullopt,
                                std::optional<std::vector<std::string>> feature_names = std::nullopt) {
  if (features.rows() == 0 || features.cols() == 0) {
    throw Error(ErrorCode::empty_data, "dataset must have at least one row and one column");
  }
  for (std::size_t i = 0; i < features.rows(); ++i) {
    for (std::size_t j = 0; j < features.cols(); ++j) {
      if (!std::isfinite(features(i, j))) {
        std::ostringstream msg;
        msg << "non-finite feature value at row " << i << ", column " << j;
        throw Error(ErrorCode::non_finite_value, msg.str());
      }
    }
  }
  if (labels && labels->size() != features.rows()) {
    std::ostringstream msg;
    msg << "expected " << features.rows() << " labels, got " << labels->size();
    throw Error(ErrorCode::label_length_mismatch, msg.str());
  }
  if (feature_names) {
    if (feature_names->size() != features.cols()) {
      std::ostringstream msg;
      msg << "expected " << features.cols() << " feature names, got " << feature_names->size();
      throw Error(ErrorCode::duplicate_feature_name, msg.str());
    }
    std::unordered_set<std::string> seen;
    for (const auto& name : *feature_names) {
      if (name.empty()) {
        throw Error(ErrorCode::duplicate_feature_name, "feature names must be non-empty");
      }
      if (!seen.insert(name).second) {
        throw Error(ErrorCode::duplicate_feature_name, "duplicate feature name '" + name + "'");
      }
    }
  }
  return Dataset{std::move(features), std::move(labels), std::move(feature_names)};
}

/// Hyperparameter value: integer, real, or token.
using Value = std::variant<std::int64_t, double, std::string>;

using Hyperparams = std::map<std::string, Value>;

inline std::string value_to_string(const Value& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&v)) {
    std::ostringstream out;
    out << *d;
    return out.str();
  }
  return std::get<std::string>(v);
}

/// Opaque fitted detector state. Immutable after fit; scoring never mutates
/// it, so one model may serve concurrent scoring calls.
class Model {
 public:
  virtual ~Model() = default;

  virtual std::size_t dimension() const = 0;

  /// Raw scores for the given points against the full training set
  /// (no self-exclusion; test points are never index members).
  virtual ScoreVector score_rows(const Matrix& points) const = 0;
};

/// Immutable result of fitting a detector: the model plus the raw training
/// scores every threshold is later derived from.
struct FitResult {
  std::shared_ptr<const Model> model;
  ScoreVector train_scores;
  std::string detector_name;
  Hyperparams hyperparameters;
};

/// What a detector-specific fit routine hands back to the registry.
struct FitOutcome {
  std::shared_ptr<const Model> model;
  ScoreVector train_scores;
};

/// Raw scores of `test` under a fitted detector.
inline ScoreVector score(const FitResult& fitted, const Dataset& test) {
  if (test.dimension() != fitted.model->dimension()) {
    std::ostringstream msg;
    msg << "expected dimension " << fitted.model->dimension() << ", got " << test.dimension();
    throw Error(ErrorCode::dimension_mismatch, msg.str());
  }
  return fitted.model->score_rows(test.features);
}

}  // namespace outlierkit
