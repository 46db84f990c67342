/// @file error.hpp
/// Error codes and the exception type shared by the whole toolkit.

#pragma once

#include <stdexcept>
#include <string>

namespace outlierkit {

enum class ErrorCode {
  // dataset validation
  empty_data,
  non_finite_value,
  label_length_mismatch,
  duplicate_feature_name,
  // detector contract
  unknown_detector,
  invalid_hyperparameter,
  insufficient_data,
  dimension_mismatch,
  // neighbor queries
  k_too_large,
  non_positive_radius,
  // score conversion
  empty_scores,
  wrong_calibration_kind,
  fraction_out_of_range,
  // ensembles
  empty_matrix,
  unnormalized_input,
  // registry
  duplicate_name,
  unknown_parameter,
  constraint_violation,
  // data ingestion
  malformed_row,
  non_numeric_feature,
  missing_label_column,
  parse_error,
  duplicate_dataset_name,
  malformed_checksum,
  transport_error,
  checksum_mismatch,
  unknown_dataset,
  // evaluation
  single_class,
  n_too_large,
  length_mismatch,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::empty_data: return "empty_data";
    case ErrorCode::non_finite_value: return "non_finite_value";
    case ErrorCode::label_length_mismatch: return "label_length_mismatch";
    case ErrorCode::duplicate_feature_name: return "duplicate_feature_name";
    case ErrorCode::unknown_detector: return "unknown_detector";
    case ErrorCode::invalid_hyperparameter: return "invalid_hyperparameter";
    case ErrorCode::insufficient_data: return "insufficient_data";
    case ErrorCode::dimension_mismatch: return "dimension_mismatch";
    case ErrorCode::k_too_large: return "k_too_large";
    case ErrorCode::non_positive_radius: return "non_positive_radius";
    case ErrorCode::empty_scores: return "empty_scores";
    case ErrorCode::wrong_calibration_kind: return "wrong_calibration_kind";
    case ErrorCode::fraction_out_of_range: return "fraction_out_of_range";
    case ErrorCode::empty_matrix: return "empty_matrix";
    case ErrorCode::unnormalized_input: return "unnormalized_input";
    case ErrorCode::duplicate_name: return "duplicate_name";
    case ErrorCode::unknown_parameter: return "unknown_parameter";
    case ErrorCode::constraint_violation: return "constraint_violation";
    case ErrorCode::malformed_row: return "malformed_row";
    case ErrorCode::non_numeric_feature: return "non_numeric_feature";
    case ErrorCode::missing_label_column: return "missing_label_column";
    case ErrorCode::parse_error: return "parse_error";
    case ErrorCode::duplicate_dataset_name: return "duplicate_dataset_name";
    case ErrorCode::malformed_checksum: return "malformed_checksum";
    case ErrorCode::transport_error: return "transport_error";
    case ErrorCode::checksum_mismatch: return "checksum_mismatch";
    case ErrorCode::unknown_dataset: return "unknown_dataset";
    case ErrorCode::single_class: return "single_class";
    case ErrorCode::n_too_large: return "n_too_large";
    case ErrorCode::length_mismatch: return "length_mismatch";
  }
  return "unknown";
}

/// Single exception type; the code identifies the failed contract and the
/// message carries the offending values (row/column, expected vs. got, ...).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        message_(message) {}

  ErrorCode code() const noexcept { return code_; }

  /// Message without the code prefix, for rewrapping.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

}  // namespace outlierkit
