// Fit a single detector and turn raw scores into probabilities and labels.

#include <iostream>

#include "outlierkit/outlierkit.hpp"

int main() {
  using namespace outlierkit;

  Dataset train = validate_dataset(Matrix::from_rows({
      {1.0, 1.1}, {0.9, 1.0}, {1.1, 0.9}, {1.0, 0.95}, {0.95, 1.05},
      {1.05, 1.0}, {0.9, 0.9}, {1.1, 1.1}, {1.0, 1.0}, {0.98, 1.02},
  }));
  Dataset test = validate_dataset(Matrix::from_rows({
      {1.0, 1.0}, {0.92, 1.08}, {8.0, -7.5},
  }));

  FitResult fitted = fit(DetectorSpec{"knn", {{"k", Value{std::int64_t{3}}}}}, train);
  ScoreVector raw = score(fitted, test);

  Calibration cal = calibrate(fitted.train_scores, CalibrationKind::minmax);
  ScoreVector probabilities = normalize(cal, raw);
  std::vector<Label> labels = classify(fitted.train_scores, raw, 0.1);

  for (std::size_t i = 0; i < raw.size(); ++i) {
    std::cout << "point " << i << ": raw=" << raw[i] << " p=" << probabilities[i] << " "
              << to_string(labels[i]) << "\n";
  }
  return 0;
}
