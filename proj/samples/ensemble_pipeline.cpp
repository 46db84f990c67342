// Compose several detectors into one probability via the ensemble layer.

#include <iostream>
#include <random>

#include "outlierkit/outlierkit.hpp"

int main() {
  using namespace outlierkit;

  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 200; ++i) rows.push_back({gauss(rng), gauss(rng)});
  Dataset train = validate_dataset(Matrix::from_rows(rows));

  EnsembleConfig config;
  config.members = {
      builtin_registry().validate_spec("knn", {{"k", Value{std::int64_t{10}}}}),
      builtin_registry().validate_spec("lof", {{"k", Value{std::int64_t{10}}}}),
      builtin_registry().validate_spec("hbos", {}),
  };
  config.normalization = CalibrationKind::minmax;
  config.combination = CombineRule::mean;
  config.outlier_fraction = 0.05;

  FittedEnsemble fitted = fit_ensemble(config, train);

  Dataset test = validate_dataset(Matrix::from_rows({{0.1, -0.2}, {4.5, 5.0}}));
  ScoreVector proba = predict_proba(fitted, test);
  std::vector<Label> labels = predict_labels(fitted, test);

  for (std::size_t i = 0; i < proba.size(); ++i) {
    std::cout << "point " << i << ": p=" << proba[i] << " " << to_string(labels[i]) << "\n";
  }
  return 0;
}
