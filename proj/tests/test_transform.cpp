#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>

#include "outlierkit/transform.hpp"

using namespace outlierkit;

namespace {

/// Scores drawn from a coarse lattice: strictly increasing transforms with
/// small rational coefficients cannot collapse distinct values.
ScoreVector lattice_scores(std::mt19937_64& rng, std::size_t n) {
  ScoreVector out(n);
  for (auto& v : out) v = static_cast<double>(rng() % 4096) / 16.0;
  return out;
}

ScoreVector distinct_scores(std::mt19937_64& rng, std::size_t n) {
  std::vector<double> pool(n * 4);
  for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = static_cast<double>(i) / 8.0;
  std::shuffle(pool.begin(), pool.end(), rng);
  return ScoreVector(pool.begin(), pool.begin() + n);
}

}  // namespace

TEST_CASE("calibrate computes training statistics", "[transform]") {
  Calibration mm = calibrate({1.0, 2.0, 3.0}, CalibrationKind::minmax);
  CHECK(mm.train_min == 1.0);
  CHECK(mm.train_max == 3.0);
  CHECK_FALSE(mm.degenerate());

  Calibration flat = calibrate({0.0, 0.0, 0.0, 0.0}, CalibrationKind::unify);
  CHECK(flat.train_mean == 0.0);
  CHECK(flat.train_stddev == 0.0);
  CHECK(flat.degenerate());

  Calibration two = calibrate({1.0, 3.0}, CalibrationKind::unify);
  CHECK(two.train_mean == 2.0);
  CHECK(two.train_stddev == 1.0);  // population formula

  CHECK_THROWS_AS(calibrate({}, CalibrationKind::minmax), Error);
}

TEST_CASE("normalize maps through the training range with clamping", "[transform]") {
  Calibration cal = calibrate({1.0, 2.0, 3.0}, CalibrationKind::minmax);
  CHECK(normalize(cal, {1.0, 2.0, 3.0}) == ScoreVector{0.0, 0.5, 1.0});
  CHECK(normalize(cal, {5.0}) == ScoreVector{1.0});
  CHECK(normalize(cal, {-2.0}) == ScoreVector{0.0});

  Calibration flat = calibrate({4.0, 4.0}, CalibrationKind::minmax);
  CHECK(normalize(flat, {0.0, 4.0, 9.0}) == ScoreVector{0.5, 0.5, 0.5});

  Calibration wrong = calibrate({1.0, 2.0}, CalibrationKind::unify);
  try {
    normalize(wrong, {1.0});
    FAIL("expected wrong_calibration_kind");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::wrong_calibration_kind);
  }
}

TEST_CASE("unify is the clipped erf of the standardized score", "[transform]") {
  Calibration cal = calibrate({0.0, 2.0}, CalibrationKind::unify);  // mean 1, stddev 1
  CHECK(unify(cal, {1.0}) == ScoreVector{0.0});
  CHECK(unify(cal, {0.0}) == ScoreVector{0.0});
  // 2 * Phi(1) - 1, frozen from a high-precision evaluation
  CHECK(unify(cal, {2.0})[0] == Catch::Approx(0.6826894921370859).epsilon(1e-15));

  Calibration flat = calibrate({3.0, 3.0, 3.0}, CalibrationKind::unify);
  CHECK(unify(flat, {3.0, 4.0, 2.0}) == ScoreVector{0.5, 1.0, 0.0});

  Calibration wrong = calibrate({1.0, 2.0}, CalibrationKind::minmax);
  CHECK_THROWS_AS(unify(wrong, {1.0}), Error);
}

TEST_CASE("classify thresholds at the nearest-rank training quantile", "[transform]") {
  ScoreVector train{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};

  SECTION("f = 0.2 picks the 8th smallest, strict inequality") {
    CHECK(classification_threshold(train, 0.2) == 8.0);
    std::vector<Label> labels = classify(train, {7.5, 8.0, 9.0}, 0.2);
    CHECK(labels == std::vector<Label>{Label::normal, Label::normal, Label::outlier});
  }
  SECTION("all-equal training scores flag nothing from the training set") {
    ScoreVector flat(6, 4.0);
    CHECK(classification_threshold(flat, 0.3) == 4.0);
    std::vector<Label> labels = classify(flat, flat, 0.3);
    for (Label l : labels) CHECK(l == Label::normal);
  }
  SECTION("tiny fraction pushes the threshold to the maximum") {
    CHECK(classification_threshold(train, 0.05) == 10.0);
    std::vector<Label> labels = classify(train, {10.0, 10.5}, 0.05);
    CHECK(labels == std::vector<Label>{Label::normal, Label::outlier});
  }
  SECTION("errors") {
    CHECK_THROWS_AS(classify({}, {1.0}, 0.5), Error);
    try {
      classify(train, {1.0}, 1.5);
      FAIL("expected fraction_out_of_range");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::fraction_out_of_range);
    }
    CHECK_THROWS_AS(classify(train, {1.0}, 0.0), Error);
    CHECK_THROWS_AS(classify(train, {1.0}, 1.0), Error);
  }
}

TEST_CASE("normalize and unify preserve score order", "[transform]") {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 200; ++trial) {
    ScoreVector train = lattice_scores(rng, 2 + rng() % 40);
    ScoreVector test = lattice_scores(rng, 2 + rng() % 40);
    for (CalibrationKind kind : {CalibrationKind::minmax, CalibrationKind::unify}) {
      Calibration cal = calibrate(train, kind);
      ScoreVector mapped = apply_calibration(cal, test);
      for (std::size_t i = 0; i < test.size(); ++i) {
        CHECK(mapped[i] >= 0.0);
        CHECK(mapped[i] <= 1.0);
        for (std::size_t j = i + 1; j < test.size(); ++j) {
          if (test[i] < test[j]) {
            CHECK(mapped[i] <= mapped[j]);
          } else if (test[i] > test[j]) {
            CHECK(mapped[i] >= mapped[j]);
          } else {
            CHECK(mapped[i] == mapped[j]);
          }
        }
      }
    }
  }
}

TEST_CASE("classify is invariant under joint increasing transforms", "[transform]") {
  std::mt19937_64 rng(52);
  auto transforms = std::vector<std::function<double(double)>>{
      [](double v) { return 2.0 * v + 3.0; },
      [](double v) { return v / 4.0 - 100.0; },
      [](double v) { return v * v * v; },  // odd power, monotone on all reals
  };
  for (int trial = 0; trial < 200; ++trial) {
    ScoreVector train = lattice_scores(rng, 3 + rng() % 30);
    ScoreVector test = lattice_scores(rng, 1 + rng() % 30);
    double f = (1.0 + static_cast<double>(rng() % 98)) / 100.0;
    std::vector<Label> base = classify(train, test, f);
    for (const auto& g : transforms) {
      ScoreVector train_g(train.size());
      ScoreVector test_g(test.size());
      std::transform(train.begin(), train.end(), train_g.begin(), g);
      std::transform(test.begin(), test.end(), test_g.begin(), g);
      CHECK(classify(train_g, test_g, f) == base);
    }
  }
}

TEST_CASE("flagged training outliers stay within the fraction bound", "[transform]") {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t n = 2 + rng() % 60;
    ScoreVector train = distinct_scores(rng, n);
    double f = (1.0 + static_cast<double>(rng() % 98)) / 100.0;
    std::vector<Label> labels = classify(train, train, f);
    auto flagged = static_cast<std::size_t>(
        std::count(labels.begin(), labels.end(), Label::outlier));
    CHECK(flagged <= static_cast<std::size_t>(std::floor(f * static_cast<double>(n))));
  }
}
