#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "outlierkit/eval.hpp"
#include "oracles.hpp"

using namespace outlierkit;

namespace {

std::vector<Label> to_labels(const std::vector<int>& flags) {
  std::vector<Label> out;
  for (int f : flags) out.push_back(f == 1 ? Label::outlier : Label::normal);
  return out;
}

}  // namespace

TEST_CASE("roc_auc on separable and tied inputs", "[eval]") {
  CHECK(roc_auc({0.1, 0.2, 0.9}, to_labels({0, 0, 1})) == 1.0);
  CHECK(roc_auc({0.5, 0.5, 0.5, 0.5}, to_labels({0, 1, 0, 1})) == 0.5);
  // frozen from the pairwise oracle: 3 wins out of 4 cross pairs
  CHECK(roc_auc({0.8, 0.2, 0.6, 0.4}, to_labels({1, 0, 0, 1})) == 0.75);
  CHECK(oracle::auc_pairwise({0.8, 0.2, 0.6, 0.4}, to_labels({1, 0, 0, 1})) == 0.75);
}

TEST_CASE("roc_auc rejects degenerate inputs", "[eval]") {
  try {
    roc_auc({0.1, 0.2}, to_labels({1, 1}));
    FAIL("expected single_class");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::single_class);
    CHECK_THAT(e.what(), Catch::Matchers::ContainsSubstring("normal"));
  }
  try {
    roc_auc({0.1, 0.2}, to_labels({0, 0}));
    FAIL("expected single_class");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::single_class);
    CHECK_THAT(e.what(), Catch::Matchers::ContainsSubstring("outlier"));
  }
  CHECK_THROWS_AS(roc_auc({0.1}, to_labels({1, 0})), Error);
}

TEST_CASE("roc_auc equals the pairwise oracle with ties", "[eval]") {
  std::mt19937_64 rng(81);
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t n = 10 + rng() % 300;
    ScoreVector scores(n);
    std::vector<Label> labels(n);
    bool any_pos = false;
    bool any_neg = false;
    for (std::size_t i = 0; i < n; ++i) {
      scores[i] = static_cast<double>(rng() % 40) / 4.0;  // coarse grid forces ties
      labels[i] = (rng() % 4 == 0) ? Label::outlier : Label::normal;
      (labels[i] == Label::outlier ? any_pos : any_neg) = true;
    }
    if (!any_pos) labels[0] = Label::outlier;
    if (!any_neg) labels[n - 1] = Label::normal;

    double fast = roc_auc(scores, labels);
    double slow = oracle::auc_pairwise(scores, labels);
    CHECK(fast == Catch::Approx(slow).margin(1e-12));
  }
}

TEST_CASE("roc_auc complement identity holds exactly under midranks", "[eval]") {
  std::mt19937_64 rng(82);
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t n = 5 + rng() % 100;
    ScoreVector scores(n);
    std::vector<Label> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
      scores[i] = static_cast<double>(rng() % 16);
      labels[i] = (i % 3 == 0) ? Label::outlier : Label::normal;
    }
    ScoreVector negated(n);
    for (std::size_t i = 0; i < n; ++i) negated[i] = -scores[i];
    CHECK(roc_auc(scores, labels) + roc_auc(negated, labels) == 1.0);
  }
}

TEST_CASE("roc_auc is invariant under increasing transforms", "[eval]") {
  std::mt19937_64 rng(83);
  ScoreVector scores(60);
  std::vector<Label> labels(60);
  for (std::size_t i = 0; i < scores.size(); ++i) {
    scores[i] = static_cast<double>(rng() % 256) / 8.0;
    labels[i] = (rng() % 5 == 0) ? Label::outlier : Label::normal;
  }
  labels[0] = Label::outlier;
  labels[1] = Label::normal;
  double base = roc_auc(scores, labels);

  ScoreVector mapped(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) mapped[i] = 5.0 * scores[i] - 3.0;
  CHECK(roc_auc(mapped, labels) == base);
}

TEST_CASE("precision_at_n takes the top-n by score with index tie-break", "[eval]") {
  CHECK(precision_at_n({0.9, 0.8, 0.1}, to_labels({1, 0, 1}), 2) == 0.5);

  // n = total count gives the outlier prevalence
  CHECK(precision_at_n({0.4, 0.1, 0.6, 0.2}, to_labels({1, 0, 0, 1}), 4) == 0.5);

  // perfect scores, n = number of outliers
  CHECK(precision_at_n({0.9, 0.95, 0.1, 0.2}, to_labels({1, 1, 0, 0}), 2) == 1.0);

  // tie at the cut: indices 0 and 1 share the score, index 0 wins the slot
  CHECK(precision_at_n({0.5, 0.5, 0.1}, to_labels({1, 0, 0}), 1) == 1.0);
  CHECK(precision_at_n({0.5, 0.5, 0.1}, to_labels({0, 1, 0}), 1) == 0.0);
}

TEST_CASE("precision_at_n rejects bad arguments", "[eval]") {
  try {
    precision_at_n({0.1, 0.2}, to_labels({1, 0}), 3);
    FAIL("expected n_too_large");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::n_too_large);
  }
  CHECK_THROWS_AS(precision_at_n({0.1, 0.2}, to_labels({0, 0}), 1), Error);
}

TEST_CASE("precision_at_n is invariant under increasing transforms", "[eval]") {
  std::mt19937_64 rng(84);
  ScoreVector scores(40);
  std::vector<Label> labels(40);
  for (std::size_t i = 0; i < scores.size(); ++i) {
    scores[i] = static_cast<double>(rng() % 128) / 4.0;
    labels[i] = (rng() % 4 == 0) ? Label::outlier : Label::normal;
  }
  labels[3] = Label::outlier;
  ScoreVector mapped(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) mapped[i] = scores[i] / 2.0 + 7.0;
  for (std::size_t n : {1, 5, 17, 40}) {
    CHECK(precision_at_n(scores, labels, n) == precision_at_n(mapped, labels, n));
  }
}

TEST_CASE("confusion_counts with outlier as the positive class", "[eval]") {
  std::vector<Label> truth = to_labels({1, 0});
  CHECK(confusion_counts(truth, truth) == ConfusionCounts{1, 0, 1, 0});
  CHECK(confusion_counts(to_labels({0, 1}), truth) == ConfusionCounts{0, 1, 0, 1});
  CHECK(confusion_counts(to_labels({1, 1}), to_labels({1, 0})) == ConfusionCounts{1, 1, 0, 0});

  CHECK_THROWS_AS(confusion_counts(to_labels({1}), to_labels({1, 0})), Error);

  std::mt19937_64 rng(85);
  for (int trial = 0; trial < 20; ++trial) {
    std::size_t n = 1 + rng() % 50;
    std::vector<Label> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = rng() % 2 ? Label::outlier : Label::normal;
      b[i] = rng() % 2 ? Label::outlier : Label::normal;
    }
    ConfusionCounts c = confusion_counts(a, b);
    CHECK(c.tp + c.fp + c.tn + c.fn == n);
  }
}
