#include <catch2/catch_amalgamated.hpp>

#include "outlierkit/config.hpp"

using namespace outlierkit;

TEST_CASE("a minimal config gets every default", "[config]") {
  EnsembleConfig config = parse_config("[member]\ndetector = knn\n");
  CHECK(config.normalization == CalibrationKind::minmax);
  CHECK(config.combination == CombineRule::mean);
  CHECK(config.outlier_fraction == 0.1);
  REQUIRE(config.members.size() == 1);
  CHECK(config.members[0].name == "knn");
  CHECK(std::get<std::int64_t>(config.members[0].params.at("k")) == 5);
  CHECK(std::get<std::string>(config.members[0].params.at("reduction")) == "mean");
}

TEST_CASE("config keys, comments, and aliases", "[config]") {
  std::string text =
      "# pipeline\n"
      "normalization = unify\n"
      "combination = max   # alias for maximum\n"
      "outlier_fraction = 0.25\n"
      "\n"
      "[member]\n"
      "detector = lof\n"
      "k = 7\n"
      "[member]\n"
      "detector = dnn\n"
      "radius = 1.5\n";
  EnsembleConfig config = parse_config(text);
  CHECK(config.normalization == CalibrationKind::unify);
  CHECK(config.combination == CombineRule::maximum);
  CHECK(config.outlier_fraction == 0.25);
  REQUIRE(config.members.size() == 2);
  CHECK(std::get<std::int64_t>(config.members[0].params.at("k")) == 7);
  CHECK(std::get<double>(config.members[1].params.at("radius")) == 1.5);
}

TEST_CASE("config parse errors name the offender and line", "[config]") {
  SECTION("unknown top-level key") {
    try {
      parse_config("[member]\ndetector = knn\n"); // baseline parses
      parse_config("speed = 11\n[member]\ndetector = knn\n");
      FAIL("expected parse_error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::parse_error);
      CHECK_THAT(e.what(), Catch::Matchers::ContainsSubstring("'speed'"));
      CHECK_THAT(e.what(), Catch::Matchers::ContainsSubstring("line 1"));
    }
  }
  SECTION("missing equals sign") {
    CHECK_THROWS_AS(parse_config("normalization minmax\n[member]\ndetector = knn\n"), Error);
  }
  SECTION("no members") {
    CHECK_THROWS_AS(parse_config("normalization = minmax\n"), Error);
  }
  SECTION("member without detector") {
    CHECK_THROWS_AS(parse_config("[member]\nk = 5\n"), Error);
  }
  SECTION("duplicate keys") {
    CHECK_THROWS_AS(
        parse_config("combination = mean\ncombination = max\n[member]\ndetector = knn\n"), Error);
    CHECK_THROWS_AS(parse_config("[member]\ndetector = knn\nk = 5\nk = 6\n"), Error);
  }
  SECTION("unknown section") {
    CHECK_THROWS_AS(parse_config("[ensemble]\ndetector = knn\n"), Error);
  }
}

TEST_CASE("config member validation goes through the registry", "[config]") {
  SECTION("unknown detector") {
    try {
      parse_config("[member]\ndetector = isolationforest\n");
      FAIL("expected unknown_detector");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::unknown_detector);
    }
  }
  SECTION("unknown parameter") {
    try {
      parse_config("[member]\ndetector = knn\nq = 3\n");
      FAIL("expected unknown_parameter");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::unknown_parameter);
      CHECK_THAT(e.what(), Catch::Matchers::ContainsSubstring("'q'"));
    }
  }
  SECTION("constraint violation") {
    try {
      parse_config("[member]\ndetector = knn\nk = 0\n");
      FAIL("expected constraint_violation");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::constraint_violation);
      CHECK_THAT(e.what(), Catch::Matchers::ContainsSubstring("k >= 1"));
    }
  }
}

TEST_CASE("outlier_fraction outside (0,1) is fraction_out_of_range", "[config]") {
  try {
    parse_config("outlier_fraction = 1.5\n[member]\ndetector = knn\n");
    FAIL("expected fraction_out_of_range");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::fraction_out_of_range);
  }
  CHECK_THROWS_AS(parse_config("outlier_fraction = 0\n[member]\ndetector = knn\n"), Error);
  CHECK_THROWS_AS(parse_config("outlier_fraction = nope\n[member]\ndetector = knn\n"), Error);
}

TEST_CASE("config values are typed by shape", "[config]") {
  EnsembleConfig config = parse_config(
      "[member]\ndetector = knn\nk = 9\nreduction = median\n"
      "[member]\ndetector = dnn\nradius = 2e-1\n");
  CHECK(std::get<std::int64_t>(config.members[0].params.at("k")) == 9);
  CHECK(std::get<std::string>(config.members[0].params.at("reduction")) == "median");
  CHECK(std::get<double>(config.members[1].params.at("radius")) == 0.2);
}
