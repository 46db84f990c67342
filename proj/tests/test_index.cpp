#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "outlierkit/detail/parallel.hpp"
#include "outlierkit/index.hpp"
#include "oracles.hpp"

using namespace outlierkit;

namespace {

void check_equal(const NeighborResult& a, const NeighborResult& b) {
  REQUIRE(a.indices == b.indices);
  REQUIRE(a.distances == b.distances);  // exact: both paths share the kernel
}

void check_ordering(const NeighborResult& r) {
  for (std::size_t p = 1; p < r.size(); ++p) {
    CHECK(r.distances[p - 1] <= r.distances[p]);
    if (r.distances[p - 1] == r.distances[p]) {
      CHECK(r.indices[p - 1] < r.indices[p]);
    }
  }
}

}  // namespace

TEST_CASE("build_index handles small and degenerate inputs", "[index]") {
  Dataset three = testutil::dataset_1d({0.0, 1.0, 2.0});
  NeighborIndex brute = build_index(three, IndexMode::brute);
  CHECK(brute.size() == 3);

  Dataset one = testutil::dataset_1d({42.0});
  NeighborIndex tree = build_index(one, IndexMode::tree);
  NeighborResult r = tree.query_knn(std::vector<double>{41.0}, 1);
  CHECK(r.indices == std::vector<std::size_t>{0});
  CHECK(r.distances == std::vector<double>{1.0});
}

TEST_CASE("query_knn respects exclusion and tie-break", "[index]") {
  Dataset train = testutil::dataset_1d({0.0, 1.0, 2.0});
  for (IndexMode mode : {IndexMode::brute, IndexMode::tree}) {
    NeighborIndex index(train, mode);

    NeighborResult from_zero = index.query_knn(std::vector<double>{0.0}, 2, 0);
    CHECK(from_zero.indices == std::vector<std::size_t>{1, 2});
    CHECK(from_zero.distances == std::vector<double>{1.0, 2.0});

    // symmetric neighbors at distance 1: tie broken by ascending index
    NeighborResult from_mid = index.query_knn(std::vector<double>{1.0}, 2, 1);
    CHECK(from_mid.indices == std::vector<std::size_t>{0, 2});
    CHECK(from_mid.distances == std::vector<double>{1.0, 1.0});
  }
}

TEST_CASE("query_knn rejects k beyond the available points", "[index]") {
  Dataset train = testutil::dataset_1d({0.0, 1.0, 2.0});
  NeighborIndex index(train, IndexMode::tree);
  CHECK_THROWS_AS(index.query_knn(std::vector<double>{0.0}, 4), Error);
  CHECK_THROWS_AS(index.query_knn(std::vector<double>{0.0}, 3, 0), Error);
  try {
    index.query_knn(std::vector<double>{0.0}, 9);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::k_too_large);
  }
}

TEST_CASE("query_radius includes the boundary", "[index]") {
  Dataset train = testutil::dataset_1d({0.0, 1.0, 2.0});
  for (IndexMode mode : {IndexMode::brute, IndexMode::tree}) {
    NeighborIndex index(train, mode);

    NeighborResult all = index.query_radius(std::vector<double>{1.0}, 1.0);
    CHECK(all.indices == std::vector<std::size_t>{1, 0, 2});

    NeighborResult none = index.query_radius(std::vector<double>{10.0}, 1.0);
    CHECK(none.size() == 0);

    try {
      index.query_radius(std::vector<double>{0.0}, 0.0);
      FAIL("expected non_positive_radius");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::non_positive_radius);
    }
  }
}

TEST_CASE("query_knn with k = n returns every point", "[index]") {
  std::mt19937_64 rng(21);
  oracle::Cloud cloud = testutil::random_cloud(rng, 37, 3);
  Dataset train = testutil::dataset_from(cloud);
  NeighborIndex index(train, IndexMode::tree);
  NeighborResult r = index.query_knn(cloud[5], cloud.size());
  std::vector<std::size_t> sorted = r.indices;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) CHECK(sorted[i] == i);
}

TEST_CASE("tree equals brute on random clouds", "[index]") {
  std::mt19937_64 rng(22);
  for (int round = 0; round < 20; ++round) {
    std::size_t n = 20 + rng() % 180;
    std::size_t d = 1 + rng() % 5;
    oracle::Cloud cloud = round % 3 == 0 ? testutil::lattice_cloud(rng, n, d)
                                         : testutil::random_cloud(rng, n, d);
    Dataset train = testutil::dataset_from(cloud);
    NeighborIndex tree(train, IndexMode::tree);
    NeighborIndex brute(train, IndexMode::brute);

    for (int q = 0; q < 10; ++q) {
      oracle::Point query = cloud[rng() % n];
      if (q % 2 == 0) query = testutil::random_cloud(rng, 1, d)[0];
      std::size_t k = 1 + rng() % std::min<std::size_t>(n, 8);
      std::optional<std::size_t> exclude;
      if (q % 3 == 0) exclude = rng() % n;

      NeighborResult t = tree.query_knn(query, k, exclude);
      NeighborResult b = brute.query_knn(query, k, exclude);
      check_equal(t, b);
      check_ordering(t);
      if (exclude) {
        CHECK(std::find(t.indices.begin(), t.indices.end(), *exclude) == t.indices.end());
      }

      double radius = 0.5 + (rng() % 100) / 10.0;
      NeighborResult tr = tree.query_radius(query, radius, exclude);
      NeighborResult br = brute.query_radius(query, radius, exclude);
      check_equal(tr, br);
      check_ordering(tr);
    }
  }
}

TEST_CASE("knn results match the exhaustive oracle", "[index]") {
  std::mt19937_64 rng(23);
  oracle::Cloud cloud = testutil::random_cloud(rng, 100, 4);
  Dataset train = testutil::dataset_from(cloud);
  NeighborIndex tree(train, IndexMode::tree);

  for (int q = 0; q < 25; ++q) {
    oracle::Point query = testutil::random_cloud(rng, 1, 4)[0];
    std::size_t k = 1 + rng() % 10;
    auto expected = oracle::knn(cloud, query, k);
    NeighborResult got = tree.query_knn(query, k);
    REQUIRE(got.size() == k);
    for (std::size_t p = 0; p < k; ++p) {
      CHECK(got.indices[p] == expected[p].index);
      CHECK(got.distances[p] == Catch::Approx(expected[p].dist).epsilon(1e-13));
    }
  }
}

TEST_CASE("radius results match the brute filter oracle", "[index]") {
  std::mt19937_64 rng(24);
  oracle::Cloud cloud = testutil::lattice_cloud(rng, 80, 2);
  Dataset train = testutil::dataset_from(cloud);
  NeighborIndex tree(train, IndexMode::tree);

  for (int q = 0; q < 25; ++q) {
    oracle::Point query = cloud[rng() % cloud.size()];
    double radius = 1.0 + (rng() % 30) / 10.0;
    NeighborResult got = tree.query_radius(query, radius);
    std::size_t expected = oracle::dnn_count(cloud, query, radius);
    CHECK(got.size() == expected);
    for (double dist : got.distances) CHECK(dist <= radius);
  }
}

TEST_CASE("concurrent queries equal sequential queries", "[index]") {
  std::mt19937_64 rng(25);
  oracle::Cloud cloud = testutil::random_cloud(rng, 300, 4);
  oracle::Cloud queries = testutil::random_cloud(rng, 64, 4);
  Dataset train = testutil::dataset_from(cloud);
  NeighborIndex index(train, IndexMode::tree);

  std::vector<NeighborResult> sequential(queries.size());
  for (std::size_t i = 0; i < queries.size(); ++i) {
    sequential[i] = index.query_knn(queries[i], 5);
  }

  std::vector<NeighborResult> concurrent(queries.size());
  outlierkit::detail::parallel_for(
      queries.size(), [&](std::size_t i) { concurrent[i] = index.query_knn(queries[i], 5); }, 1);

  for (std::size_t i = 0; i < queries.size(); ++i) {
    check_equal(sequential[i], concurrent[i]);
  }
}
