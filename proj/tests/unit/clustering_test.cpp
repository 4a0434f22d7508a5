#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "runtrim/clustering.hpp"
#include "runtrim/error.hpp"
#include "test_data.hpp"

namespace runtrim {
namespace {

using testing::record;

Matrix column(std::initializer_list<double> values) {
  Matrix m;
  for (const double v : values) m.append_row(std::vector<double>{v});
  return m;
}

Matrix two_blobs(std::uint64_t seed) {
  Rng rng(seed);
  Matrix m;
  for (const double center : {0.0, 10.0}) {
    for (int i = 0; i < 10; ++i) {
      m.append_row(std::vector<double>{center + 0.1 * rng.normal(), center + 0.1 * rng.normal()});
    }
  }
  return m;
}

TEST(KMeans, KEqualsNGivesZeroCost) {
  Rng rng(1);
  const Matrix points = testing::random_points(rng, 12, 3);
  const auto r = kmeans(points, 12, 7);
  EXPECT_EQ(r.representatives.rows(), 12u);
  EXPECT_NEAR(r.cost, 0.0, 1e-20);
  std::set<int> labels(r.labels.begin(), r.labels.end());
  EXPECT_EQ(labels.size(), 12u);
}

TEST(KMeans, SingleClusterIsTheMean) {
  Rng rng(2);
  const Matrix points = testing::random_points(rng, 25, 2);
  const auto r = kmeans(points, 1, 3);
  for (std::size_t c = 0; c < 2; ++c) {
    double mean = 0.0;
    for (std::size_t i = 0; i < points.rows(); ++i) mean += points(i, c);
    mean /= static_cast<double>(points.rows());
    EXPECT_NEAR(r.representatives(0, c), mean, 1e-12);
  }
}

TEST(KMeans, SeparatesTwoBlobs) {
  const Matrix points = two_blobs(3);
  const auto r = kmeans(points, 2, 9);
  // Oracle: every point is nearest to the mean of its own blob.
  for (std::size_t i = 0; i < points.rows(); ++i) {
    EXPECT_EQ(r.labels[i], r.labels[i < 10 ? 0 : 10]);
  }
  EXPECT_NE(r.labels[0], r.labels[10]);
}

TEST(KMeans, SseNeverIncreasesAndIsDeterministic) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Rng rng(seed);
    const Matrix points = testing::random_points(rng, 40 + seed, 3);
    const auto r = kmeans(points, 2 + seed % 6, seed);
    ASSERT_FALSE(r.sse_history.empty());
    for (std::size_t i = 1; i < r.sse_history.size(); ++i) {
      EXPECT_LE(r.sse_history[i], r.sse_history[i - 1] * (1 + 1e-12)) << "seed " << seed;
    }
    const auto again = kmeans(points, 2 + seed % 6, seed);
    EXPECT_EQ(again.labels, r.labels);
    EXPECT_EQ(again.representatives, r.representatives);
  }
}

TEST(KMeans, RejectsBadK) {
  const Matrix points = column({1, 2, 3});
  EXPECT_THROW(kmeans(points, 0, 1), ParameterError);
  EXPECT_THROW(kmeans(points, 4, 1), ParameterError);
}

TEST(KMedoids, SmallExactCases) {
  std::vector<std::size_t> best;
  const Matrix points = column({0, 1, 2, 10});
  const double optimum = testing::exhaustive_kmedoids_cost(points, 2, &best);
  EXPECT_EQ(optimum, 2.0);
  const auto r = kmedoids(points, 2, 0);
  EXPECT_EQ(r.cost, optimum);
  ASSERT_EQ(r.source_rows.size(), 2u);
  EXPECT_EQ(*r.source_rows[0], best[0]);
  EXPECT_EQ(*r.source_rows[1], best[1]);
  EXPECT_EQ(points(*r.source_rows[0], 0), 1.0);
  EXPECT_EQ(points(*r.source_rows[1], 0), 10.0);

  const auto one = kmedoids(column({0, 1, 2}), 1, 0);
  EXPECT_EQ(one.representatives(0, 0), 1.0);
  EXPECT_EQ(one.cost, 2.0);
}

TEST(KMedoids, KEqualsNIsIdentity) {
  Rng rng(4);
  const Matrix points = testing::random_points(rng, 9, 2);
  const auto r = kmedoids(points, 9, 1);
  EXPECT_EQ(r.cost, 0.0);
  for (std::size_t i = 0; i < 9; ++i) EXPECT_EQ(*r.source_rows[i], i);
}

TEST(KMedoids, RepresentativesAreInputRows) {
  Rng rng(5);
  const Matrix points = testing::random_points(rng, 30, 3);
  const auto r = kmedoids(points, 5, 2);
  ASSERT_EQ(r.representatives.rows(), 5u);
  for (std::size_t i = 0; i < 5; ++i) {
    ASSERT_TRUE(r.source_rows[i].has_value());
    const auto src = points.row(*r.source_rows[i]);
    const auto rep = r.representatives.row(i);
    EXPECT_TRUE(std::equal(src.begin(), src.end(), rep.begin()));
  }
  for (const int label : r.labels) {
    EXPECT_GE(label, 0);
    EXPECT_LT(label, 5);
  }
}

TEST(KMedoids, CloseToExhaustiveOptimum) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Rng rng(100 + seed);
    const std::size_t n = 5 + seed % 8;
    const std::size_t k = 1 + seed % 3;
    const Matrix points = testing::random_points(rng, n, 1 + seed % 3);
    const double optimum = testing::exhaustive_kmedoids_cost(points, k);
    const auto r = kmedoids(points, k, seed);
    EXPECT_LE(r.cost, optimum * 1.05 + 1e-12) << "seed " << seed;
  }
}

TEST(Dbscan, TinyEpsMakesEverythingNoise) {
  Rng rng(6);
  const Matrix points = testing::random_points(rng, 15, 2);
  const auto r = dbscan(points, 1e-9, 2);
  EXPECT_EQ(r.cluster_count, 0u);
  EXPECT_EQ(r.noise_count, 15u);
  EXPECT_EQ(r.representatives, points);
}

TEST(Dbscan, HugeEpsMakesOneCluster) {
  Rng rng(7);
  const Matrix points = testing::random_points(rng, 15, 2);
  const auto r = dbscan(points, 100.0, 1);
  ASSERT_EQ(r.representatives.rows(), 1u);
  for (std::size_t c = 0; c < 2; ++c) {
    double mean = 0.0;
    for (std::size_t i = 0; i < 15; ++i) mean += points(i, c);
    EXPECT_NEAR(r.representatives(0, c), mean / 15.0, 1e-12);
  }
}

TEST(Dbscan, HandPlacedBlobsAndOutliers) {
  Matrix points;
  for (const auto& p : std::vector<std::vector<double>>{{0, 0},   {0.5, 0}, {0, 0.5}, {0.5, 0.5},
                                                        {10, 10}, {10.5, 10}, {10, 10.5}, {10.5, 10.5},
                                                        {5, 5},   {-8, 7}}) {
    points.append_row(p);
  }
  const auto r = dbscan(points, 1.0, 2);
  const auto oracle = testing::dbscan_oracle(points, 1.0, 2);
  EXPECT_EQ(r.cluster_count, 2u);
  EXPECT_EQ(r.noise_count, 2u);
  EXPECT_EQ(r.representatives.rows(), 4u);
  for (std::size_t i = 0; i < points.rows(); ++i) EXPECT_EQ(r.labels[i], oracle.component[i]);
  EXPECT_EQ(r.representatives(0, 0), 0.25);
  EXPECT_EQ(r.representatives(1, 1), 10.25);
}

TEST(Dbscan, MatchesBruteForceOracle) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(1000 + seed);
    const std::size_t n = 5 + rng.index(56);
    const std::size_t d = 1 + rng.index(4);
    const Matrix points = testing::random_points(rng, n, d, 10.0);
    const double eps = 0.5 + 3.0 * rng.uniform();
    const std::size_t min_pts = 1 + rng.index(5);
    const auto r = dbscan(points, eps, min_pts);
    const auto oracle = testing::dbscan_oracle(points, eps, min_pts);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& adm = oracle.admissible[i];
      const int expected = adm.empty() ? kNoise : *std::min_element(adm.begin(), adm.end());
      ASSERT_EQ(r.labels[i], expected) << "seed " << seed << " row " << i;
    }
  }
}

TEST(Dbscan, RejectsBadParameters) {
  const Matrix points = column({1, 2});
  EXPECT_THROW(dbscan(points, 0.0, 2), ParameterError);
  EXPECT_THROW(dbscan(points, -1.0, 2), ParameterError);
  EXPECT_THROW(dbscan(points, 1.0, 0), ParameterError);
}

TEST(Representatives, KMedoidsAtFullKReproducesInput) {
  const Dataset d = testing::dataset({record(2, 100, "m5", 50), record(4, 100, "c5", 31.7),
                                      record(8, 300, "m5", 20.1), record(12, 300, "r5", 9.3)});
  const EncodedMatrix e = encode(d, true);
  const auto r = kmedoids(e.standardized, d.size(), 0);
  const Dataset back = representatives_to_dataset(r, e, d.manifest);
  ASSERT_EQ(back.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) EXPECT_TRUE(identical(back.records[i], d.records[i]));
}

TEST(Representatives, ClusterMeanRuntime) {
  const Dataset d = testing::dataset({record(4, 100, "m5", 100), record(4, 100, "m5", 200)});
  const EncodedMatrix e = encode(d, true);
  const auto r = kmeans(e.standardized, 1, 0);
  const Dataset back = representatives_to_dataset(r, e, d.manifest);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_NEAR(back.records[0].runtime_s, 150.0, 1e-9);
  EXPECT_EQ(back.records[0].numeric(0), 4.0);
  EXPECT_EQ(back.records[0].category(2), "m5");
}

TEST(Representatives, OneHotArgmaxPicksFirstOnTies) {
  // 7 rows of "a" and 3 of "b": the single mean has (0.7, 0.3) in the block.
  Dataset d{testing::small_manifest(), {}};
  for (int i = 0; i < 10; ++i) d.records.push_back(record(2 + i, 100, i < 7 ? "a" : "b", 10 + i));
  EncodedMatrix e = encode(d, true);
  const auto r = kmeans(e.standardized, 1, 0);
  Dataset back = representatives_to_dataset(r, e, d.manifest);
  EXPECT_EQ(back.records[0].category(2), "a");

  Dataset tie = testing::dataset({record(2, 1, "b", 1), record(4, 1, "a", 2)});
  e = encode(tie, true);
  back = representatives_to_dataset(kmeans(e.standardized, 1, 0), e, tie.manifest);
  EXPECT_EQ(back.records[0].category(2), "b");
  EXPECT_EQ(back.records[0].numeric(0), 3.0);
}

TEST(Representatives, NeedsTargetColumn) {
  const Dataset d = testing::dataset({record(4, 100, "m5", 100), record(8, 100, "m5", 200)});
  const EncodedMatrix e = encode(d, false);
  EXPECT_THROW(representatives_to_dataset(kmeans(e.standardized, 1, 0), e, d.manifest), ContractError);
}

}  // namespace
}  // namespace runtrim
