#include <gtest/gtest.h>

#include <cmath>

#include "runtrim/encoding.hpp"
#include "runtrim/error.hpp"
#include "test_data.hpp"

namespace runtrim {
namespace {

using testing::record;

TEST(Encoding, OneHotRowsSumToOne) {
  const Dataset d = testing::dataset(
      {record(2, 10, "a", 5), record(4, 10, "b", 6), record(2, 20, "b", 7), record(8, 20, "a", 8)});
  const EncodedMatrix e = encode(d, false);
  ASSERT_EQ(e.cols(), 4u);  // machines, size, a, b
  EXPECT_EQ(e.columns[2].category, "a");
  EXPECT_EQ(e.columns[3].category, "b");
  for (std::size_t r = 0; r < e.rows(); ++r) EXPECT_EQ(e.raw(r, 2) + e.raw(r, 3), 1.0);
}

TEST(Encoding, TargetIsLastColumn) {
  const Dataset d = testing::dataset({record(2, 10, "a", 5), record(4, 10, "b", 6)});
  const EncodedMatrix e = encode(d, true);
  EXPECT_TRUE(e.includes_target);
  EXPECT_TRUE(e.columns.back().is_target());
  EXPECT_EQ(e.raw(1, e.cols() - 1), 6.0);
}

TEST(Encoding, ZScoreUsesPopulationStddev) {
  const Dataset d = testing::dataset({record(2, 1, "a", 1), record(4, 1, "a", 1), record(6, 1, "a", 1)});
  const EncodedMatrix e = encode(d, false);
  const double s = std::sqrt(8.0 / 3.0);
  EXPECT_NEAR(e.scaling[0].stddev, s, 1e-12);
  EXPECT_NEAR(e.standardized(0, 0), -1.2247, 1e-4);
  EXPECT_NEAR(e.standardized(1, 0), 0.0, 1e-12);
  EXPECT_NEAR(e.standardized(2, 0), 1.2247, 1e-4);
}

TEST(Encoding, ConstantColumnBecomesZeros) {
  const Dataset d = testing::dataset({record(2, 5, "a", 1), record(4, 5, "a", 2), record(6, 5, "a", 3)});
  const EncodedMatrix e = encode(d, true);
  EXPECT_EQ(e.scaling[1].stddev, 0.0);
  EXPECT_EQ(e.scaling[1].mean, 5.0);
  for (std::size_t r = 0; r < 3; ++r) EXPECT_EQ(e.standardized(r, 1), 0.0);
}

TEST(Encoding, StandardizedMomentsAndRoundTrip) {
  Rng rng(11);
  Dataset d{testing::small_manifest(), {}};
  const char* nodes[] = {"a", "b", "c"};
  for (int i = 0; i < 200; ++i) {
    d.records.push_back(record(1 + std::floor(rng.uniform() * 16), 1e5 * rng.uniform(), nodes[rng.index(3)],
                               1 + 1000 * rng.uniform()));
  }
  const EncodedMatrix e = encode(d, true);
  for (std::size_t c = 0; c < e.cols(); ++c) {
    if (e.scaling[c].stddev == 0.0) continue;
    double mean = 0.0, sq = 0.0;
    for (std::size_t r = 0; r < e.rows(); ++r) mean += e.standardized(r, c);
    mean /= static_cast<double>(e.rows());
    for (std::size_t r = 0; r < e.rows(); ++r) sq += std::pow(e.standardized(r, c) - mean, 2);
    EXPECT_NEAR(mean, 0.0, 1e-9);
    EXPECT_NEAR(std::sqrt(sq / static_cast<double>(e.rows())), 1.0, 1e-9);
  }
  for (std::size_t r = 0; r < e.rows(); ++r) {
    const auto back = e.destandardize(e.standardized.row(r));
    for (std::size_t c = 0; c < e.cols(); ++c) {
      EXPECT_NEAR(back[c], e.raw(r, c), 1e-9);
    }
  }
}

TEST(Encoding, EmptyDatasetIsAContractError) {
  EXPECT_THROW(encode(Dataset{testing::small_manifest(), {}}, false), ContractError);
}

}  // namespace
}  // namespace runtrim
