#include <gtest/gtest.h>

#include <algorithm>

#include "runtrim/error.hpp"
#include "runtrim/reduction.hpp"
#include "runtrim/synthetic.hpp"
#include "test_data.hpp"

namespace runtrim {
namespace {

SyntheticSpec spec() {
  SyntheticSpec s = default_suite().jobs[0];
  s.rows = 120;
  return s;
}

TEST(Contribution, CopiesOfCurrentRowsAreAccepted) {
  const Dataset current = generate_synthetic(spec(), 1);
  Dataset batch{current.manifest, {}};
  for (std::size_t i = 0; i < 20; ++i) batch.records.push_back(current.records[i * 3]);
  const ContributionDecision d = validate_contribution(current, batch, 4);
  EXPECT_EQ(d.verdict, Verdict::accepted);
  EXPECT_TRUE(d.flagged_rows.empty());
  EXPECT_EQ(d.evaluated_rows, 20u);
  EXPECT_EQ(d.threshold, std::max(0.5, 0.05 * d.mape_before));
}

TEST(Contribution, SameDistributionIsAccepted) {
  const Dataset current = generate_synthetic(spec(), 2);
  SyntheticSpec small = spec();
  small.rows = 20;
  const ContributionDecision d = validate_contribution(current, generate_synthetic(small, 77), 5);
  EXPECT_EQ(d.verdict, Verdict::accepted);
}

TEST(Contribution, ScaledRuntimesAreDeferred) {
  const Dataset current = generate_synthetic(spec(), 3);
  SyntheticSpec small = spec();
  small.rows = 20;
  Dataset batch = generate_synthetic(small, 78);
  for (auto& r : batch.records) r.runtime_s *= 100.0;
  const ContributionDecision d = validate_contribution(current, batch, 6);
  EXPECT_EQ(d.verdict, Verdict::deferred);
  EXPECT_GT(d.mape_after, d.mape_before + d.threshold);
}

TEST(Contribution, OutOfRangeRowsAreFlagged) {
  const Dataset current = generate_synthetic(spec(), 4);
  Dataset batch{current.manifest, {current.records[0], current.records[1], current.records[2]}};
  batch.records[1].features[1] = 1e9;  // data size far beyond twice the max
  const ContributionDecision d = validate_contribution(current, batch, 7);
  EXPECT_EQ(d.flagged_rows, std::vector<std::size_t>{2});
  EXPECT_EQ(d.evaluated_rows, 2u);
  EXPECT_EQ(d.verdict, Verdict::accepted);

  Dataset all_bad{current.manifest, {current.records[0]}};
  all_bad.records[0].features[0] = 1000.0;
  EXPECT_EQ(validate_contribution(current, all_bad, 7).verdict, Verdict::deferred);
}

TEST(Contribution, ManifestsMustMatch) {
  const Dataset current = generate_synthetic(spec(), 5);
  Dataset batch = current;
  batch.manifest.job_type = "other";
  batch.manifest.features.back().name = "renamed";
  EXPECT_THROW(validate_contribution(current, batch, 1), SchemaError);
}

TEST(Contribution, DecisionSerializes) {
  ContributionDecision d;
  d.verdict = Verdict::deferred;
  d.mape_before = 4;
  d.mape_after = 9;
  d.threshold = 0.5;
  d.flagged_rows = {3, 5};
  d.evaluated_rows = 10;
  const std::string text = format_decision(d);
  EXPECT_NE(text.find("verdict = deferred\n"), std::string::npos);
  EXPECT_NE(text.find("flagged_rows = 3 5\n"), std::string::npos);
  const auto header = decision_csv_header();
  const auto row = decision_csv_row(d);
  EXPECT_EQ(std::count(header.begin(), header.end(), ','), std::count(row.begin(), row.end(), ','));
}

}  // namespace
}  // namespace runtrim
