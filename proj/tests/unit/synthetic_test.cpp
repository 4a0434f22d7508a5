#include <gtest/gtest.h>

#include <sstream>

#include "runtrim/error.hpp"
#include "runtrim/ernest.hpp"
#include "runtrim/synthetic.hpp"

namespace runtrim {
namespace {

std::string csv_of(const Dataset& d) {
  std::ostringstream out;
  write_csv(d, out);
  return out.str();
}

TEST(Synthetic, SameSeedSameBytes) {
  const SyntheticSpec spec = default_suite().jobs[1];
  EXPECT_EQ(csv_of(generate_synthetic(spec, 12)), csv_of(generate_synthetic(spec, 12)));
  EXPECT_NE(csv_of(generate_synthetic(spec, 12)), csv_of(generate_synthetic(spec, 13)));
}

TEST(Synthetic, MinimumRows) {
  SyntheticSpec spec = default_suite().jobs[0];
  spec.rows = 10;
  EXPECT_EQ(generate_synthetic(spec, 1).size(), 10u);
  spec.rows = 9;
  EXPECT_THROW(generate_synthetic(spec, 1), ParameterError);
}

TEST(Synthetic, InjectedDuplicatesAreExactlyRemoved) {
  SyntheticSpec spec = default_suite().jobs[3];
  spec.rows = 100;
  spec.duplicate_fraction = 0.5;
  const Dataset d = generate_synthetic(spec, 5);
  EXPECT_EQ(d.size(), 100u);
  // Noise makes every generated row distinct, so only the copies go.
  EXPECT_EQ(deduplicate(d).size(), 50u);
}

TEST(Synthetic, RuntimesFollowTheGroundTruth) {
  SyntheticSpec spec = default_suite().jobs[4];
  spec.noise_sigma = 0.0;
  const Dataset d = generate_synthetic(spec, 6);
  for (const auto& r : d.records) EXPECT_EQ(r.runtime_s, ground_truth_runtime(spec, r));
}

TEST(Synthetic, ErnestRecoversTheGeneratorPerContext) {
  SyntheticSpec spec = default_suite().jobs[0];
  spec.noise_sigma = 0.0;
  spec.duplicate_fraction = 0.0;
  spec.rows = 400;
  const Dataset d = generate_synthetic(spec, 7);
  const JobRunRecord& first = d.records.front();
  Dataset context{d.manifest, {}};
  for (const auto& r : d.records) {
    if (r.features[2] == first.features[2] && r.features[3] == first.features[3]) context.records.push_back(r);
  }
  ASSERT_GE(context.size(), 20u);
  const ErnestModel model = fit_ernest(context);
  const double factor = context_factor(spec, first);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(model.theta[i], factor * spec.theta[i], 1e-6) << i;
}

TEST(Synthetic, EmptyRangesAreRejected) {
  SyntheticSpec spec = default_suite().jobs[0];
  spec.machines.clear();
  EXPECT_THROW(spec.validate(), ParameterError);
  spec = default_suite().jobs[0];
  spec.node_types.clear();
  EXPECT_THROW(spec.validate(), ParameterError);
  spec = default_suite().jobs[0];
  spec.parameters[0].levels.clear();
  EXPECT_THROW(spec.validate(), ParameterError);
  spec = default_suite().jobs[0];
  spec.duplicate_fraction = 1.0;
  EXPECT_THROW(spec.validate(), ParameterError);
}

TEST(Synthetic, DefaultSuiteMirrorsFiveJobs) {
  const SyntheticSuite suite = default_suite();
  ASSERT_EQ(suite.jobs.size(), 5u);
  std::size_t total = 0;
  for (const auto& d : generate_suite(suite)) total += d.size();
  EXPECT_EQ(total, 930u);
  for (const auto& job : suite.jobs) {
    EXPECT_GE(job.node_types.size(), 2u);
    EXPECT_GE(job.parameters.size(), 1u);
    EXPECT_LE(job.parameters.size(), 2u);
    EXPECT_EQ(job.noise_sigma, 0.05);
  }
}

TEST(Synthetic, SuiteJsonRoundTrip) {
  const SyntheticSuite suite = default_suite();
  const SyntheticSuite back = parse_suite_json(suite_to_json(suite));
  EXPECT_EQ(back.seed, suite.seed);
  const auto a = generate_suite(suite);
  const auto b = generate_suite(back);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(csv_of(a[i]), csv_of(b[i]));
  EXPECT_THROW(parse_suite_json("{\"jobs\": [{\"job_type\": 3}]}"), ParseError);
  EXPECT_THROW(parse_suite_json("not json"), ParseError);
}

}  // namespace
}  // namespace runtrim
