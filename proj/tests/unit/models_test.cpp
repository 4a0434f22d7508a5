#include <gtest/gtest.h>

#include <cmath>

#include "runtrim/error.hpp"
#include "runtrim/ernest.hpp"
#include "runtrim/gbm.hpp"
#include "runtrim/optimistic.hpp"
#include "runtrim/selector.hpp"
#include "test_data.hpp"

namespace runtrim {
namespace {

using testing::record;

double training_mape(const Dataset& d, auto&& predict_one) {
  std::vector<double> p;
  for (const auto& r : d.records) p.push_back(predict_one(r));
  return mape(p, d.runtimes());
}

TEST(Ernest, RecoversPlantedTheta) {
  const std::array<double, 4> theta = {100, 2000, 50, 1};
  std::vector<double> machines;
  for (int m = 2; m <= 16; ++m) machines.push_back(m);
  const Dataset d = testing::ernest_dataset(theta, machines, {1000, 2000});
  const ErnestModel model = fit_ernest(d);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(model.theta[i], theta[i], 1e-6) << i;
  EXPECT_NEAR(training_mape(d, [&](const JobRunRecord& r) { return predict_ernest(model, r); }), 0.0, 1e-9);
}

TEST(Ernest, SingleRecordIsInterpolated) {
  const Dataset d = testing::dataset({record(4, 1000, "m5", 500)});
  const ErnestModel model = fit_ernest(d);
  EXPECT_NEAR(predict_ernest(model, 4, 1000), 500.0, 1e-6);
  for (const double t : model.theta) EXPECT_GE(t, 0.0);
}

TEST(Ernest, CoefficientsStayNonNegative) {
  // Runtime grows with m: the unconstrained fit would want a negative s/m term.
  const Dataset d = testing::dataset({record(2, 100, "m5", 10), record(4, 100, "m5", 20),
                                      record(8, 100, "m5", 40), record(16, 100, "m5", 80)});
  const ErnestModel model = fit_ernest(d);
  for (const double t : model.theta) EXPECT_GE(t, 0.0);
  for (const double m : {1.0, 3.0, 100.0}) EXPECT_GE(predict_ernest(model, m, 100), 0.0);
}

TEST(Gbm, ConstantTargetGivesConstantPrediction) {
  Matrix x;
  std::vector<double> y;
  for (int i = 0; i < 20; ++i) {
    x.append_row(std::vector<double>{static_cast<double>(i)});
    y.push_back(42.0);
  }
  const BoostedTrees model = fit_boosted_trees(x, y);
  for (const auto& tree : model.trees) {
    ASSERT_EQ(tree.nodes.size(), 1u);
    EXPECT_EQ(tree.nodes[0].value, 0.0);
  }
  EXPECT_EQ(model.predict(std::vector<double>{-5.0}), 42.0);
}

TEST(Gbm, LearnsStepFunction) {
  Matrix x;
  std::vector<double> y;
  for (int i = 0; i < 50; ++i) {
    const double v = (i + 0.5) / 50.0;
    x.append_row(std::vector<double>{v});
    y.push_back(v < 0.5 ? 10.0 : 20.0);
  }
  std::vector<double> staged;
  const BoostedTrees model = fit_boosted_trees(x, y, {50, 3, 0.1}, &staged);
  std::vector<double> p;
  for (std::size_t i = 0; i < x.rows(); ++i) p.push_back(model.predict(x.row(i)));
  EXPECT_LT(mape(p, y), 1.0);
  ASSERT_EQ(staged.size(), 51u);
  // Residual after t stages of a perfect split is 0.9^t of the initial gap.
  EXPECT_NEAR(staged.back(), 25.0 * std::pow(0.9, 100), 1e-9);
}

TEST(Gbm, ZeroTreesPredictsTheMean) {
  Matrix x;
  std::vector<double> y = {1, 2, 3, 10};
  for (double v : y) x.append_row(std::vector<double>{v});
  const BoostedTrees model = fit_boosted_trees(x, y, {0, 3, 0.1});
  EXPECT_EQ(model.predict(std::vector<double>{100.0}), 4.0);
}

TEST(Gbm, StagedMseIsMonotone) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    Matrix x = testing::random_points(rng, 80, 3);
    std::vector<double> y;
    for (std::size_t i = 0; i < 80; ++i) y.push_back(std::sin(6 * x(i, 0)) + x(i, 1) * x(i, 2) + 0.1 * rng.normal());
    std::vector<double> staged;
    fit_boosted_trees(x, y, {}, &staged);
    ASSERT_EQ(staged.size(), 101u);
    for (std::size_t t = 1; t < staged.size(); ++t) EXPECT_LE(staged[t], staged[t - 1] + 1e-12);
  }
}

TEST(Gbm, PredictionsAreNonNegative) {
  const Dataset d = testing::dataset({record(2, 10, "a", 1), record(4, 10, "a", 1000), record(8, 10, "a", 1),
                                      record(16, 10, "a", 1000), record(32, 10, "b", 1)});
  const GbmModel model = fit_gbm(d);
  for (double m = 1; m < 64; m += 0.5) EXPECT_GE(predict_gbm(model, record(m, 10, "a", 1)), 0.0);
}

// runtime = f(context) * h(m) on a shared set of machine counts.
Dataset separable(double (*h)(double)) {
  Dataset d{testing::small_manifest(), {}};
  const std::vector<std::pair<std::string, double>> contexts = {{"a", 1.0}, {"b", 2.5}, {"c", 0.6}};
  for (const auto& [node, f] : contexts) {
    for (const double m : {2.0, 4.0, 8.0, 16.0}) d.records.push_back(record(m, 100, node, f * h(m)));
  }
  return d;
}

double inverse(double m) { return 1000.0 / m; }

TEST(Bom, InverseScaleoutIsExact) {
  const Dataset d = separable(inverse);
  const BomModel model = fit_bom(d);
  for (std::size_t i = 0; i < model.curve.machines.size(); ++i) {
    EXPECT_NEAR(model.curve.values[i] * model.curve.machines[i], model.curve.values[0] * model.curve.machines[0],
                1e-9);
    EXPECT_GT(model.curve.values[i], 0.0);
  }
  for (const auto& r : d.records) EXPECT_NEAR(predict_bom(model, r), r.runtime_s, 1e-9 * r.runtime_s);
}

TEST(Bom, ExactLookupAndConstantExtrapolation) {
  const Dataset d = separable([](double m) { return 50.0 + 800.0 / m; });
  const BomModel model = fit_bom(d);
  for (const auto& r : d.records) EXPECT_NEAR(predict_bom(model, r), r.runtime_s, 1e-9);
  // Beyond the observed range the curve is flat.
  EXPECT_EQ(predict_bom(model, record(64, 100, "a", 1)), predict_bom(model, record(16, 100, "a", 1)));
  EXPECT_EQ(predict_bom(model, record(1, 100, "b", 1)), predict_bom(model, record(2, 100, "b", 1)));
}

TEST(Bom, NeedsTwoMachineCounts) {
  const Dataset d = testing::dataset({record(4, 10, "a", 5), record(4, 20, "b", 6)});
  EXPECT_THROW(fit_bom(d), ModelUnavailable);
  EXPECT_THROW(fit_ogb(d), ModelUnavailable);
}

TEST(Ogb, StepContextTimesInverseScaleout) {
  Dataset d{testing::small_manifest(), {}};
  for (const double size : {100.0, 200.0, 300.0, 400.0}) {
    const double f = size < 250 ? 1.0 : 3.0;
    for (const double m : {2.0, 4.0, 8.0, 16.0}) d.records.push_back(record(m, size, "a", f * 1000.0 / m));
  }
  const OgbModel model = fit_ogb(d);
  EXPECT_LT(training_mape(d, [&](const JobRunRecord& r) { return predict_ogb(model, r); }), 1.0);
}

TEST(Ogb, ConstantRuntimeSingleContext) {
  const Dataset d = testing::dataset({record(2, 10, "a", 77), record(4, 10, "a", 77), record(8, 10, "a", 77)});
  const OgbModel model = fit_ogb(d);
  for (const auto& r : d.records) EXPECT_NEAR(predict_ogb(model, r), 77.0, 1e-6);
}

TEST(Ogb, CloseToBomOnExactLookup) {
  const Dataset d = separable([](double m) { return 50.0 + 800.0 / m; });
  const BomModel bom = fit_bom(d);
  const OgbModel ogb = fit_ogb(d);
  for (const auto& r : d.records) {
    const double b = predict_bom(bom, r);
    EXPECT_NEAR(predict_ogb(ogb, r), b, 0.05 * b);
  }
}

}  // namespace
}  // namespace runtrim
