#pragma once

#include <cstddef>
#include <vector>

#include "runtrim/dataset.hpp"
#include "runtrim/encoding.hpp"
#include "runtrim/features.hpp"
#include "runtrim/gbm.hpp"

// The two "optimistic" models share one normalized scale-out curve pooled
// over all contexts and differ in how they scale it to a context.

namespace runtrim {

/// Piecewise-linear normalized runtime over the observed machine counts;
/// constant beyond the observed range.
struct ScaleoutCurve {
  std::vector<double> machines;  // ascending, distinct
  std::vector<double> values;

  double operator()(double m) const;

  friend bool operator==(const ScaleoutCurve&, const ScaleoutCurve&) = default;
};

/// Groups records by context (every encoded feature except scale-out),
/// divides runtimes by their group mean and averages the result per machine
/// count. Throws ModelUnavailable with fewer than two machine counts.
ScaleoutCurve fit_scaleout_curve(const Dataset& train);

struct ContextGroup {
  std::vector<double> context;
  double mean_runtime = 0.0;
  double mean_curve = 0.0;  // mean of g(m) over the group's records

  friend bool operator==(const ContextGroup&, const ContextGroup&) = default;
};

/// Basic optimistic model: the nearest training context's mean runtime,
/// reshaped by the shared curve.
struct BomModel {
  std::size_t scaleout_feature = 0;
  ScaleoutCurve curve;
  FeatureEncoder context_encoder;
  std::vector<ColumnScaling> context_scaling;
  std::vector<ContextGroup> groups;

  friend bool operator==(const BomModel&, const BomModel&) = default;
};

BomModel fit_bom(const Dataset& train);
double predict_bom(const BomModel& model, const JobRunRecord& record);

/// Optimistic gradient boosting: a boosted-tree model of the per-context
/// factor runtime / g(m), multiplied back by the shared curve.
struct OgbModel {
  std::size_t scaleout_feature = 0;
  ScaleoutCurve curve;
  FeatureEncoder context_encoder;
  BoostedTrees factor;

  friend bool operator==(const OgbModel&, const OgbModel&) = default;
};

OgbModel fit_ogb(const Dataset& train, const GbmParams& params = {});
double predict_ogb(const OgbModel& model, const JobRunRecord& record);

}  // namespace runtrim
