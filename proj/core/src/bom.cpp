#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>

#include "runtrim/error.hpp"
#include "runtrim/optimistic.hpp"

namespace runtrim {
namespace {

bool same_context(const std::vector<double>& a, const std::vector<double>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::bit_cast<std::uint64_t>(a[i]) != std::bit_cast<std::uint64_t>(b[i])) return false;
  }
  return true;
}

struct Grouping {
  std::vector<std::vector<double>> keys;
  std::vector<std::size_t> group_of;  // per record
};

Grouping group_contexts(const Dataset& train, const FeatureEncoder& encoder) {
  Grouping out;
  out.group_of.reserve(train.size());
  for (const auto& record : train.records) {
    auto key = encoder.encode(record);
    std::size_t g = 0;
    while (g < out.keys.size() && !same_context(out.keys[g], key)) ++g;
    if (g == out.keys.size()) out.keys.push_back(std::move(key));
    out.group_of.push_back(g);
  }
  return out;
}

}  // namespace

double ScaleoutCurve::operator()(double m) const {
  if (m <= machines.front()) return values.front();
  if (m >= machines.back()) return values.back();
  const auto upper = static_cast<std::size_t>(
      std::upper_bound(machines.begin(), machines.end(), m) - machines.begin());
  const std::size_t lower = upper - 1;
  const double t = (m - machines[lower]) / (machines[upper] - machines[lower]);
  return values[lower] + t * (values[upper] - values[lower]);
}

ScaleoutCurve fit_scaleout_curve(const Dataset& train) {
  if (train.empty()) throw ModelUnavailable("no training data");
  const std::size_t scaleout = train.manifest.scaleout_index();
  const auto encoder = FeatureEncoder::fit(train, scaleout);
  const Grouping grouping = group_contexts(train, encoder);

  std::vector<double> group_sum(grouping.keys.size(), 0.0);
  std::vector<std::size_t> group_count(grouping.keys.size(), 0);
  for (std::size_t r = 0; r < train.size(); ++r) {
    group_sum[grouping.group_of[r]] += train.records[r].runtime_s;
    ++group_count[grouping.group_of[r]];
  }

  std::map<double, std::pair<double, std::size_t>> per_machine;
  for (std::size_t r = 0; r < train.size(); ++r) {
    const std::size_t g = grouping.group_of[r];
    const double group_mean = group_sum[g] / static_cast<double>(group_count[g]);
    auto& [sum, count] = per_machine[train.records[r].numeric(scaleout)];
    sum += train.records[r].runtime_s / group_mean;
    ++count;
  }
  if (per_machine.size() < 2) {
    throw ModelUnavailable("scale-out curve needs at least two distinct machine counts");
  }
  ScaleoutCurve curve;
  for (const auto& [m, stats] : per_machine) {
    curve.machines.push_back(m);
    curve.values.push_back(stats.first / static_cast<double>(stats.second));
  }
  return curve;
}

BomModel fit_bom(const Dataset& train) {
  BomModel model;
  model.curve = fit_scaleout_curve(train);
  model.scaleout_feature = train.manifest.scaleout_index();
  model.context_encoder = FeatureEncoder::fit(train, model.scaleout_feature);
  const Grouping grouping = group_contexts(train, model.context_encoder);

  model.groups.resize(grouping.keys.size());
  std::vector<std::size_t> count(grouping.keys.size(), 0);
  for (std::size_t r = 0; r < train.size(); ++r) {
    auto& group = model.groups[grouping.group_of[r]];
    const auto& record = train.records[r];
    group.mean_runtime += record.runtime_s;
    group.mean_curve += model.curve(record.numeric(model.scaleout_feature));
    ++count[grouping.group_of[r]];
  }
  for (std::size_t g = 0; g < model.groups.size(); ++g) {
    auto& group = model.groups[g];
    group.context = grouping.keys[g];
    group.mean_runtime /= static_cast<double>(count[g]);
    group.mean_curve /= static_cast<double>(count[g]);
  }

  // Per-column z-scaling over training records for the nearest-context search.
  const std::size_t width = model.context_encoder.width();
  model.context_scaling.assign(width, {});
  const auto n = static_cast<double>(train.size());
  for (std::size_t c = 0; c < width; ++c) {
    double sum = 0.0;
    for (std::size_t r = 0; r < train.size(); ++r) sum += grouping.keys[grouping.group_of[r]][c];
    const double mean = sum / n;
    double squares = 0.0;
    bool constant = true;
    const double first = grouping.keys[grouping.group_of[0]][c];
    for (std::size_t r = 0; r < train.size(); ++r) {
      const double v = grouping.keys[grouping.group_of[r]][c];
      squares += (v - mean) * (v - mean);
      constant = constant && v == first;
    }
    model.context_scaling[c] = {mean, constant ? 0.0 : std::sqrt(squares / n)};
  }
  return model;
}

double predict_bom(const BomModel& model, const JobRunRecord& record) {
  const auto context = model.context_encoder.encode(record);
  double best = std::numeric_limits<double>::infinity();
  const ContextGroup* nearest = nullptr;
  for (const auto& group : model.groups) {
    double distance = 0.0;
    for (std::size_t c = 0; c < context.size(); ++c) {
      const double scale = model.context_scaling[c].stddev;
      if (scale <= 0.0) continue;
      const double d = (context[c] - group.context[c]) / scale;
      distance += d * d;
    }
    if (distance < best) {
      best = distance;
      nearest = &group;
    }
  }
  if (nearest == nullptr) throw ContractError("BOM model has no context groups");
  const double m = record.numeric(model.scaleout_feature);
  return std::max(nearest->mean_runtime * model.curve(m) / nearest->mean_curve, 0.0);
}

}  // namespace runtrim
