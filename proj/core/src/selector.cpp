#include "runtrim/selector.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "runtrim/error.hpp"
#include "runtrim/rng.hpp"

namespace runtrim {

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::ernest: return "ernest";
    case ModelKind::gbm: return "gbm";
    case ModelKind::bom: return "bom";
    case ModelKind::ogb: return "ogb";
  }
  return "unknown";
}

ModelKind parse_model_kind(std::string_view name) {
  for (const auto kind : kAllModels) {
    if (to_string(kind) == name) return kind;
  }
  throw ParameterError("unknown model '" + std::string(name) + "'");
}

AnyModel fit_model(ModelKind kind, const Dataset& train) {
  switch (kind) {
    case ModelKind::ernest: return fit_ernest(train);
    case ModelKind::gbm: return fit_gbm(train);
    case ModelKind::bom: return fit_bom(train);
    case ModelKind::ogb: return fit_ogb(train);
  }
  throw ParameterError("unknown model kind");
}

double predict(const AnyModel& model, const JobRunRecord& record) {
  struct Visitor {
    const JobRunRecord& record;
    double operator()(const ErnestModel& m) const { return predict_ernest(m, record); }
    double operator()(const GbmModel& m) const { return predict_gbm(m, record); }
    double operator()(const BomModel& m) const { return predict_bom(m, record); }
    double operator()(const OgbModel& m) const { return predict_ogb(m, record); }
  };
  return std::visit(Visitor{record}, model);
}

ModelKind kind_of(const AnyModel& model) {
  return static_cast<ModelKind>(model.index());
}

double mape(std::span<const double> predictions, std::span<const double> actuals) {
  if (predictions.size() != actuals.size()) throw ParameterError("mape: length mismatch");
  if (actuals.empty()) throw ParameterError("mape: no values");
  double sum = 0.0;
  for (std::size_t i = 0; i < actuals.size(); ++i) {
    if (!(actuals[i] > 0.0)) throw ParameterError("mape: actual values must be positive");
    sum += std::abs(predictions[i] - actuals[i]) / actuals[i];
  }
  return 100.0 * sum / static_cast<double>(actuals.size());
}

ModelScores cross_validate(const Dataset& train, std::size_t folds, std::uint64_t seed) {
  if (folds < 2) throw ContractError("cross-validation needs at least two folds");
  if (train.size() < 2) throw ContractError("cross-validation needs at least two records");
  if (train.size() < folds) folds = train.size();

  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(order);

  std::array<double, kModelCount> sums{};
  for (std::size_t fold = 0; fold < folds; ++fold) {
    std::vector<std::size_t> fit_rows, held_rows;
    for (std::size_t i = 0; i < order.size(); ++i) {
      (i % folds == fold ? held_rows : fit_rows).push_back(order[i]);
    }
    const Dataset fit_part = train.subset(fit_rows);
    const Dataset held_part = train.subset(held_rows);
    const auto actuals = held_part.runtimes();
    for (const auto kind : kAllModels) {
      auto& sum = sums[static_cast<std::size_t>(kind)];
      if (!std::isfinite(sum)) continue;
      try {
        const AnyModel model = fit_model(kind, fit_part);
        std::vector<double> predictions;
        for (const auto& record : held_part.records) predictions.push_back(predict(model, record));
        sum += mape(predictions, actuals);
      } catch (const ModelUnavailable&) {
        sum = std::numeric_limits<double>::infinity();
      }
    }
  }
  ModelScores scores{};
  for (std::size_t m = 0; m < kModelCount; ++m) scores[m] = sums[m] / static_cast<double>(folds);
  return scores;
}

ModelKind choose_model(const ModelScores& scores) {
  std::optional<ModelKind> best;
  for (const auto kind : kTiePriority) {
    const double score = scores[static_cast<std::size_t>(kind)];
    if (!std::isfinite(score)) continue;
    if (!best || score < scores[static_cast<std::size_t>(*best)]) best = kind;
  }
  if (!best) throw ModelUnavailable("no runtime model can be fitted on this data");
  return *best;
}

double TrainedPredictor::predict(ModelKind kind, const JobRunRecord& record) const {
  const auto& model = models[static_cast<std::size_t>(kind)];
  if (!model) throw ModelUnavailable("model '" + std::string(to_string(kind)) + "' is unavailable");
  return runtrim::predict(*model, record);
}

TrainedPredictor c3o_select(const Dataset& train, std::size_t folds, std::uint64_t seed) {
  TrainedPredictor predictor;
  predictor.manifest = train.manifest;
  predictor.cv_scores = cross_validate(train, folds, seed);
  for (const auto kind : kAllModels) {
    const auto index = static_cast<std::size_t>(kind);
    const auto start = std::chrono::steady_clock::now();
    try {
      predictor.models[index] = fit_model(kind, train);
    } catch (const ModelUnavailable&) {
      predictor.cv_scores[index] = std::numeric_limits<double>::infinity();
    }
    predictor.fit_time_ms[index] =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  }
  predictor.chosen = choose_model(predictor.cv_scores);
  return predictor;
}

}  // namespace runtrim
