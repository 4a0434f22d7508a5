#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <variant>

#include "runtrim/dataset.hpp"
#include "runtrim/ernest.hpp"
#include "runtrim/gbm.hpp"
#include "runtrim/optimistic.hpp"

namespace runtrim {

enum class ModelKind : std::size_t { ernest = 0, gbm = 1, bom = 2, ogb = 3 };

inline constexpr std::size_t kModelCount = 4;
inline constexpr std::array<ModelKind, kModelCount> kAllModels = {
    ModelKind::ernest, ModelKind::gbm, ModelKind::bom, ModelKind::ogb};
/// Order used to break ties between equal CV scores.
inline constexpr std::array<ModelKind, kModelCount> kTiePriority = {
    ModelKind::ernest, ModelKind::bom, ModelKind::ogb, ModelKind::gbm};

std::string_view to_string(ModelKind kind);
/// Throws ParameterError for unknown names.
ModelKind parse_model_kind(std::string_view name);

using AnyModel = std::variant<ErnestModel, GbmModel, BomModel, OgbModel>;

/// Fits one model with default hyperparameters; throws ModelUnavailable when
/// the data cannot support it.
AnyModel fit_model(ModelKind kind, const Dataset& train);
double predict(const AnyModel& model, const JobRunRecord& record);
ModelKind kind_of(const AnyModel& model);

/// 100 * mean(|pred - actual| / actual). Throws ParameterError on length
/// mismatch, empty input or a non-positive actual.
double mape(std::span<const double> predictions, std::span<const double> actuals);

/// Mean CV MAPE per model, indexed by ModelKind. A model that fails on any
/// fold scores +infinity.
using ModelScores = std::array<double, kModelCount>;

/// Seeded k-fold CV; falls back to leave-one-out below `folds` records.
/// Throws ContractError with fewer than two records or folds < 2.
ModelScores cross_validate(const Dataset& train, std::size_t folds, std::uint64_t seed);

/// Argmin of `scores`, ties broken by kTiePriority. Throws ModelUnavailable
/// when every score is infinite.
ModelKind choose_model(const ModelScores& scores);

/// The fitted ensemble plus the CV-selected model used by predict().
struct TrainedPredictor {
  DatasetManifest manifest;
  std::array<std::optional<AnyModel>, kModelCount> models;
  ModelScores cv_scores{};
  ModelKind chosen = ModelKind::ernest;
  /// Wall-clock refit time per model; not serialized.
  std::array<double, kModelCount> fit_time_ms{};

  bool available(ModelKind kind) const { return models[static_cast<std::size_t>(kind)].has_value(); }
  double predict(const JobRunRecord& record) const { return predict(chosen, record); }
  /// Throws ModelUnavailable if `kind` could not be fitted.
  double predict(ModelKind kind, const JobRunRecord& record) const;
};

/// Cross-validates all four models, refits each on the full training set and
/// picks the best CV score.
TrainedPredictor c3o_select(const Dataset& train, std::size_t folds = 5, std::uint64_t seed = 0);

}  // namespace runtrim
