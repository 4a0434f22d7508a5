#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "runtrim/clustering.hpp"
#include "runtrim/dataset.hpp"

namespace runtrim {

struct JobDataset {
  std::string job_type;
  Dataset data;
};

/// Which reductions to evaluate and how often. Levels are retained
/// fractions; dbscan resolves each fraction with an eps sweep unless
/// explicit `dbscan_eps` radii are given.
struct ExperimentConfig {
  std::vector<JobDataset> datasets;
  std::vector<Method> methods;
  std::vector<double> levels;
  std::optional<std::vector<double>> dbscan_eps;
  std::size_t repetitions = 20;
  double test_fraction = 0.2;
  /// Any of "ernest", "gbm", "bom", "ogb", "c3o".
  std::vector<std::string> models = {"ernest", "gbm", "bom", "ogb", "c3o"};
  std::uint64_t base_seed = 0;
  std::size_t folds = 5;

  /// Throws ParameterError.
  void validate() const;
};

/// Aggregate over repetitions for one (job, method, level, model) cell.
/// `runs == 0` marks a configuration on which the model was infeasible.
struct EvaluationRow {
  std::string job_type;
  Method method = Method::kmeans;
  double level = 0.0;
  double achieved_size = 0.0;  // mean reduced training size
  std::size_t test_rows = 0;
  std::string model;
  std::size_t runs = 0;
  double mean_mape = 0.0;
  std::optional<double> stddev_mape;
  double mean_train_time_ms = 0.0;
};

struct EvaluationReport {
  std::vector<EvaluationRow> rows;
};

/// Per repetition: one seeded holdout split per job; every method x level
/// reduces the train part only, the selector is fitted on the reduced data
/// and scored on the untouched test part. Repetition r of job j uses
/// derive_seed(derive_seed(base_seed, j), r) for the split, the reduction and
/// the selector's folds.
EvaluationReport run_experiment(const ExperimentConfig& config);

/// Header: job_type,method,level,achieved_size,test_rows,model,runs,mean_mape,
/// stddev_mape,mean_train_time_ms. The timing column is omitted when
/// `include_timing` is false.
void write_report_csv(const EvaluationReport& report, std::ostream& out, bool include_timing = true);

/// Writes mape_<method>.svg, comparison.svg and training_time.svg into `dir`.
void write_report_svgs(const EvaluationReport& report, const std::filesystem::path& dir);

/// Loads an experiment description (JSON, see docs/formats.md). Relative
/// paths resolve against the config file's directory.
ExperimentConfig load_experiment_config(const std::filesystem::path& path);
ExperimentConfig parse_experiment_config(std::string_view json, const std::filesystem::path& base_dir);

struct TimingRow {
  double level = 0.0;
  std::size_t training_size = 0;
  std::size_t repetitions = 0;
  double mean_ms = 0.0;
  std::optional<double> stddev_ms;
};

struct TimingStudy {
  std::vector<TimingRow> rows;
  /// Spearman correlation of level vs mean time; empty when undefined.
  std::optional<double> spearman;
};

/// Times c3o_select on reductions of `dataset` at each level. One warm-up
/// fit per level is discarded.
TimingStudy measure_training_time(const Dataset& dataset, std::span<const double> levels,
                                  std::size_t repetitions, std::uint64_t seed,
                                  Method method = Method::kmeans, std::size_t folds = 5);

/// Rank correlation with average ranks for ties; empty for fewer than two
/// points or a constant input.
std::optional<double> spearman_correlation(std::span<const double> x, std::span<const double> y);

void write_timing_csv(const TimingStudy& study, std::ostream& out);

}  // namespace runtrim
