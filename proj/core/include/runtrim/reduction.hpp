#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "runtrim/clustering.hpp"
#include "runtrim/dataset.hpp"

namespace runtrim {

/// What to reduce to. kmeans/kmedoids take a retained fraction; dbscan takes
/// either a radius or a retained fraction that is resolved by an eps sweep.
struct ReductionRequest {
  Method method = Method::kmeans;
  std::optional<double> retained_fraction;
  std::optional<double> eps;
  std::size_t min_pts = 2;
  std::uint64_t seed = 0;

  /// Throws ParameterError when the target does not fit the method.
  void validate() const;
};

struct ReductionReport {
  std::size_t original_size = 0;
  std::size_t dedup_size = 0;
  std::size_t reduced_size = 0;
  Method method = Method::kmeans;
  std::optional<double> retained_fraction;
  std::optional<std::size_t> k;
  std::optional<double> eps;
  std::size_t min_pts = 0;
  std::uint64_t seed = 0;
  std::size_t noise_retained = 0;
  /// Holdout estimates; absent when not computed or when no model could be fitted.
  std::optional<double> est_full_mape;
  std::optional<double> est_reduced_mape;
};

struct Reduction {
  Dataset dataset;
  ReductionReport report;
};

/// ceil(fraction * size), guarded against floating-point overshoot.
std::size_t resolve_cluster_count(double fraction, std::size_t size);

/// deduplicate -> encode with target -> cluster -> decode representatives.
/// A retained fraction that resolves to every unique record returns the
/// deduplicated dataset unchanged, whatever the method. Leaves the MAPE
/// estimates empty. Throws ParameterError when the resolved cluster count
/// falls outside [1, dedup_size].
Reduction reduce_dataset(const Dataset& dataset, const ReductionRequest& request);

struct EstimateOptions {
  std::size_t repetitions = 10;
  double test_fraction = 0.2;
  std::size_t folds = 5;
};

/// reduce_dataset() plus holdout estimates of the selector's test MAPE when
/// trained on full versus reduced data (same seeded splits for both).
std::pair<Dataset, ReductionReport> reduce(const Dataset& dataset, const ReductionRequest& request,
                                           const EstimateOptions& options = {});

/// Geometric grid of `count` radii spanning [0.01 D, D], D the largest
/// pairwise distance among `points`.
std::vector<double> default_eps_grid(const Matrix& points, std::size_t count = 32);

struct DbscanSweep {
  double eps = 0.0;
  ClusteringResult result;
};

/// Runs DBSCAN over the grid and keeps the radius whose representative count
/// is closest to `target_size`; ties go to the larger radius.
DbscanSweep sweep_dbscan(const Matrix& points, std::size_t target_size,
                         const std::optional<std::vector<double>>& grid = std::nullopt,
                         std::size_t min_pts = 2);

struct HoldoutSplit {
  Dataset train;
  Dataset test;
};

/// Seeded random split; the test part gets round(test_fraction * n) rows,
/// at least one, and the train part at least two.
HoldoutSplit holdout_split(const Dataset& dataset, double test_fraction, std::uint64_t seed);

/// `key = value` lines.
std::string format_report(const ReductionReport& report);
std::string report_csv_header();
std::string report_csv_row(const ReductionReport& report);

// Contribution validation.

enum class Verdict { accepted, deferred };
std::string_view to_string(Verdict verdict);

struct ContributionDecision {
  Verdict verdict = Verdict::accepted;
  double mape_before = 0.0;
  double mape_after = 0.0;
  /// Allowed increase in percentage points: max(0.5, 5% of mape_before).
  double threshold = 0.0;
  /// 1-based batch rows that failed the plausibility check.
  std::vector<std::size_t> flagged_rows;
  std::size_t evaluated_rows = 0;
};

/// Flags implausible batch rows (record invariant violations, or a numeric
/// feature outside [min/2, max*2] of `current`), then compares the selected
/// model's CV MAPE without and with the remaining rows. Deferred when the
/// increase exceeds the threshold or when every batch row was flagged.
/// Throws SchemaError if the manifests differ.
ContributionDecision validate_contribution(const Dataset& current, const Dataset& batch,
                                           std::uint64_t seed, std::size_t folds = 5);

std::string format_decision(const ContributionDecision& decision);
std::string decision_csv_header();
std::string decision_csv_row(const ContributionDecision& decision);

}  // namespace runtrim
