#include "runtrim/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "runtrim/encoding.hpp"
#include "runtrim/error.hpp"
#include "runtrim/rng.hpp"
#include "runtrim/selector.hpp"

namespace runtrim {
namespace {

std::string optional_number(const std::optional<double>& value) {
  return value ? format_double(*value) : std::string{};
}

}  // namespace

void ReductionRequest::validate() const {
  if (retained_fraction) {
    if (!(*retained_fraction > 0.0 && *retained_fraction <= 1.0)) {
      throw ParameterError("retained fraction must lie in (0, 1]");
    }
  }
  if (eps && !(*eps > 0.0 && std::isfinite(*eps))) throw ParameterError("eps must be positive");
  switch (method) {
    case Method::kmeans:
    case Method::kmedoids:
      if (!retained_fraction) throw ParameterError(std::string(to_string(method)) + " needs a retained fraction");
      if (eps) throw ParameterError(std::string(to_string(method)) + " does not take eps");
      break;
    case Method::dbscan:
      if (retained_fraction.has_value() == eps.has_value()) {
        throw ParameterError("dbscan needs exactly one of eps or a retained fraction");
      }
      if (min_pts == 0) throw ParameterError("min_pts must be >= 1");
      break;
  }
}

std::size_t resolve_cluster_count(double fraction, std::size_t size) {
  return static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(size) - 1e-9));
}

std::vector<double> default_eps_grid(const Matrix& points, std::size_t count) {
  if (count == 0) return {};
  double diameter2 = 0.0;
  for (std::size_t i = 0; i < points.rows(); ++i) {
    for (std::size_t j = i + 1; j < points.rows(); ++j) {
      diameter2 = std::max(diameter2, squared_distance(points.row(i), points.row(j)));
    }
  }
  const double diameter = diameter2 > 0.0 ? std::sqrt(diameter2) : 1.0;
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double t = count == 1 ? 1.0 : static_cast<double>(i) / static_cast<double>(count - 1);
    grid[i] = 0.01 * diameter * std::pow(100.0, t);
  }
  grid.back() = diameter;
  return grid;
}

DbscanSweep sweep_dbscan(const Matrix& points, std::size_t target_size,
                         const std::optional<std::vector<double>>& grid, std::size_t min_pts) {
  if (target_size == 0 || target_size > points.rows()) {
    throw ParameterError("target size must lie in [1, " + std::to_string(points.rows()) + "]");
  }
  std::vector<double> radii = grid ? *grid : default_eps_grid(points);
  if (radii.empty()) throw ParameterError("eps grid is empty");
  std::sort(radii.begin(), radii.end());

  std::optional<DbscanSweep> best;
  std::size_t best_gap = 0;
  for (const double eps : radii) {
    ClusteringResult result = dbscan(points, eps, min_pts);
    const std::size_t count = result.representatives.rows();
    const std::size_t gap = count > target_size ? count - target_size : target_size - count;
    // Ascending radii: `<=` hands ties to the larger eps.
    if (!best || gap <= best_gap) {
      best_gap = gap;
      best = DbscanSweep{eps, std::move(result)};
    }
  }
  return std::move(*best);
}

Reduction reduce_dataset(const Dataset& dataset, const ReductionRequest& request) {
  request.validate();
  if (dataset.empty()) throw ContractError("cannot reduce an empty dataset");

  Dataset unique = deduplicate(dataset);

  ReductionReport report;
  report.original_size = dataset.size();
  report.dedup_size = unique.size();
  report.method = request.method;
  report.retained_fraction = request.retained_fraction;
  report.seed = request.seed;

  if (request.retained_fraction &&
      resolve_cluster_count(*request.retained_fraction, unique.size()) == unique.size()) {
    if (request.method == Method::dbscan) {
      report.min_pts = request.min_pts;
      report.noise_retained = unique.size();
    } else {
      report.k = unique.size();
    }
    report.reduced_size = unique.size();
    return {std::move(unique), report};
  }

  const EncodedMatrix encoded = encode(unique, true);
  ClusteringResult clustering;
  if (request.method == Method::dbscan) {
    report.min_pts = request.min_pts;
    if (request.eps) {
      clustering = dbscan(encoded.standardized, *request.eps, request.min_pts);
    } else {
      const std::size_t target = resolve_cluster_count(*request.retained_fraction, unique.size());
      if (target == 0 || target > unique.size()) {
        throw ParameterError("retained fraction resolves to " + std::to_string(target) + " points");
      }
      clustering = sweep_dbscan(encoded.standardized, target, std::nullopt, request.min_pts).result;
    }
    report.eps = clustering.eps;
    report.noise_retained = clustering.noise_count;
  } else {
    const std::size_t k = resolve_cluster_count(*request.retained_fraction, unique.size());
    if (k == 0 || k > unique.size()) {
      throw ParameterError("retained fraction resolves to k = " + std::to_string(k) +
                           " for " + std::to_string(unique.size()) + " unique records");
    }
    report.k = k;
    clustering = request.method == Method::kmeans ? kmeans(encoded.standardized, k, request.seed)
                                                  : kmedoids(encoded.standardized, k, request.seed);
  }

  Dataset reduced = representatives_to_dataset(clustering, encoded, unique.manifest);
  report.reduced_size = reduced.size();
  return {std::move(reduced), report};
}

HoldoutSplit holdout_split(const Dataset& dataset, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw ParameterError("test fraction must lie in (0, 1)");
  }
  const std::size_t n = dataset.size();
  if (n < 3) throw ContractError("holdout split needs at least three records");
  auto test_size = static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(n)));
  test_size = std::clamp<std::size_t>(test_size, 1, n - 2);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(order);
  std::vector<std::size_t> test(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(test_size));
  std::vector<std::size_t> train(order.begin() + static_cast<std::ptrdiff_t>(test_size), order.end());
  // Keep original relative order inside each part.
  std::sort(test.begin(), test.end());
  std::sort(train.begin(), train.end());
  return {dataset.subset(train), dataset.subset(test)};
}

std::pair<Dataset, ReductionReport> reduce(const Dataset& dataset, const ReductionRequest& request,
                                           const EstimateOptions& options) {
  Reduction reduction = reduce_dataset(dataset, request);

  const Dataset unique = deduplicate(dataset);
  double full_sum = 0.0, reduced_sum = 0.0;
  std::size_t runs = 0;
  if (unique.size() >= 3) {
    for (std::size_t rep = 0; rep < options.repetitions; ++rep) {
      const std::uint64_t seed = derive_seed(request.seed, rep);
      const HoldoutSplit split = holdout_split(unique, options.test_fraction, seed);
      const auto actuals = split.test.runtimes();
      auto score = [&](const Dataset& train) {
        const TrainedPredictor predictor = c3o_select(train, options.folds, seed);
        std::vector<double> predictions;
        for (const auto& record : split.test.records) predictions.push_back(predictor.predict(record));
        return mape(predictions, actuals);
      };
      try {
        ReductionRequest rep_request = request;
        rep_request.seed = seed;
        const double full = score(split.train);
        const double reduced = score(reduce_dataset(split.train, rep_request).dataset);
        full_sum += full;
        reduced_sum += reduced;
        ++runs;
      } catch (const ModelUnavailable&) {
      } catch (const ContractError&) {
      } catch (const ParameterError&) {
      }
    }
  }
  if (runs > 0) {
    reduction.report.est_full_mape = full_sum / static_cast<double>(runs);
    reduction.report.est_reduced_mape = reduced_sum / static_cast<double>(runs);
  }
  return {std::move(reduction.dataset), reduction.report};
}

std::string format_report(const ReductionReport& report) {
  std::ostringstream out;
  out << "method = " << to_string(report.method) << '\n'
      << "original_size = " << report.original_size << '\n'
      << "dedup_size = " << report.dedup_size << '\n'
      << "reduced_size = " << report.reduced_size << '\n';
  if (report.retained_fraction) out << "retained_fraction = " << format_double(*report.retained_fraction) << '\n';
  if (report.k) out << "k = " << *report.k << '\n';
  if (report.eps) {
    out << "eps = " << format_double(*report.eps) << '\n'
        << "min_pts = " << report.min_pts << '\n'
        << "noise_retained = " << report.noise_retained << '\n';
  }
  out << "seed = " << report.seed << '\n'
      << "est_full_mape = " << optional_number(report.est_full_mape) << '\n'
      << "est_reduced_mape = " << optional_number(report.est_reduced_mape) << '\n';
  return out.str();
}

std::string report_csv_header() {
  return "method,original_size,dedup_size,reduced_size,retained_fraction,k,eps,min_pts,"
         "noise_retained,seed,est_full_mape,est_reduced_mape";
}

std::string report_csv_row(const ReductionReport& report) {
  std::ostringstream out;
  out << to_string(report.method) << ',' << report.original_size << ',' << report.dedup_size << ','
      << report.reduced_size << ',' << optional_number(report.retained_fraction) << ','
      << (report.k ? std::to_string(*report.k) : std::string{}) << ','
      << optional_number(report.eps) << ','
      << (report.eps ? std::to_string(report.min_pts) : std::string{}) << ','
      << report.noise_retained << ',' << report.seed << ','
      << optional_number(report.est_full_mape) << ',' << optional_number(report.est_reduced_mape);
  return out.str();
}

}  // namespace runtrim
