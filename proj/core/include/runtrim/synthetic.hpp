#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "runtrim/dataset.hpp"

namespace runtrim {

/// Numeric algorithm parameter; scales runtime by (value / reference)^exponent.
struct SyntheticParameter {
  std::string name;
  std::vector<double> levels;
  double exponent = 0.0;
  double reference = 1.0;
};

/// Node type with a multiplicative runtime factor.
struct SyntheticNodeType {
  std::string name;
  double factor = 1.0;
};

/// Generator for one job type. Runtime = context factor x Ernest form x
/// lognormal noise; configurations are drawn uniformly from the level lists.
struct SyntheticSpec {
  std::string job_type = "job";
  std::array<double, 4> theta{};  // [1, s/m, log2 m, m] coefficients
  std::vector<double> machines;
  std::vector<double> datasizes;  // MB
  std::vector<SyntheticParameter> parameters;
  std::vector<SyntheticNodeType> node_types;
  double noise_sigma = 0.05;
  std::size_t rows = 100;
  double duplicate_fraction = 0.1;

  /// Throws ParameterError for empty level lists, rows < 10, and the like.
  void validate() const;
};

/// Columns: machines, data_size_mb, node_type, then one per parameter; target runtime_s.
DatasetManifest synthetic_manifest(const SyntheticSpec& spec);

/// Multiplicative factor from node type and algorithm parameters.
double context_factor(const SyntheticSpec& spec, const JobRunRecord& record);
/// Noise-free runtime of a record under the generator.
double ground_truth_runtime(const SyntheticSpec& spec, const JobRunRecord& record);

/// Deterministic given (spec, seed). Exactly round(duplicate_fraction * rows)
/// rows are verbatim copies of earlier rows.
Dataset generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed);

struct SyntheticSuite {
  std::uint64_t seed = 0;
  std::vector<SyntheticSpec> jobs;
};

/// Five job types (sort, grep, sgd, kmeans, pagerank), 930 rows in total.
SyntheticSuite default_suite();

/// Per-job datasets of a suite; job i uses derive_seed(suite.seed, i).
std::vector<Dataset> generate_suite(const SyntheticSuite& suite);

/// JSON form of a suite (see docs/formats.md). Throws ParseError.
SyntheticSuite parse_suite_json(std::string_view text);
std::string suite_to_json(const SyntheticSuite& suite);
/// Single job description including the seed it was generated with.
std::string spec_to_json(const SyntheticSpec& spec, std::uint64_t seed);

}  // namespace runtrim
