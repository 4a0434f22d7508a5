#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "runtrim/dataset.hpp"
#include "runtrim/encoding.hpp"
#include "runtrim/matrix.hpp"

namespace runtrim {

enum class Method { kmeans, kmedoids, dbscan };

std::string_view to_string(Method method);
/// Throws ParameterError for unknown names.
Method parse_method(std::string_view name);

inline constexpr int kNoise = -1;

struct ClusteringResult {
  Method method = Method::kmeans;
  std::size_t k = 0;          // kmeans / kmedoids
  double eps = 0.0;           // dbscan
  std::size_t min_pts = 0;    // dbscan
  std::uint64_t seed = 0;

  /// Cluster id per input row; kNoise for DBSCAN noise.
  std::vector<int> labels;
  /// One row per representative, in the clustered (standardized) space.
  Matrix representatives;
  /// Input row a representative was copied from, or nullopt for means.
  std::vector<std::optional<std::size_t>> source_rows;

  std::size_t cluster_count = 0;
  std::size_t noise_count = 0;
  /// kmeans: within-cluster sum of squares. kmedoids: total distance to medoids.
  double cost = 0.0;
  std::size_t iterations = 0;
  /// kmeans only: SSE after every assignment step.
  std::vector<double> sse_history;
};

/// Lloyd's algorithm with seeded k-means++ initialization. At most 300
/// iterations; stops when no centroid moves by 1e-4 or more.
ClusteringResult kmeans(const Matrix& points, std::size_t k, std::uint64_t seed);

/// PAM (BUILD + SWAP) on Euclidean distances. Medoids are reported in
/// ascending row order.
ClusteringResult kmedoids(const Matrix& points, std::size_t k, std::uint64_t seed);

/// Density-based clustering; a core point has at least `min_pts` points
/// (itself included) within distance <= eps. Representatives are cluster
/// means followed by every noise point verbatim.
ClusteringResult dbscan(const Matrix& points, double eps, std::size_t min_pts = 2);

/// Maps representatives back to records: de-standardizes, decodes one-hot
/// blocks by argmax, rounds scale-out to an integer >= 1 and keeps runtime
/// positive. Representatives copied from an input row reproduce that row's
/// record exactly. Throws ContractError if `encoded` lacks the target column.
Dataset representatives_to_dataset(const ClusteringResult& result, const EncodedMatrix& encoded,
                                   const DatasetManifest& manifest);

}  // namespace runtrim
