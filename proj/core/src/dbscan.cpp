#include <cmath>
#include <deque>

#include "runtrim/clustering.hpp"
#include "runtrim/error.hpp"

namespace runtrim {

std::string_view to_string(Method method) {
  switch (method) {
    case Method::kmeans: return "kmeans";
    case Method::kmedoids: return "kmedoids";
    case Method::dbscan: return "dbscan";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  if (name == "kmeans") return Method::kmeans;
  if (name == "kmedoids") return Method::kmedoids;
  if (name == "dbscan") return Method::dbscan;
  throw ParameterError("unknown clustering method '" + std::string(name) + "'");
}

ClusteringResult dbscan(const Matrix& points, double eps, std::size_t min_pts) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw ParameterError("eps must be a positive number");
  if (min_pts == 0) throw ParameterError("min_pts must be >= 1");
  const std::size_t n = points.rows();
  const double eps2 = eps * eps;

  std::vector<std::vector<std::size_t>> neighbors(n);
  for (std::size_t i = 0; i < n; ++i) {
    neighbors[i].push_back(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      if (squared_distance(points.row(i), points.row(j)) <= eps2) {
        neighbors[i].push_back(j);
        neighbors[j].push_back(i);
      }
    }
  }
  std::vector<bool> core(n);
  for (std::size_t i = 0; i < n; ++i) core[i] = neighbors[i].size() >= min_pts;

  constexpr int kUnassigned = -2;
  std::vector<int> labels(n, kUnassigned);
  int cluster = 0;
  std::deque<std::size_t> frontier;
  for (std::size_t i = 0; i < n; ++i) {
    if (labels[i] != kUnassigned || !core[i]) continue;
    labels[i] = cluster;
    frontier.push_back(i);
    while (!frontier.empty()) {
      const std::size_t p = frontier.front();
      frontier.pop_front();
      if (!core[p]) continue;
      for (const auto q : neighbors[p]) {
        if (labels[q] == kUnassigned) {
          labels[q] = cluster;
          frontier.push_back(q);
        }
      }
    }
    ++cluster;
  }

  ClusteringResult result;
  result.method = Method::dbscan;
  result.eps = eps;
  result.min_pts = min_pts;
  result.cluster_count = static_cast<std::size_t>(cluster);

  const std::size_t d = points.cols();
  Matrix sums(result.cluster_count, d);
  std::vector<std::size_t> counts(result.cluster_count, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (labels[i] == kUnassigned) {
      labels[i] = kNoise;
      ++result.noise_count;
      continue;
    }
    const auto c = static_cast<std::size_t>(labels[i]);
    ++counts[c];
    const auto row = points.row(i);
    for (std::size_t j = 0; j < d; ++j) sums(c, j) += row[j];
  }
  for (std::size_t c = 0; c < result.cluster_count; ++c) {
    std::vector<double> mean(d);
    for (std::size_t j = 0; j < d; ++j) mean[j] = sums(c, j) / static_cast<double>(counts[c]);
    result.representatives.append_row(mean);
    result.source_rows.emplace_back(std::nullopt);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (labels[i] != kNoise) continue;
    result.representatives.append_row(points.row(i));
    result.source_rows.emplace_back(i);
  }
  result.labels = std::move(labels);
  return result;
}

}  // namespace runtrim
