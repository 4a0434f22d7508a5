#include <algorithm>
#include <cmath>
#include <limits>

#include "runtrim/clustering.hpp"
#include "runtrim/error.hpp"
#include "runtrim/rng.hpp"

namespace runtrim {
namespace {

constexpr std::size_t kMaxIterations = 300;
constexpr double kTolerance = 1e-4;

void check_points(const Matrix& points, std::size_t k) {
  if (k == 0 || k > points.rows()) {
    throw ParameterError("k must lie in [1, " + std::to_string(points.rows()) + "], got " +
                         std::to_string(k));
  }
  for (const double v : points.data()) {
    if (!std::isfinite(v)) throw ParameterError("points must be finite");
  }
}

Matrix seed_plus_plus(const Matrix& points, std::size_t k, Rng& rng) {
  const std::size_t n = points.rows();
  Matrix centroids;
  std::vector<bool> chosen(n, false);
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());

  std::size_t pick = rng.index(n);
  for (std::size_t c = 0; c < k; ++c) {
    if (c > 0) {
      double total = 0.0;
      for (const double d : nearest) total += d;
      if (total > 0.0) {
        const double target = rng.uniform() * total;
        double cumulative = 0.0;
        pick = n;
        std::size_t last_positive = 0;
        for (std::size_t i = 0; i < n; ++i) {
          if (nearest[i] <= 0.0) continue;
          last_positive = i;
          cumulative += nearest[i];
          if (cumulative > target) {
            pick = i;
            break;
          }
        }
        if (pick == n) pick = last_positive;
      } else {
        // Every point coincides with a centroid already; take the lowest unused row.
        pick = static_cast<std::size_t>(std::find(chosen.begin(), chosen.end(), false) -
                                        chosen.begin());
      }
    }
    chosen[pick] = true;
    centroids.append_row(points.row(pick));
    for (std::size_t i = 0; i < n; ++i) {
      nearest[i] = std::min(nearest[i], squared_distance(points.row(i), points.row(pick)));
    }
  }
  return centroids;
}

// Nearest centroid per row (lowest index on ties); returns the SSE.
double assign(const Matrix& points, const Matrix& centroids, std::vector<int>& labels) {
  double sse = 0.0;
  for (std::size_t i = 0; i < points.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    int best_index = 0;
    for (std::size_t c = 0; c < centroids.rows(); ++c) {
      const double d = squared_distance(points.row(i), centroids.row(c));
      if (d < best) {
        best = d;
        best_index = static_cast<int>(c);
      }
    }
    labels[i] = best_index;
    sse += best;
  }
  return sse;
}

}  // namespace

ClusteringResult kmeans(const Matrix& points, std::size_t k, std::uint64_t seed) {
  check_points(points, k);
  Rng rng(seed);
  const std::size_t n = points.rows();
  const std::size_t d = points.cols();

  ClusteringResult result;
  result.method = Method::kmeans;
  result.k = k;
  result.seed = seed;
  result.labels.assign(n, 0);

  Matrix centroids = seed_plus_plus(points, k, rng);
  std::vector<double> sums(k * d);
  std::vector<std::size_t> counts(k);

  for (std::size_t iteration = 1; iteration <= kMaxIterations; ++iteration) {
    result.sse_history.push_back(assign(points, centroids, result.labels));
    result.iterations = iteration;

    std::fill(sums.begin(), sums.end(), 0.0);
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto c = static_cast<std::size_t>(result.labels[i]);
      ++counts[c];
      const auto row = points.row(i);
      for (std::size_t j = 0; j < d; ++j) sums[c * d + j] += row[j];
    }
    double max_shift = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) continue;  // empty cluster keeps its centroid
      double shift = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        const double updated = sums[c * d + j] / static_cast<double>(counts[c]);
        const double delta = updated - centroids(c, j);
        shift += delta * delta;
        centroids(c, j) = updated;
      }
      max_shift = std::max(max_shift, std::sqrt(shift));
    }
    if (max_shift < kTolerance) break;
  }

  result.cost = assign(points, centroids, result.labels);
  result.sse_history.push_back(result.cost);
  result.representatives = std::move(centroids);
  result.source_rows.assign(k, std::nullopt);
  result.cluster_count = k;
  return result;
}

}  // namespace runtrim
