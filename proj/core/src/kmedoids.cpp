#include <algorithm>
#include <cmath>
#include <limits>

#include "runtrim/clustering.hpp"
#include "runtrim/error.hpp"

namespace runtrim {
namespace {

constexpr std::size_t kMaxSwaps = 10000;
constexpr std::size_t kBuildStarts = 8;

class DistanceMatrix {
 public:
  explicit DistanceMatrix(const Matrix& points) : n_(points.rows()), values_(n_ * n_, 0.0) {
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = i + 1; j < n_; ++j) {
        const double d = std::sqrt(squared_distance(points.row(i), points.row(j)));
        values_[i * n_ + j] = d;
        values_[j * n_ + i] = d;
      }
    }
  }
  double operator()(std::size_t i, std::size_t j) const { return values_[i * n_ + j]; }
  std::size_t size() const { return n_; }

 private:
  std::size_t n_;
  std::vector<double> values_;
};

struct Nearest {
  std::vector<std::size_t> slot;  // index into the medoid list
  std::vector<double> first;
  std::vector<double> second;
};

Nearest nearest_medoids(const DistanceMatrix& dist, const std::vector<std::size_t>& medoids) {
  const std::size_t n = dist.size();
  Nearest out{std::vector<std::size_t>(n), std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    double runner_up = std::numeric_limits<double>::infinity();
    std::size_t best_slot = 0;
    for (std::size_t s = 0; s < medoids.size(); ++s) {
      const double d = dist(i, medoids[s]);
      if (d < best) {
        runner_up = best;
        best = d;
        best_slot = s;
      } else if (d < runner_up) {
        runner_up = d;
      }
    }
    out.slot[i] = best_slot;
    out.first[i] = best;
    out.second[i] = runner_up;
  }
  return out;
}

// Greedy BUILD seeded with `first` as the initial medoid.
std::vector<std::size_t> build(const DistanceMatrix& dist, std::size_t k, std::size_t first) {
  const std::size_t n = dist.size();
  std::vector<std::size_t> medoids;
  std::vector<bool> is_medoid(n, false);
  medoids.push_back(first);
  is_medoid[first] = true;
  std::vector<double> nearest(n);
  for (std::size_t i = 0; i < n; ++i) nearest[i] = dist(i, first);

  while (medoids.size() < k) {
    double best_gain = -1.0;
    std::size_t pick = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (is_medoid[j]) continue;
      double gain = 0.0;
      for (std::size_t i = 0; i < n; ++i) gain += std::max(nearest[i] - dist(i, j), 0.0);
      if (gain > best_gain) {
        best_gain = gain;
        pick = j;
      }
    }
    medoids.push_back(pick);
    is_medoid[pick] = true;
    for (std::size_t i = 0; i < n; ++i) nearest[i] = std::min(nearest[i], dist(i, pick));
  }
  return medoids;
}

// SWAP: apply the best single (medoid, non-medoid) exchange until none
// lowers the cost. Returns the number of exchanges made.
std::size_t swap_phase(const DistanceMatrix& dist, std::vector<std::size_t>& medoids) {
  const std::size_t n = dist.size();
  const std::size_t k = medoids.size();
  std::vector<bool> is_medoid(n, false);
  for (const auto m : medoids) is_medoid[m] = true;

  std::size_t swaps = 0;
  for (; swaps < kMaxSwaps; ++swaps) {
    const Nearest near = nearest_medoids(dist, medoids);
    double cost = 0.0;
    for (const double d : near.first) cost += d;
    const double tolerance = 1e-12 * (cost + 1.0);

    // All k exchange deltas for a candidate h come from one pass over the
    // points: every point may move to h, and points of the removed medoid
    // additionally fall back to their second-nearest medoid.
    std::vector<double> slot_best(k, std::numeric_limits<double>::infinity());
    std::vector<std::size_t> slot_candidate(k, n);
    std::vector<double> delta(k);
    for (std::size_t h = 0; h < n; ++h) {
      if (is_medoid[h]) continue;
      double shared = 0.0;
      std::fill(delta.begin(), delta.end(), 0.0);
      for (std::size_t j = 0; j < n; ++j) {
        const double d_jh = dist(j, h);
        const double gain = std::min(d_jh - near.first[j], 0.0);
        shared += gain;
        delta[near.slot[j]] += std::min(d_jh, near.second[j]) - near.first[j] - gain;
      }
      for (std::size_t slot = 0; slot < k; ++slot) {
        if (shared + delta[slot] < slot_best[slot]) {
          slot_best[slot] = shared + delta[slot];
          slot_candidate[slot] = h;
        }
      }
    }
    double best_delta = -tolerance;
    std::size_t best_slot = k;
    std::size_t best_candidate = n;
    for (std::size_t slot = 0; slot < k; ++slot) {
      if (slot_best[slot] < best_delta) {
        best_delta = slot_best[slot];
        best_slot = slot;
        best_candidate = slot_candidate[slot];
      }
    }
    if (best_slot == k) break;
    is_medoid[medoids[best_slot]] = false;
    is_medoid[best_candidate] = true;
    medoids[best_slot] = best_candidate;
  }
  return swaps;
}

double total_cost(const DistanceMatrix& dist, const std::vector<std::size_t>& medoids) {
  double cost = 0.0;
  for (const double d : nearest_medoids(dist, medoids).first) cost += d;
  return cost;
}

}  // namespace

ClusteringResult kmedoids(const Matrix& points, std::size_t k, std::uint64_t seed) {
  if (k == 0 || k > points.rows()) {
    throw ParameterError("k must lie in [1, " + std::to_string(points.rows()) + "], got " +
                         std::to_string(k));
  }
  for (const double v : points.data()) {
    if (!std::isfinite(v)) throw ParameterError("points must be finite");
  }
  const DistanceMatrix dist(points);
  const std::size_t n = points.rows();

  // BUILD normally starts from the most central point; a few runners-up are
  // tried as well and the cheapest local optimum is kept.
  std::vector<double> totals(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) totals[j] += dist(i, j);
  }
  std::vector<std::size_t> order(n);
  for (std::size_t j = 0; j < n; ++j) order[j] = j;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return totals[a] < totals[b]; });

  std::vector<std::size_t> medoids;
  double best_cost = std::numeric_limits<double>::infinity();
  std::size_t swaps = 0;
  const std::size_t starts = k == n ? 1 : std::min(n, kBuildStarts);
  for (std::size_t s = 0; s < starts; ++s) {
    std::vector<std::size_t> candidate = build(dist, k, order[s]);
    const std::size_t used = swap_phase(dist, candidate);
    const double cost = total_cost(dist, candidate);
    if (cost < best_cost - 1e-12 * (best_cost + 1.0) || medoids.empty()) {
      best_cost = cost;
      medoids = std::move(candidate);
      swaps = used;
    }
  }

  std::sort(medoids.begin(), medoids.end());
  const Nearest near = nearest_medoids(dist, medoids);

  ClusteringResult result;
  result.method = Method::kmedoids;
  result.k = k;
  result.seed = seed;
  result.iterations = swaps;
  result.cluster_count = k;
  result.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    result.labels[i] = static_cast<int>(near.slot[i]);
    result.cost += near.first[i];
  }
  for (const auto m : medoids) {
    result.representatives.append_row(points.row(m));
    result.source_rows.emplace_back(m);
  }
  return result;
}

}  // namespace runtrim
