#include "runtrim/gbm.hpp"

#include <algorithm>
#include <numeric>

#include "runtrim/error.hpp"

namespace runtrim {
namespace {

// Splits whose SSE reduction is below this fraction of the node's sum of
// squared residuals are treated as noise.
constexpr double kRelativeMinGain = 1e-9;

struct Split {
  double gain = 0.0;
  int feature = TreeNode::kLeaf;
  double threshold = 0.0;
};

struct Accumulator {
  std::size_t count = 0;
  double sum = 0.0;
  double last = 0.0;
};

double midpoint(double lo, double hi) {
  const double mid = lo + (hi - lo) / 2.0;
  return mid < hi ? mid : lo;
}

class TreeBuilder {
 public:
  TreeBuilder(const Matrix& x, const std::vector<std::vector<std::size_t>>& order,
              std::size_t max_depth)
      : x_(x), order_(order), max_depth_(max_depth), node_of_(x.rows()) {}

  // Fits a tree to `residual`; leaf_of() then maps each row to its leaf.
  RegressionTree build(const std::vector<double>& residual) {
    const std::size_t n = x_.rows();
    RegressionTree tree;
    tree.nodes.emplace_back();
    std::fill(node_of_.begin(), node_of_.end(), 0);

    std::vector<int> active{0};
    for (std::size_t depth = 0; depth < max_depth_ && !active.empty(); ++depth) {
      const std::size_t nodes = tree.nodes.size();
      std::vector<std::size_t> count(nodes, 0);
      std::vector<double> sum(nodes, 0.0), squares(nodes, 0.0);
      std::vector<bool> is_active(nodes, false);
      for (const int a : active) is_active[static_cast<std::size_t>(a)] = true;
      for (std::size_t i = 0; i < n; ++i) {
        const auto node = static_cast<std::size_t>(node_of_[i]);
        if (!is_active[node]) continue;
        ++count[node];
        sum[node] += residual[i];
        squares[node] += residual[i] * residual[i];
      }

      std::vector<Split> best(nodes);
      std::vector<Accumulator> acc(nodes);
      for (std::size_t f = 0; f < x_.cols(); ++f) {
        for (const int a : active) acc[static_cast<std::size_t>(a)] = {};
        for (const std::size_t i : order_[f]) {
          const auto node = static_cast<std::size_t>(node_of_[i]);
          if (!is_active[node]) continue;
          auto& left = acc[node];
          const double v = x_(i, f);
          if (left.count > 0 && v != left.last) {
            const double right_sum = sum[node] - left.sum;
            const auto right_count = static_cast<double>(count[node] - left.count);
            const double gain = left.sum * left.sum / static_cast<double>(left.count) +
                                right_sum * right_sum / right_count -
                                sum[node] * sum[node] / static_cast<double>(count[node]);
            if (gain > best[node].gain) {
              best[node] = {gain, static_cast<int>(f), midpoint(left.last, v)};
            }
          }
          ++left.count;
          left.sum += residual[i];
          left.last = v;
        }
      }

      std::vector<int> next;
      for (const int a : active) {
        const auto node = static_cast<std::size_t>(a);
        const Split& split = best[node];
        if (split.feature == TreeNode::kLeaf || split.gain <= kRelativeMinGain * squares[node]) {
          continue;
        }
        const int left = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();
        tree.nodes.emplace_back();
        auto& parent = tree.nodes[node];
        parent.feature = split.feature;
        parent.threshold = split.threshold;
        parent.left = left;
        parent.right = left + 1;
        next.push_back(left);
        next.push_back(left + 1);
      }
      if (next.empty()) break;
      for (std::size_t i = 0; i < n; ++i) {
        const auto& node = tree.nodes[static_cast<std::size_t>(node_of_[i])];
        if (node.feature == TreeNode::kLeaf) continue;
        node_of_[i] = x_(i, static_cast<std::size_t>(node.feature)) <= node.threshold ? node.left
                                                                                      : node.right;
      }
      active = std::move(next);
    }

    std::vector<double> leaf_sum(tree.nodes.size(), 0.0);
    std::vector<std::size_t> leaf_count(tree.nodes.size(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto node = static_cast<std::size_t>(node_of_[i]);
      leaf_sum[node] += residual[i];
      ++leaf_count[node];
    }
    for (std::size_t node = 0; node < tree.nodes.size(); ++node) {
      if (tree.nodes[node].feature == TreeNode::kLeaf && leaf_count[node] > 0) {
        tree.nodes[node].value = leaf_sum[node] / static_cast<double>(leaf_count[node]);
      }
    }
    return tree;
  }

  const std::vector<int>& leaf_of() const { return node_of_; }

 private:
  const Matrix& x_;
  const std::vector<std::vector<std::size_t>>& order_;
  std::size_t max_depth_;
  std::vector<int> node_of_;
};

double mean_squared_error(std::span<const double> y, const std::vector<double>& prediction) {
  double sum = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double d = y[i] - prediction[i];
    sum += d * d;
  }
  return sum / static_cast<double>(y.size());
}

}  // namespace

double RegressionTree::predict(std::span<const double> x) const {
  std::size_t node = 0;
  while (nodes[node].feature != TreeNode::kLeaf) {
    const auto& split = nodes[node];
    node = static_cast<std::size_t>(x[static_cast<std::size_t>(split.feature)] <= split.threshold
                                        ? split.left
                                        : split.right);
  }
  return nodes[node].value;
}

double BoostedTrees::predict(std::span<const double> x) const {
  double sum = 0.0;
  for (const auto& tree : trees) sum += tree.predict(x);
  return initial_prediction + learning_rate * sum;
}

BoostedTrees fit_boosted_trees(const Matrix& x, std::span<const double> y, const GbmParams& params,
                               std::vector<double>* stage_mse) {
  if (x.rows() == 0 || x.rows() != y.size()) {
    throw ContractError("boosting needs a non-empty design matrix matching the target length");
  }
  const std::size_t n = x.rows();

  BoostedTrees model;
  model.learning_rate = params.learning_rate;
  double total = 0.0;
  for (const double v : y) total += v;
  model.initial_prediction = total / static_cast<double>(n);

  std::vector<std::vector<std::size_t>> order(x.cols(), std::vector<std::size_t>(n));
  for (std::size_t f = 0; f < x.cols(); ++f) {
    std::iota(order[f].begin(), order[f].end(), std::size_t{0});
    std::stable_sort(order[f].begin(), order[f].end(),
                     [&](std::size_t a, std::size_t b) { return x(a, f) < x(b, f); });
  }

  std::vector<double> prediction(n, model.initial_prediction);
  std::vector<double> residual(n);
  if (stage_mse) {
    stage_mse->clear();
    stage_mse->push_back(mean_squared_error(y, prediction));
  }
  TreeBuilder builder(x, order, params.max_depth);
  model.trees.reserve(params.n_trees);
  for (std::size_t t = 0; t < params.n_trees; ++t) {
    for (std::size_t i = 0; i < n; ++i) residual[i] = y[i] - prediction[i];
    RegressionTree tree = builder.build(residual);
    const auto& leaf_of = builder.leaf_of();
    for (std::size_t i = 0; i < n; ++i) {
      prediction[i] += params.learning_rate * tree.nodes[static_cast<std::size_t>(leaf_of[i])].value;
    }
    model.trees.push_back(std::move(tree));
    if (stage_mse) stage_mse->push_back(mean_squared_error(y, prediction));
  }
  return model;
}

GbmModel fit_gbm(const Dataset& train, const GbmParams& params) {
  if (train.empty()) throw ContractError("cannot fit GBM on an empty dataset");
  GbmModel model;
  model.encoder = FeatureEncoder::fit(train);
  const auto runtimes = train.runtimes();
  model.ensemble = fit_boosted_trees(model.encoder.encode_all(train), runtimes, params);
  return model;
}

double predict_gbm(const GbmModel& model, const JobRunRecord& record) {
  return std::max(model.ensemble.predict(model.encoder.encode(record)), 0.0);
}

}  // namespace runtrim
