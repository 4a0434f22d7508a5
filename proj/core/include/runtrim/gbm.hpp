#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "runtrim/dataset.hpp"
#include "runtrim/features.hpp"
#include "runtrim/matrix.hpp"

namespace runtrim {

struct TreeNode {
  static constexpr int kLeaf = -1;

  int feature = kLeaf;  // kLeaf marks a leaf
  double threshold = 0.0;  // x[feature] <= threshold goes left
  int left = -1;
  int right = -1;
  double value = 0.0;  // leaf output

  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

struct RegressionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  double predict(std::span<const double> x) const;

  friend bool operator==(const RegressionTree&, const RegressionTree&) = default;
};

struct GbmParams {
  std::size_t n_trees = 100;
  std::size_t max_depth = 3;
  double learning_rate = 0.1;
};

/// Least-squares boosted regression trees over a numeric design matrix.
struct BoostedTrees {
  double initial_prediction = 0.0;
  double learning_rate = 0.1;
  std::vector<RegressionTree> trees;

  /// Raw ensemble output (no flooring).
  double predict(std::span<const double> x) const;

  friend bool operator==(const BoostedTrees&, const BoostedTrees&) = default;
};

/// Starts from mean(y); each stage fits a depth-limited tree to the residuals
/// with variance-reduction splits (ties: lowest column, then lowest threshold).
/// When `stage_mse` is given it receives the training MSE before the first
/// tree and after every stage.
BoostedTrees fit_boosted_trees(const Matrix& x, std::span<const double> y,
                               const GbmParams& params = {},
                               std::vector<double>* stage_mse = nullptr);

struct GbmModel {
  FeatureEncoder encoder;
  BoostedTrees ensemble;

  friend bool operator==(const GbmModel&, const GbmModel&) = default;
};

GbmModel fit_gbm(const Dataset& train, const GbmParams& params = {});
double predict_gbm(const GbmModel& model, const JobRunRecord& record);

}  // namespace runtrim
