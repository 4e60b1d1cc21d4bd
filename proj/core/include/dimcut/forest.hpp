#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dimcut/importance.hpp"
#include "dimcut/tabular.hpp"

namespace dimcut {

/// How many candidate features a split examines.
struct MaxFeatures {
  enum class Rule { Sqrt, All, Fraction };
  Rule rule = Rule::Sqrt;
  double fraction = 1.0;

  static MaxFeatures sqrt() { return {Rule::Sqrt, 1.0}; }
  static MaxFeatures all() { return {Rule::All, 1.0}; }
  static MaxFeatures of(double fraction) { return {Rule::Fraction, fraction}; }

  /// Number of features to try, in [1, n_features].
  std::size_t resolve(std::size_t n_features) const;
};

struct ForestConfig {
  std::size_t n_trees = 100;
  std::optional<std::size_t> max_depth;
  std::size_t min_samples_split = 2;
  /// Unset: Sqrt for classification, Fraction(1/3) for regression.
  std::optional<MaxFeatures> max_features;
  /// Sample rows with replacement per tree. Disabled only for single-tree
  /// diagnostics.
  bool bootstrap = true;
  std::uint64_t seed = 1;

  void validate() const;
};

/// One CART node. Leaves have feature == kLeaf.
struct TreeNode {
  static constexpr std::uint32_t kLeaf = UINT32_MAX;

  std::uint32_t feature = kLeaf;
  double threshold = 0.0;  // go left when x[feature] <= threshold
  std::uint32_t left = 0;
  std::uint32_t right = 0;
  double value = 0.0;  // mean (regression) or majority class (classification)
  std::uint32_t n_samples = 0;
  double impurity = 0.0;  // Gini or variance at this node

  bool is_leaf() const noexcept { return feature == kLeaf; }
};

class DecisionTree {
 public:
  DecisionTree() = default;
  DecisionTree(std::vector<TreeNode> nodes, std::vector<double> importance,
               std::vector<bool> in_bag)
      : nodes_(std::move(nodes)), importance_(std::move(importance)), in_bag_(std::move(in_bag)) {}

  double predict(std::span<const double> row) const;

  const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }
  const TreeNode& root() const { return nodes_.front(); }
  /// Unnormalized impurity decrease credited to each feature.
  const std::vector<double>& raw_importance() const noexcept { return importance_; }
  bool in_bag(std::size_t row) const { return in_bag_[row]; }
  std::size_t depth() const;

 private:
  std::vector<TreeNode> nodes_;
  std::vector<double> importance_;
  std::vector<bool> in_bag_;
};

/// Bagged CART ensemble. Immutable and shareable after fitting.
class FittedForest {
 public:
  FittedForest(std::vector<DecisionTree> trees, ProblemType type, std::size_t n_features,
               std::size_t n_classes)
      : trees_(std::move(trees)), type_(type), n_features_(n_features), n_classes_(n_classes) {}

  /// Mean of tree outputs (regression) or majority vote, ties to the lower
  /// class (classification).
  double predict(std::span<const double> row) const;
  std::vector<double> predict(const Matrix& x) const;

  /// Out-of-bag R^2 (regression) or accuracy (classification) on the
  /// training dataset. Rows that were in every bag are skipped.
  double oob_score(const Dataset& training) const;

  const std::vector<DecisionTree>& trees() const noexcept { return trees_; }
  ProblemType problem_type() const noexcept { return type_; }
  std::size_t n_features() const noexcept { return n_features_; }
  std::size_t n_classes() const noexcept { return n_classes_; }

 private:
  std::vector<DecisionTree> trees_;
  ProblemType type_;
  std::size_t n_features_;
  std::size_t n_classes_;
};

/// Trains config.n_trees trees on bootstrap samples. Split criteria are Gini
/// (classification) and variance reduction (regression); thresholds are
/// midpoints between consecutive distinct values.
///
/// Per-tree and per-node randomness is derived from (seed, tree index, node
/// path, feature name) only, so permuting columns permutes the result and
/// parallel training matches sequential training bit for bit.
FittedForest fit_forest(const Dataset& dataset, const ForestConfig& config);

/// Mean decrease in impurity, summed over trees and normalized to 1.
ImportanceVector feature_importance(const FittedForest& forest);

}  // namespace dimcut
