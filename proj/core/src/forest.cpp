#include "dimcut/forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "dimcut/parallel.hpp"
#include "dimcut/rng.hpp"

namespace dimcut {

namespace {

constexpr std::uint64_t kTreeStream = 0x7265'6573'7473ULL;
constexpr std::uint64_t kRootTag = 0x726f6f74ULL;

struct SplitChoice {
  std::uint32_t feature = TreeNode::kLeaf;
  double threshold = 0.0;
  double score = 0.0;  // criterion proxy; larger is better
  std::size_t n_left = 0;
};

class TreeBuilder {
 public:
  TreeBuilder(const Dataset& data, const ForestConfig& config, std::size_t mtry,
              std::span<const std::uint64_t> name_keys, std::uint64_t tree_seed)
      : data_(data),
        config_(config),
        mtry_(mtry),
        name_keys_(name_keys),
        tree_seed_(tree_seed),
        classification_(data.problem_type() == ProblemType::Classification),
        n_classes_(data.n_classes()),
        importance_(data.n_features(), 0.0) {
    counts_left_.resize(n_classes_);
    counts_total_.resize(n_classes_);
  }

  DecisionTree build() {
    const std::size_t n = data_.n_rows();
    std::vector<bool> in_bag(n, false);
    std::vector<std::uint32_t> rows(n);
    if (config_.bootstrap) {
      Rng rng(tree_seed_);
      for (auto& r : rows) {
        r = static_cast<std::uint32_t>(rng.uniform_index(n));
        in_bag[r] = true;
      }
      // Sorted sample keeps feature sorting stable with respect to row id.
      std::sort(rows.begin(), rows.end());
    } else {
      std::iota(rows.begin(), rows.end(), 0U);
      std::fill(in_bag.begin(), in_bag.end(), true);
    }
    total_samples_ = static_cast<double>(rows.size());
    rows_ = std::move(rows);
    nodes_.reserve(2 * n / std::max<std::size_t>(1, config_.min_samples_split) + 1);
    grow(0, rows_.size(), 0, derive_seed(tree_seed_, kRootTag));
    for (auto& v : importance_) v /= total_samples_;
    return DecisionTree(std::move(nodes_), std::move(importance_), std::move(in_bag));
  }

 private:
  double target(std::uint32_t row) const { return data_.target()[row]; }

  // Impurity and leaf value for rows_[begin, end).
  std::pair<double, double> node_stats(std::size_t begin, std::size_t end) {
    const double count = static_cast<double>(end - begin);
    if (classification_) {
      std::fill(counts_total_.begin(), counts_total_.end(), 0.0);
      for (std::size_t i = begin; i < end; ++i) counts_total_[data_.label(rows_[i])] += 1.0;
      double sum_sq = 0.0;
      std::size_t majority = 0;
      for (std::size_t c = 0; c < n_classes_; ++c) {
        sum_sq += counts_total_[c] * counts_total_[c];
        if (counts_total_[c] > counts_total_[majority]) majority = c;
      }
      return {1.0 - sum_sq / (count * count), static_cast<double>(majority)};
    }
    double mean = 0.0;
    for (std::size_t i = begin; i < end; ++i) mean += target(rows_[i]);
    mean /= count;
    double var = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
      const double d = target(rows_[i]) - mean;
      var += d * d;
    }
    return {var / count, mean};
  }

  std::uint32_t grow(std::size_t begin, std::size_t end, std::size_t depth,
                     std::uint64_t node_key) {
    const auto index = static_cast<std::uint32_t>(nodes_.size());
    nodes_.emplace_back();
    const auto [impurity, value] = node_stats(begin, end);
    {
      TreeNode& node = nodes_[index];
      node.value = value;
      node.impurity = impurity;
      node.n_samples = static_cast<std::uint32_t>(end - begin);
    }

    const std::size_t count = end - begin;
    const bool depth_limited = config_.max_depth && depth >= *config_.max_depth;
    if (depth_limited || count < config_.min_samples_split || impurity <= 1e-14) return index;

    const SplitChoice split = find_split(begin, end, node_key);
    if (split.feature == TreeNode::kLeaf) return index;

    // Partition rows_ in place, preserving relative order on both sides.
    const auto middle = std::stable_partition(
        rows_.begin() + static_cast<std::ptrdiff_t>(begin),
        rows_.begin() + static_cast<std::ptrdiff_t>(end), [&](std::uint32_t r) {
          return data_.features()(r, split.feature) <= split.threshold;
        });
    const auto mid = static_cast<std::size_t>(middle - rows_.begin());
    if (mid == begin || mid == end) return index;

    const std::uint32_t left = grow(begin, mid, depth + 1, derive_seed(node_key, 0));
    const std::uint32_t right = grow(mid, end, depth + 1, derive_seed(node_key, 1));

    const double n_t = static_cast<double>(count);
    const double decrease = n_t * impurity -
                            static_cast<double>(mid - begin) * nodes_[left].impurity -
                            static_cast<double>(end - mid) * nodes_[right].impurity;
    importance_[split.feature] += decrease;

    TreeNode& node = nodes_[index];
    node.feature = split.feature;
    node.threshold = split.threshold;
    node.left = left;
    node.right = right;
    return index;
  }

  SplitChoice find_split(std::size_t begin, std::size_t end, std::uint64_t node_key) {
    const std::size_t n_features = data_.n_features();
    candidates_.resize(n_features);
    for (std::size_t j = 0; j < n_features; ++j) {
      candidates_[j] = {derive_seed(node_key, name_keys_[j]), static_cast<std::uint32_t>(j)};
    }
    std::sort(candidates_.begin(), candidates_.end());

    SplitChoice best;
    bool have_best = false;
    std::size_t tried = 0;
    const std::size_t count = end - begin;
    values_.resize(count);

    for (const auto& [key, feature] : candidates_) {
      if (tried >= mtry_) break;
      for (std::size_t i = 0; i < count; ++i) {
        const std::uint32_t r = rows_[begin + i];
        values_[i] = {data_.features()(r, feature), r};
      }
      std::sort(values_.begin(), values_.end());
      if (values_.front().first == values_.back().first) continue;  // constant here
      ++tried;

      SplitChoice candidate = classification_ ? scan_gini(count) : scan_variance(count);
      candidate.feature = feature;
      if (candidate.n_left > 0 && (!have_best || candidate.score > best.score)) {
        best = candidate;
        have_best = true;
      }
    }
    return best;
  }

  double midpoint(std::size_t i) const {
    const double a = values_[i].first;
    const double b = values_[i + 1].first;
    double mid = a + (b - a) / 2.0;
    if (mid >= b) mid = a;
    return mid;
  }

  // Maximises sum_k n_k * sum_c p_kc^2, equivalent to minimising weighted Gini.
  SplitChoice scan_gini(std::size_t count) {
    std::fill(counts_left_.begin(), counts_left_.end(), 0.0);
    std::fill(counts_total_.begin(), counts_total_.end(), 0.0);
    for (const auto& v : values_) counts_total_[data_.label(v.second)] += 1.0;
    double left_sq = 0.0;
    double right_sq = 0.0;
    for (double c : counts_total_) right_sq += c * c;

    SplitChoice best;
    bool have = false;
    for (std::size_t i = 0; i + 1 < count; ++i) {
      const std::size_t c = data_.label(values_[i].second);
      const double lc = counts_left_[c];
      const double rc = counts_total_[c] - lc;
      left_sq += 2.0 * lc + 1.0;
      right_sq -= 2.0 * rc - 1.0;
      counts_left_[c] = lc + 1.0;
      if (values_[i].first == values_[i + 1].first) continue;
      const double nl = static_cast<double>(i + 1);
      const double nr = static_cast<double>(count - i - 1);
      const double score = left_sq / nl + right_sq / nr;
      if (!have || score > best.score) {
        best.score = score;
        best.threshold = midpoint(i);
        best.n_left = i + 1;
        have = true;
      }
    }
    return best;
  }

  // Maximises S_L^2 / n_L + S_R^2 / n_R, equivalent to minimising the
  // weighted child variance.
  SplitChoice scan_variance(std::size_t count) {
    double total = 0.0;
    for (const auto& v : values_) total += target(v.second);
    double left_sum = 0.0;
    SplitChoice best;
    bool have = false;
    for (std::size_t i = 0; i + 1 < count; ++i) {
      left_sum += target(values_[i].second);
      if (values_[i].first == values_[i + 1].first) continue;
      const double nl = static_cast<double>(i + 1);
      const double nr = static_cast<double>(count - i - 1);
      const double right_sum = total - left_sum;
      const double score = left_sum * left_sum / nl + right_sum * right_sum / nr;
      if (!have || score > best.score) {
        best.score = score;
        best.threshold = midpoint(i);
        best.n_left = i + 1;
        have = true;
      }
    }
    return best;
  }

  const Dataset& data_;
  const ForestConfig& config_;
  std::size_t mtry_;
  std::span<const std::uint64_t> name_keys_;
  std::uint64_t tree_seed_;
  bool classification_;
  std::size_t n_classes_;
  double total_samples_ = 0.0;

  std::vector<std::uint32_t> rows_;
  std::vector<TreeNode> nodes_;
  std::vector<double> importance_;
  std::vector<std::pair<std::uint64_t, std::uint32_t>> candidates_;
  std::vector<std::pair<double, std::uint32_t>> values_;
  std::vector<double> counts_left_;
  std::vector<double> counts_total_;
};

std::size_t vote(std::span<const double> predictions, std::size_t n_classes) {
  std::vector<std::size_t> votes(n_classes, 0);
  for (double p : predictions) ++votes[static_cast<std::size_t>(p)];
  return static_cast<std::size_t>(std::max_element(votes.begin(), votes.end()) - votes.begin());
}

}  // namespace

std::size_t MaxFeatures::resolve(std::size_t n_features) const {
  double k = 0.0;
  switch (rule) {
    case Rule::Sqrt: k = std::floor(std::sqrt(static_cast<double>(n_features))); break;
    case Rule::All: k = static_cast<double>(n_features); break;
    case Rule::Fraction: k = std::floor(fraction * static_cast<double>(n_features)); break;
  }
  return std::clamp<std::size_t>(static_cast<std::size_t>(k), 1, n_features);
}

void ForestConfig::validate() const {
  if (n_trees < 1) throw std::invalid_argument("n_trees must be at least 1");
  if (max_depth && *max_depth < 1) throw std::invalid_argument("max_depth must be positive");
  if (min_samples_split < 2) throw std::invalid_argument("min_samples_split must be at least 2");
  if (max_features && max_features->rule == MaxFeatures::Rule::Fraction &&
      !(max_features->fraction > 0.0 && max_features->fraction <= 1.0)) {
    throw std::invalid_argument("max_features fraction must lie in (0, 1]");
  }
}

double DecisionTree::predict(std::span<const double> row) const {
  std::uint32_t i = 0;
  while (!nodes_[i].is_leaf()) {
    const TreeNode& node = nodes_[i];
    i = row[node.feature] <= node.threshold ? node.left : node.right;
  }
  return nodes_[i].value;
}

std::size_t DecisionTree::depth() const {
  std::vector<std::size_t> depth(nodes_.size(), 0);
  std::size_t deepest = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    deepest = std::max(deepest, depth[i]);
    if (!nodes_[i].is_leaf()) {
      depth[nodes_[i].left] = depth[i] + 1;
      depth[nodes_[i].right] = depth[i] + 1;
    }
  }
  return deepest;
}

double FittedForest::predict(std::span<const double> row) const {
  std::vector<double> outputs(trees_.size());
  for (std::size_t t = 0; t < trees_.size(); ++t) outputs[t] = trees_[t].predict(row);
  if (type_ == ProblemType::Classification) {
    return static_cast<double>(vote(outputs, n_classes_));
  }
  return std::accumulate(outputs.begin(), outputs.end(), 0.0) /
         static_cast<double>(outputs.size());
}

std::vector<double> FittedForest::predict(const Matrix& x) const {
  std::vector<double> out(x.rows());
  for (std::size_t r = 0; r < x.rows(); ++r) out[r] = predict(x.row(r));
  return out;
}

double FittedForest::oob_score(const Dataset& training) const {
  const std::size_t n = training.n_rows();
  std::vector<double> outputs;
  std::vector<double> predicted;
  std::vector<double> actual;
  for (std::size_t r = 0; r < n; ++r) {
    outputs.clear();
    for (const auto& tree : trees_) {
      if (!tree.in_bag(r)) outputs.push_back(tree.predict(training.features().row(r)));
    }
    if (outputs.empty()) continue;
    actual.push_back(training.target()[r]);
    if (type_ == ProblemType::Classification) {
      predicted.push_back(static_cast<double>(vote(outputs, n_classes_)));
    } else {
      predicted.push_back(std::accumulate(outputs.begin(), outputs.end(), 0.0) /
                          static_cast<double>(outputs.size()));
    }
  }
  if (actual.empty()) throw std::runtime_error("no out-of-bag rows");
  if (type_ == ProblemType::Classification) {
    std::size_t correct = 0;
    for (std::size_t i = 0; i < actual.size(); ++i) correct += predicted[i] == actual[i];
    return static_cast<double>(correct) / static_cast<double>(actual.size());
  }
  const double mean =
      std::accumulate(actual.begin(), actual.end(), 0.0) / static_cast<double>(actual.size());
  double ss_res = 0.0;
  double ss_tot = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    ss_res += (actual[i] - predicted[i]) * (actual[i] - predicted[i]);
    ss_tot += (actual[i] - mean) * (actual[i] - mean);
  }
  return ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 0.0;
}

FittedForest fit_forest(const Dataset& dataset, const ForestConfig& config) {
  config.validate();
  const bool classification = dataset.problem_type() == ProblemType::Classification;
  const MaxFeatures rule = config.max_features.value_or(
      classification ? MaxFeatures::sqrt() : MaxFeatures::of(1.0 / 3.0));
  const std::size_t mtry = rule.resolve(dataset.n_features());

  std::vector<std::uint64_t> name_keys(dataset.n_features());
  for (std::size_t j = 0; j < name_keys.size(); ++j) {
    name_keys[j] = hash_string(dataset.feature_names()[j]);
  }

  std::vector<DecisionTree> trees(config.n_trees);
  parallel_for(config.n_trees, [&](std::size_t t) {
    TreeBuilder builder(dataset, config, mtry, name_keys, derive_seed(config.seed, kTreeStream, t));
    trees[t] = builder.build();
  });
  return FittedForest(std::move(trees), dataset.problem_type(), dataset.n_features(),
                      dataset.n_classes());
}

ImportanceVector feature_importance(const FittedForest& forest) {
  std::vector<double> total(forest.n_features(), 0.0);
  for (const auto& tree : forest.trees()) {
    const auto& raw = tree.raw_importance();
    for (std::size_t j = 0; j < total.size(); ++j) total[j] += raw[j];
  }
  for (double& v : total) v /= static_cast<double>(forest.trees().size());
  return ImportanceVector::normalize(std::move(total), ImportanceSource::Forest);
}

}  // namespace dimcut
