#include "rst/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rst {

namespace {

constexpr double kMinDecrease = 1e-12;

double weighted_decrease(double parent_gini,
                         const std::vector<int>& left_counts,
                         const std::vector<int>& right_counts) {
  double nl = std::accumulate(left_counts.begin(), left_counts.end(), 0);
  double nr = std::accumulate(right_counts.begin(), right_counts.end(), 0);
  double n = nl + nr;
  return parent_gini - (nl / n) * gini(left_counts) -
         (nr / n) * gini(right_counts);
}

std::vector<int> histogram(const std::vector<int>& labels,
                           const std::vector<int>& rows, int num_classes) {
  std::vector<int> counts(static_cast<std::size_t>(num_classes), 0);
  for (int r : rows) counts[static_cast<std::size_t>(labels[r] - 1)]++;
  return counts;
}

void consider(std::optional<SplitCandidate>& best, int feature,
              double threshold, double decrease) {
  if (decrease <= kMinDecrease) return;
  if (!best || decrease > best->impurity_decrease) {
    best = SplitCandidate{feature, threshold, decrease};
  }
  // Equal decreases keep the earlier candidate; features are scanned in
  // ascending index order and thresholds in ascending value order, so
  // the kept one has the lowest feature index, then smallest threshold.
}

}  // namespace

double gini(const std::vector<int>& counts) {
  long total = std::accumulate(counts.begin(), counts.end(), 0L);
  if (total <= 0) {
    throw std::invalid_argument("gini: histogram has no samples");
  }
  double g = 1.0;
  for (int c : counts) {
    double p = static_cast<double>(c) / static_cast<double>(total);
    g -= p * p;
  }
  return g;
}

std::optional<SplitCandidate> best_split(const Eigen::MatrixXd& matrix,
                                         const std::vector<int>& labels,
                                         const std::vector<int>& row_subset,
                                         int num_classes,
                                         const std::vector<int>* features) {
  if (row_subset.empty()) {
    throw std::invalid_argument("best_split: empty row subset");
  }
  const std::vector<int>& parent_counts =
      histogram(labels, row_subset, num_classes);
  double parent_gini = gini(parent_counts);

  std::vector<int> all_features;
  if (!features) {
    all_features.resize(static_cast<std::size_t>(matrix.cols()));
    std::iota(all_features.begin(), all_features.end(), 0);
    features = &all_features;
  }

  std::optional<SplitCandidate> best;
  std::vector<std::pair<double, int>> sorted;  // (value, label)
  for (int f : *features) {
    sorted.clear();
    for (int r : row_subset) sorted.emplace_back(matrix(r, f), labels[r]);
    std::sort(sorted.begin(), sorted.end());

    std::vector<int> left(static_cast<std::size_t>(num_classes), 0);
    std::vector<int> right = parent_counts;
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
      int z = sorted[i].second - 1;
      left[static_cast<std::size_t>(z)]++;
      right[static_cast<std::size_t>(z)]--;
      if (sorted[i].first == sorted[i + 1].first) continue;
      double threshold = 0.5 * (sorted[i].first + sorted[i + 1].first);
      consider(best, f, threshold, weighted_decrease(parent_gini, left, right));
    }
  }
  return best;
}

std::optional<SplitCandidate> random_split(const Eigen::MatrixXd& matrix,
                                           const std::vector<int>& labels,
                                           const std::vector<int>& row_subset,
                                           int num_classes, Rng& rng) {
  if (row_subset.empty()) {
    throw std::invalid_argument("random_split: empty row subset");
  }
  const std::vector<int>& parent_counts =
      histogram(labels, row_subset, num_classes);
  double parent_gini = gini(parent_counts);

  std::optional<SplitCandidate> best;
  for (int f = 0; f < matrix.cols(); ++f) {
    double lo = matrix(row_subset[0], f);
    double hi = lo;
    for (int r : row_subset) {
      lo = std::min(lo, matrix(r, f));
      hi = std::max(hi, matrix(r, f));
    }
    if (!(hi > lo)) continue;  // constant feature: no draw

    double threshold = rng.next_real(lo, hi);
    if (threshold <= lo) threshold = std::nextafter(lo, hi);
    if (threshold >= hi) threshold = std::nextafter(hi, lo);

    std::vector<int> left(static_cast<std::size_t>(num_classes), 0);
    std::vector<int> right(static_cast<std::size_t>(num_classes), 0);
    for (int r : row_subset) {
      int z = labels[r] - 1;
      if (matrix(r, f) <= threshold) {
        left[static_cast<std::size_t>(z)]++;
      } else {
        right[static_cast<std::size_t>(z)]++;
      }
    }
    consider(best, f, threshold, weighted_decrease(parent_gini, left, right));
  }
  return best;
}

namespace {

struct Grower {
  const Eigen::MatrixXd& matrix;
  const std::vector<int>& labels;
  const TreeParams& params;
  int num_classes;
  Rng& rng;
  DecisionTree& tree;

  int make_leaf(const std::vector<int>& rows) {
    TreeNode node;
    node.counts = histogram(labels, rows, num_classes);
    tree.nodes.push_back(std::move(node));
    return static_cast<int>(tree.nodes.size()) - 1;
  }

  bool is_pure(const std::vector<int>& rows) const {
    for (std::size_t i = 1; i < rows.size(); ++i) {
      if (labels[rows[i]] != labels[rows[0]]) return false;
    }
    return true;
  }

  // Partial Fisher-Yates over the feature indices; result sorted so the
  // subsequent exhaustive scan keeps the lowest-index tie rule.
  std::vector<int> sample_features() {
    std::vector<int> pool(static_cast<std::size_t>(matrix.cols()));
    std::iota(pool.begin(), pool.end(), 0);
    int take = std::min<int>(params.mtry, static_cast<int>(pool.size()));
    for (int i = 0; i < take; ++i) {
      int j = rng.next_int(i, static_cast<int>(pool.size()) - 1);
      std::swap(pool[static_cast<std::size_t>(i)],
                pool[static_cast<std::size_t>(j)]);
    }
    pool.resize(static_cast<std::size_t>(take));
    std::sort(pool.begin(), pool.end());
    return pool;
  }

  int build(const std::vector<int>& rows, int depth) {
    bool depth_capped =
        params.max_depth && depth >= *params.max_depth;
    if (static_cast<int>(rows.size()) < params.min_samples_split ||
        depth_capped || is_pure(rows)) {
      return make_leaf(rows);
    }

    std::optional<SplitCandidate> split;
    if (params.split_strategy == SplitStrategy::Best) {
      if (params.mtry > 0 && params.mtry < matrix.cols()) {
        std::vector<int> features = sample_features();
        split = best_split(matrix, labels, rows, num_classes, &features);
      } else {
        split = best_split(matrix, labels, rows, num_classes);
      }
    } else {
      split = random_split(matrix, labels, rows, num_classes, rng);
    }
    if (!split) return make_leaf(rows);

    std::vector<int> left_rows, right_rows;
    for (int r : rows) {
      if (matrix(r, split->feature_index) <= split->threshold) {
        left_rows.push_back(r);
      } else {
        right_rows.push_back(r);
      }
    }

    int id = static_cast<int>(tree.nodes.size());
    TreeNode node;
    node.feature_index = split->feature_index;
    node.threshold = split->threshold;
    tree.nodes.push_back(std::move(node));
    int left = build(left_rows, depth + 1);
    int right = build(right_rows, depth + 1);
    tree.nodes[static_cast<std::size_t>(id)].left = left;
    tree.nodes[static_cast<std::size_t>(id)].right = right;
    return id;
  }
};

}  // namespace

DecisionTree grow_tree(const Eigen::MatrixXd& matrix,
                       const std::vector<int>& labels, const TreeParams& params,
                       Rng& rng, const std::vector<int>* row_subset,
                       int num_classes) {
  if (matrix.rows() == 0 || labels.empty()) {
    throw std::invalid_argument("grow_tree: empty training set");
  }
  if (static_cast<Eigen::Index>(labels.size()) != matrix.rows()) {
    throw std::invalid_argument("grow_tree: label count mismatch");
  }
  if (num_classes == 0) {
    num_classes = *std::max_element(labels.begin(), labels.end());
  }

  std::vector<int> all_rows;
  if (!row_subset) {
    all_rows.resize(static_cast<std::size_t>(matrix.rows()));
    std::iota(all_rows.begin(), all_rows.end(), 0);
    row_subset = &all_rows;
  }
  if (row_subset->empty()) {
    throw std::invalid_argument("grow_tree: empty row subset");
  }

  DecisionTree tree;
  tree.num_features = static_cast<int>(matrix.cols());
  tree.num_classes = num_classes;
  tree.params = params;
  Grower grower{matrix, labels, params, num_classes, rng, tree};
  grower.build(*row_subset, 0);
  return tree;
}

DecisionTree grow_tree(const Eigen::MatrixXd& matrix,
                       const std::vector<int>& labels, const TreeParams& params,
                       std::uint64_t seed) {
  Rng rng(seed);
  DecisionTree tree = grow_tree(matrix, labels, params, rng);
  tree.seed = seed;
  return tree;
}

int predict_tree(const DecisionTree& tree, const Eigen::VectorXd& row) {
  if (row.size() != tree.num_features) {
    throw std::invalid_argument("predict_tree: row width " +
                                std::to_string(row.size()) +
                                " does not match training width " +
                                std::to_string(tree.num_features));
  }
  const TreeNode* node = &tree.nodes[0];
  while (!node->is_leaf()) {
    int next = row[node->feature_index] <= node->threshold ? node->left
                                                           : node->right;
    node = &tree.nodes[static_cast<std::size_t>(next)];
  }
  int best_class = 1;
  int best_count = -1;
  for (std::size_t z = 0; z < node->counts.size(); ++z) {
    if (node->counts[z] > best_count) {
      best_count = node->counts[z];
      best_class = static_cast<int>(z) + 1;
    }
  }
  return best_class;
}

}  // namespace rst
