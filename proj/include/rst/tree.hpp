#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "rst/rng.hpp"

namespace rst {

enum class SplitStrategy { Best, Random };

struct TreeParams {
  SplitStrategy split_strategy = SplitStrategy::Best;
  int min_samples_split = 2;
  std::optional<int> max_depth;  // absent = unlimited
  /// Per-node feature subsample size; 0 means all features. Used only by
  /// the plain Random Forest baseline, never by RST trees.
  int mtry = 0;
};

struct SplitCandidate {
  int feature_index = -1;
  double threshold = 0.0;
  double impurity_decrease = 0.0;
};

/// Flat node storage. Internal nodes have left/right >= 0; leaves have
/// left = right = -1 and a nonempty class-count histogram. Rows with
/// value <= threshold go left.
struct TreeNode {
  int feature_index = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  std::vector<int> counts;  // leaf histogram over classes 1..Z

  bool is_leaf() const { return left < 0; }
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
  int num_features = 0;
  int num_classes = 0;
  TreeParams params;
  std::uint64_t seed = 0;
};

/// Gini impurity 1 - sum_z (n_z / n)^2 of a class-count histogram.
/// Rejects an all-zero histogram.
double gini(const std::vector<int>& counts);

/// Exhaustive split search: every feature, every midpoint between
/// consecutive distinct sorted values within the row subset. Returns the
/// candidate with the largest weighted Gini decrease, or absent when no
/// split has positive decrease. Ties go to the lowest feature index,
/// then the smallest threshold. Labels are class ids in 1..num_classes.
std::optional<SplitCandidate> best_split(const Eigen::MatrixXd& matrix,
                                         const std::vector<int>& labels,
                                         const std::vector<int>& row_subset,
                                         int num_classes,
                                         const std::vector<int>* features = nullptr);

/// Randomized split search: scans features in ascending index order and,
/// for each feature that is non-constant on the subset, draws exactly one
/// threshold uniformly from the open interval (min, max) of its values
/// (constant features consume no draws). Returns the best positive-decrease
/// candidate among the draws with the same tie-breaking as best_split.
std::optional<SplitCandidate> random_split(const Eigen::MatrixXd& matrix,
                                           const std::vector<int>& labels,
                                           const std::vector<int>& row_subset,
                                           int num_classes, Rng& rng);

/// Grows a CART tree by recursive partitioning (depth-first, left child
/// before right). A node becomes a leaf when it is pure, holds fewer than
/// min_samples_split rows, reaches max_depth, or no positive-decrease
/// split exists. Per-node generator draw order: mtry feature subsample
/// (when mtry > 0) first, then the split draws of the Random strategy.
/// row_subset may contain repeated indices (bootstrap); nullptr means all
/// rows. num_classes 0 means infer from the labels.
DecisionTree grow_tree(const Eigen::MatrixXd& matrix,
                       const std::vector<int>& labels, const TreeParams& params,
                       Rng& rng, const std::vector<int>* row_subset = nullptr,
                       int num_classes = 0);

DecisionTree grow_tree(const Eigen::MatrixXd& matrix,
                       const std::vector<int>& labels, const TreeParams& params,
                       std::uint64_t seed);

/// Routes a row to a leaf and returns the leaf's majority class id
/// (ties to the lowest class id).
int predict_tree(const DecisionTree& tree, const Eigen::VectorXd& row);

}  // namespace rst
