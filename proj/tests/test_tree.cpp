#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "rst/rng.hpp"
#include "rst/tree.hpp"

using namespace rst;

namespace {

// Brute-force split enumerator, independent of best_split: scans every
// feature and every midpoint by naive partition counting.
std::optional<SplitCandidate> brute_force_split(const Eigen::MatrixXd& matrix,
                                                const std::vector<int>& labels,
                                                const std::vector<int>& rows,
                                                int num_classes) {
  auto counts_of = [&](const std::vector<int>& subset) {
    std::vector<int> counts(num_classes, 0);
    for (int r : subset) counts[labels[r] - 1]++;
    return counts;
  };
  double parent = gini(counts_of(rows));
  std::optional<SplitCandidate> best;
  for (int f = 0; f < matrix.cols(); ++f) {
    std::vector<double> values;
    for (int r : rows) values.push_back(matrix(r, f));
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
      double threshold = 0.5 * (values[i] + values[i + 1]);
      std::vector<int> left, right;
      for (int r : rows) {
        (matrix(r, f) <= threshold ? left : right).push_back(r);
      }
      double nl = left.size(), nr = right.size(), n = nl + nr;
      double decrease = parent - (nl / n) * gini(counts_of(left)) -
                        (nr / n) * gini(counts_of(right));
      if (decrease <= 1e-12) continue;
      if (!best || decrease > best->impurity_decrease) {
        best = SplitCandidate{f, threshold, decrease};
      }
    }
  }
  return best;
}

std::vector<int> all_rows(int n) {
  std::vector<int> rows(n);
  std::iota(rows.begin(), rows.end(), 0);
  return rows;
}

}  // namespace

TEST_CASE("gini values") {
  CHECK(gini({5, 5}) == doctest::Approx(0.5));
  CHECK(gini({10, 0}) == 0.0);
  CHECK(gini({2, 3, 5}) == doctest::Approx(0.62).epsilon(1e-12));
  CHECK_THROWS_AS(gini({0, 0}), std::invalid_argument);
}

TEST_CASE("gini bounds: zero iff pure, at most 1 - 1/Z") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    int z = rng.next_int(2, 5);
    std::vector<int> counts(z);
    for (int& c : counts) c = rng.next_int(0, 10);
    if (std::accumulate(counts.begin(), counts.end(), 0) == 0) counts[0] = 1;
    double g = gini(counts);
    CHECK(g >= 0.0);
    CHECK(g <= 1.0 - 1.0 / z + 1e-12);
    int nonzero = 0;
    for (int c : counts) nonzero += c > 0;
    if (nonzero == 1) CHECK(g == 0.0);
    if (g == 0.0) CHECK(nonzero == 1);
  }
}

TEST_CASE("best_split separates a clean 1D dataset at the midpoint") {
  Eigen::MatrixXd matrix(4, 1);
  matrix << 0, 1, 2, 3;
  std::vector<int> labels{1, 1, 2, 2};
  auto split = best_split(matrix, labels, all_rows(4), 2);
  REQUIRE(split.has_value());
  CHECK(split->feature_index == 0);
  CHECK(split->threshold == doctest::Approx(1.5));
  CHECK(split->impurity_decrease == doctest::Approx(0.5));
}

TEST_CASE("best_split returns absent when nothing separates") {
  Eigen::MatrixXd matrix(4, 1);
  matrix << 1, 2, 3, 4;
  std::vector<int> pure{1, 1, 1, 1};
  CHECK_FALSE(best_split(matrix, pure, all_rows(4), 1).has_value());

  Eigen::MatrixXd dup(4, 1);
  dup << 2, 2, 2, 2;  // identical points, conflicting labels
  std::vector<int> conflict{1, 2, 1, 2};
  CHECK_FALSE(best_split(dup, conflict, all_rows(4), 2).has_value());
}

TEST_CASE("best_split decrease matches the brute-force enumerator exactly") {
  Rng rng(2024);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::MatrixXd matrix(20, 3);
    std::vector<int> labels;
    for (int i = 0; i < 20; ++i) {
      for (int j = 0; j < 3; ++j) matrix(i, j) = rng.next_real(-1.0, 1.0);
      labels.push_back(rng.next_int(1, 3));
    }
    auto fast = best_split(matrix, labels, all_rows(20), 3);
    auto brute = brute_force_split(matrix, labels, all_rows(20), 3);
    REQUIRE(fast.has_value() == brute.has_value());
    if (fast) {
      CHECK(fast->impurity_decrease == brute->impurity_decrease);
      CHECK(fast->feature_index == brute->feature_index);
      CHECK(fast->threshold == brute->threshold);
    }
  }
}

TEST_CASE("random_split skips constant features and stays in range") {
  Eigen::MatrixXd constant = Eigen::MatrixXd::Constant(5, 2, 3.0);
  std::vector<int> labels{1, 2, 1, 2, 1};
  Rng rng(17);
  CHECK_FALSE(random_split(constant, labels, all_rows(5), 2, rng).has_value());

  Eigen::MatrixXd matrix(6, 1);
  matrix << 0, 0, 0, 5, 5, 5;
  std::vector<int> sep{1, 1, 1, 2, 2, 2};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng r(seed);
    auto split = random_split(matrix, sep, all_rows(6), 2, r);
    REQUIRE(split.has_value());
    CHECK(split->threshold > 0.0);
    CHECK(split->threshold < 5.0);
  }
}

TEST_CASE("random_split replays against a hand-driven generator sequence") {
  Rng data_rng(88);
  Eigen::MatrixXd matrix(12, 2);
  std::vector<int> labels;
  for (int i = 0; i < 12; ++i) {
    matrix(i, 0) = data_rng.next_real(-1.0, 1.0);
    matrix(i, 1) = data_rng.next_real(-1.0, 1.0);
    labels.push_back(1 + i % 2);
  }
  std::vector<int> rows = all_rows(12);

  const std::uint64_t seed = 4242;
  Rng rng(seed);
  auto split = random_split(matrix, labels, rows, 2, rng);

  // Replay: one uniform draw per non-constant feature, ascending feature
  // order, best positive decrease wins, earlier feature on ties.
  Rng replay(seed);
  std::optional<SplitCandidate> expected;
  for (int f = 0; f < 2; ++f) {
    double lo = matrix.col(f).minCoeff();
    double hi = matrix.col(f).maxCoeff();
    double threshold = replay.next_real(lo, hi);
    std::vector<int> left(2, 0), right(2, 0);
    for (int r : rows) {
      (matrix(r, f) <= threshold ? left : right)[labels[r] - 1]++;
    }
    double nl = left[0] + left[1], nr = right[0] + right[1], n = nl + nr;
    double decrease =
        gini({6, 6}) - (nl / n) * gini(left) - (nr / n) * gini(right);
    if (decrease > 1e-12 &&
        (!expected || decrease > expected->impurity_decrease)) {
      expected = SplitCandidate{f, threshold, decrease};
    }
  }
  REQUIRE(split.has_value() == expected.has_value());
  if (split) {
    CHECK(split->feature_index == expected->feature_index);
    CHECK(split->threshold == expected->threshold);
    CHECK(split->impurity_decrease ==
          doctest::Approx(expected->impurity_decrease).epsilon(1e-12));
  }
}

TEST_CASE("single row grows to one leaf") {
  Eigen::MatrixXd matrix(1, 3);
  matrix << 1, 2, 3;
  DecisionTree tree = grow_tree(matrix, {2}, TreeParams{}, 0);
  REQUIRE(tree.nodes.size() == 1);
  CHECK(tree.nodes[0].is_leaf());
  CHECK(predict_tree(tree, matrix.row(0).transpose()) == 2);
}

TEST_CASE("consistent data reaches pure leaves and perfect training accuracy") {
  Rng rng(300);
  Eigen::MatrixXd matrix(30, 4);
  std::vector<int> labels;
  for (int i = 0; i < 30; ++i) {
    for (int j = 0; j < 4; ++j) matrix(i, j) = rng.next_real(0.0, 1.0);
    labels.push_back(matrix(i, 0) > 0.5 ? 1 : (matrix(i, 1) > 0.5 ? 2 : 3));
  }
  DecisionTree tree = grow_tree(matrix, labels, TreeParams{}, 1);
  for (int i = 0; i < 30; ++i) {
    // Route manually through the recorded split records and check the
    // reached leaf is pure with the row's own label.
    const TreeNode* node = &tree.nodes[0];
    while (!node->is_leaf()) {
      node = &tree.nodes[matrix(i, node->feature_index) <= node->threshold
                             ? node->left
                             : node->right];
    }
    int nonzero = 0;
    for (int c : node->counts) nonzero += c > 0;
    CHECK(nonzero == 1);
    CHECK(node->counts[labels[i] - 1] > 0);
    CHECK(predict_tree(tree, matrix.row(i).transpose()) == labels[i]);
  }
}

TEST_CASE("identical inputs and seed grow bit-identical trees") {
  Rng rng(55);
  Eigen::MatrixXd matrix(25, 3);
  std::vector<int> labels;
  for (int i = 0; i < 25; ++i) {
    for (int j = 0; j < 3; ++j) matrix(i, j) = rng.next_real(-1.0, 1.0);
    labels.push_back(rng.next_int(1, 2));
  }
  TreeParams params;
  params.split_strategy = SplitStrategy::Random;
  DecisionTree a = grow_tree(matrix, labels, params, 9001);
  DecisionTree b = grow_tree(matrix, labels, params, 9001);
  REQUIRE(a.nodes.size() == b.nodes.size());
  for (std::size_t n = 0; n < a.nodes.size(); ++n) {
    CHECK(a.nodes[n].feature_index == b.nodes[n].feature_index);
    CHECK(a.nodes[n].threshold == b.nodes[n].threshold);
    CHECK(a.nodes[n].left == b.nodes[n].left);
    CHECK(a.nodes[n].counts == b.nodes[n].counts);
  }
}

TEST_CASE("every executed split strictly reduces weighted impurity") {
  Rng rng(77);
  Eigen::MatrixXd matrix(40, 3);
  std::vector<int> labels;
  for (int i = 0; i < 40; ++i) {
    for (int j = 0; j < 3; ++j) matrix(i, j) = rng.next_real(-1.0, 1.0);
    labels.push_back(rng.next_int(1, 3));
  }
  for (SplitStrategy strategy : {SplitStrategy::Best, SplitStrategy::Random}) {
    TreeParams params;
    params.split_strategy = strategy;
    DecisionTree tree = grow_tree(matrix, labels, params, 123);

    // Leaf histograms aggregate bottom-up to recover each node's counts.
    std::vector<std::vector<int>> counts(tree.nodes.size());
    for (std::size_t n = tree.nodes.size(); n-- > 0;) {
      const TreeNode& node = tree.nodes[n];
      if (node.is_leaf()) {
        counts[n] = node.counts;
        continue;
      }
      counts[n] = counts[node.left];
      for (std::size_t z = 0; z < counts[n].size(); ++z) {
        counts[n][z] += counts[node.right][z];
      }
      double nl = std::accumulate(counts[node.left].begin(),
                                  counts[node.left].end(), 0);
      double nr = std::accumulate(counts[node.right].begin(),
                                  counts[node.right].end(), 0);
      CHECK(nl > 0);  // both children nonempty
      CHECK(nr > 0);
      double weighted = (nl / (nl + nr)) * gini(counts[node.left]) +
                        (nr / (nl + nr)) * gini(counts[node.right]);
      CHECK(weighted < gini(counts[n]));
    }
  }
}

TEST_CASE("stopping criteria") {
  Eigen::MatrixXd matrix(8, 1);
  matrix << 0, 1, 2, 3, 4, 5, 6, 7;
  std::vector<int> labels{1, 2, 1, 2, 1, 2, 1, 2};

  TreeParams depth1;
  depth1.max_depth = 1;
  DecisionTree shallow = grow_tree(matrix, labels, depth1, 0);
  for (const TreeNode& node : shallow.nodes) {
    if (!node.is_leaf()) {
      CHECK(shallow.nodes[node.left].is_leaf());
      CHECK(shallow.nodes[node.right].is_leaf());
    }
  }

  TreeParams min_split;
  min_split.min_samples_split = 100;
  DecisionTree stump = grow_tree(matrix, labels, min_split, 0);
  CHECK(stump.nodes.size() == 1);

  CHECK_THROWS_AS(grow_tree(Eigen::MatrixXd(), {}, TreeParams{}, 0),
                  std::invalid_argument);
}

TEST_CASE("predict_tree basics") {
  DecisionTree leaf_only;
  leaf_only.num_features = 2;
  leaf_only.num_classes = 2;
  TreeNode leaf;
  leaf.counts = {3, 0};
  leaf_only.nodes.push_back(leaf);
  CHECK(predict_tree(leaf_only, Eigen::Vector2d(0.1, 0.9)) == 1);

  DecisionTree depth1;
  depth1.num_features = 2;
  depth1.num_classes = 2;
  TreeNode root;
  root.feature_index = 0;
  root.threshold = 0.5;
  root.left = 1;
  root.right = 2;
  TreeNode a, b;
  a.counts = {2, 0};
  b.counts = {0, 2};
  depth1.nodes = {root, a, b};
  CHECK(predict_tree(depth1, Eigen::Vector2d(0.4, 0.0)) == 1);
  CHECK(predict_tree(depth1, Eigen::Vector2d(0.6, 0.0)) == 2);
  CHECK_THROWS_AS(predict_tree(depth1, Eigen::Vector3d(0, 0, 0)),
                  std::invalid_argument);
}

TEST_CASE("leaf ties go to the lowest class id") {
  DecisionTree tree;
  tree.num_features = 1;
  tree.num_classes = 3;
  TreeNode leaf;
  leaf.counts = {0, 2, 2};
  tree.nodes.push_back(leaf);
  Eigen::VectorXd row(1);
  row << 0.0;
  CHECK(predict_tree(tree, row) == 2);
}
