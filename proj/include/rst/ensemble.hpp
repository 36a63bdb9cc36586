#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "rst/bspline.hpp"
#include "rst/dataset.hpp"
#include "rst/rng.hpp"
#include "rst/tree.hpp"

namespace rst {

struct RstConfig {
  int n_estimators = 100;
  int o_min = 3;
  int o_max = 9;
  int k_min = 11;
  int k_max = 50;
  SplitStrategy split_strategy = SplitStrategy::Best;
  bool bootstrap = false;
  TreeParams tree_params;
  std::uint64_t master_seed = 0;
};

/// Validates 1 <= o_min <= o_max <= k_min <= k_max, which guarantees
/// every drawn pair satisfies o_t <= K_t.
void validate_config(const RstConfig& config);

/// One tree's basis parameters. num_basis is the effective count after
/// clamping the drawn K to the series length.
struct ThetaDraw {
  int order = 0;
  int num_basis = 0;
  bool clamped = false;
};

struct EnsembleMember {
  std::optional<ThetaDraw> theta;      // absent for the raw-value baseline
  std::optional<BSplineBasis> basis;
  std::uint64_t tree_seed = 0;
  DecisionTree tree;
};

struct RstEnsemble {
  std::vector<EnsembleMember> members;
  RstConfig config;
  int num_classes = 0;
  int series_length = 0;
  bool raw_features = false;  // true for the Random Forest baseline
};

/// Draws theta for one tree: order first, then K, each uniform over its
/// inclusive range, in that fixed order from the per-tree generator.
/// The drawn K is clamped to the series length (and never below the
/// drawn order); clamping is recorded.
ThetaDraw sample_theta(Rng& rng, const RstConfig& config, int series_length);

/// Trains the RST ensemble. Per tree t = 1..T the generator stream is
/// seeded with derive_seed(master_seed, t) and consumed in a fixed order:
/// theta draw, bootstrap row indices (when enabled), then the split draws
/// of tree growth. Trees are therefore independent of scheduling order.
RstEnsemble fit_rst(const Dataset& train, const RstConfig& config);

/// Plain Random Forest over raw series values: bootstrap row resampling
/// (unless disabled), per-node feature subsample of size mtry
/// (0 = ceil(sqrt(P))), Best splits.
RstEnsemble fit_rf_baseline(const Dataset& train, int n_estimators, int mtry,
                            std::uint64_t seed, bool bootstrap = true);

/// Shared per-basis machinery for inference and diagnostics: members with
/// identical bases share one least-squares transform.
class RepresentationCache {
 public:
  explicit RepresentationCache(const RstEnsemble& ensemble);

  /// Coefficient vector of a series under each distinct basis. For a
  /// raw-feature ensemble this is the series itself in group 0.
  std::vector<Eigen::VectorXd> transform(const Eigen::VectorXd& series) const;

  std::size_t num_groups() const { return solvers_.size(); }
  std::size_t group_of(std::size_t member_index) const {
    return member_group_[member_index];
  }
  const BSplineBasis& group_basis(std::size_t group) const {
    return bases_[group];
  }

 private:
  bool raw_ = false;
  std::vector<BSplineBasis> bases_;
  std::vector<std::shared_ptr<LeastSquaresSolver>> solvers_;
  std::vector<std::size_t> member_group_;
};

/// Majority-vote prediction for one series; ties go to the lowest class
/// id. use_members limits the vote to the first members (0 = all), which
/// backs the ensemble-size sweep.
int predict(const RstEnsemble& ensemble, const Eigen::VectorXd& series,
            std::size_t use_members = 0);

struct BatchResult {
  std::vector<int> labels;
  double accuracy = 0.0;
};

/// Predicts every series of a dataset; per-series coefficient fits are
/// computed once per distinct basis and reused across members.
BatchResult predict_batch(const RstEnsemble& ensemble, const Dataset& test,
                          std::size_t use_members = 0);

}  // namespace rst
