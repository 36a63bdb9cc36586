#include "rst/ensemble.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

namespace rst {

void validate_config(const RstConfig& config) {
  if (config.n_estimators < 1) {
    throw std::invalid_argument("RstConfig: n_estimators must be >= 1");
  }
  if (config.o_min < 1 || config.o_min > config.o_max) {
    throw std::invalid_argument("RstConfig: need 1 <= o_min <= o_max");
  }
  if (config.o_max > config.k_min || config.k_min > config.k_max) {
    throw std::invalid_argument("RstConfig: need o_max <= k_min <= k_max");
  }
}

ThetaDraw sample_theta(Rng& rng, const RstConfig& config, int series_length) {
  ThetaDraw theta;
  theta.order = rng.next_int(config.o_min, config.o_max);
  int drawn_k = rng.next_int(config.k_min, config.k_max);
  theta.num_basis = std::max(theta.order, std::min(drawn_k, series_length));
  theta.clamped = theta.num_basis != drawn_k;
  return theta;
}

namespace {

std::vector<int> bootstrap_rows(Rng& rng, int n) {
  std::vector<int> rows(static_cast<std::size_t>(n));
  for (int& r : rows) r = rng.next_int(0, n - 1);
  return rows;
}

void check_train(const Dataset& train) {
  if (train.num_observations() == 0) {
    throw std::invalid_argument("fit: empty training set");
  }
}

}  // namespace

RstEnsemble fit_rst(const Dataset& train, const RstConfig& config) {
  validate_config(config);
  check_train(train);

  RstEnsemble ensemble;
  ensemble.config = config;
  ensemble.num_classes = train.num_classes();
  ensemble.series_length = train.series_length();
  ensemble.members.reserve(static_cast<std::size_t>(config.n_estimators));

  // Distinct (o, K) pairs reuse one coefficient matrix; this does not
  // touch any generator stream.
  std::map<std::pair<int, int>, CoefficientMatrix> rep_cache;

  TreeParams tree_params = config.tree_params;
  tree_params.split_strategy = config.split_strategy;
  tree_params.mtry = 0;  // RST trees consider all coefficient columns

  for (int t = 1; t <= config.n_estimators; ++t) {
    EnsembleMember member;
    member.tree_seed = derive_seed(config.master_seed, static_cast<std::uint64_t>(t));
    Rng rng(member.tree_seed);

    ThetaDraw theta = sample_theta(rng, config, train.series_length());
    auto key = std::make_pair(theta.order, theta.num_basis);
    auto it = rep_cache.find(key);
    if (it == rep_cache.end()) {
      it = rep_cache
               .emplace(key, coefficients_matrix(train.series, theta.order,
                                                 theta.num_basis))
               .first;
    }
    const CoefficientMatrix& cm = it->second;

    std::vector<int> rows;
    const std::vector<int>* row_subset = nullptr;
    if (config.bootstrap) {
      rows = bootstrap_rows(rng, train.num_observations());
      row_subset = &rows;
    }
    member.theta = theta;
    member.basis = cm.basis;
    member.tree = grow_tree(cm.coeffs, train.labels, tree_params, rng,
                            row_subset, train.num_classes());
    member.tree.seed = member.tree_seed;
    ensemble.members.push_back(std::move(member));
  }
  return ensemble;
}

RstEnsemble fit_rf_baseline(const Dataset& train, int n_estimators, int mtry,
                            std::uint64_t seed, bool bootstrap) {
  check_train(train);
  if (n_estimators < 1) {
    throw std::invalid_argument("fit_rf_baseline: n_estimators must be >= 1");
  }
  if (mtry == 0) {
    mtry = static_cast<int>(
        std::ceil(std::sqrt(static_cast<double>(train.series_length()))));
  }

  RstEnsemble ensemble;
  ensemble.raw_features = true;
  ensemble.num_classes = train.num_classes();
  ensemble.series_length = train.series_length();
  ensemble.config.n_estimators = n_estimators;
  ensemble.config.split_strategy = SplitStrategy::Best;
  ensemble.config.bootstrap = bootstrap;
  ensemble.config.master_seed = seed;
  ensemble.config.tree_params.mtry = mtry;

  TreeParams tree_params;
  tree_params.split_strategy = SplitStrategy::Best;
  tree_params.mtry = mtry;

  for (int t = 1; t <= n_estimators; ++t) {
    EnsembleMember member;
    member.tree_seed = derive_seed(seed, static_cast<std::uint64_t>(t));
    Rng rng(member.tree_seed);

    std::vector<int> rows;
    const std::vector<int>* row_subset = nullptr;
    if (bootstrap) {
      rows = bootstrap_rows(rng, train.num_observations());
      row_subset = &rows;
    }
    member.tree = grow_tree(train.series, train.labels, tree_params, rng,
                            row_subset, train.num_classes());
    member.tree.seed = member.tree_seed;
    ensemble.members.push_back(std::move(member));
  }
  return ensemble;
}

RepresentationCache::RepresentationCache(const RstEnsemble& ensemble)
    : raw_(ensemble.raw_features) {
  member_group_.resize(ensemble.members.size(), 0);
  if (raw_) return;
  std::map<std::pair<int, int>, std::size_t> groups;
  for (std::size_t m = 0; m < ensemble.members.size(); ++m) {
    const BSplineBasis& basis = *ensemble.members[m].basis;
    auto key = std::make_pair(basis.order, basis.num_basis);
    auto it = groups.find(key);
    if (it == groups.end()) {
      DesignMatrix dm = design_matrix(basis, ensemble.series_length);
      it = groups.emplace(key, bases_.size()).first;
      bases_.push_back(basis);
      solvers_.push_back(std::make_shared<LeastSquaresSolver>(dm.values));
    }
    member_group_[m] = it->second;
  }
}

std::vector<Eigen::VectorXd> RepresentationCache::transform(
    const Eigen::VectorXd& series) const {
  if (raw_) return {series};
  std::vector<Eigen::VectorXd> coeffs;
  coeffs.reserve(solvers_.size());
  for (const auto& solver : solvers_) coeffs.push_back(solver->solve(series));
  return coeffs;
}

namespace {

int vote(const RstEnsemble& ensemble, const RepresentationCache& cache,
         const Eigen::VectorXd& series, std::size_t use_members) {
  std::vector<Eigen::VectorXd> coeffs = cache.transform(series);
  std::size_t count = use_members == 0
                          ? ensemble.members.size()
                          : std::min(use_members, ensemble.members.size());
  std::vector<int> votes(static_cast<std::size_t>(ensemble.num_classes), 0);
  for (std::size_t m = 0; m < count; ++m) {
    std::size_t g = ensemble.raw_features ? 0 : cache.group_of(m);
    int label = predict_tree(ensemble.members[m].tree, coeffs[g]);
    votes[static_cast<std::size_t>(label - 1)]++;
  }
  int best = 1;
  for (std::size_t z = 1; z < votes.size(); ++z) {
    if (votes[z] > votes[static_cast<std::size_t>(best - 1)]) {
      best = static_cast<int>(z) + 1;
    }
  }
  return best;
}

}  // namespace

int predict(const RstEnsemble& ensemble, const Eigen::VectorXd& series,
            std::size_t use_members) {
  if (series.size() != ensemble.series_length) {
    throw std::invalid_argument("predict: series length " +
                                std::to_string(series.size()) +
                                " does not match ensemble length " +
                                std::to_string(ensemble.series_length));
  }
  RepresentationCache cache(ensemble);
  return vote(ensemble, cache, series, use_members);
}

BatchResult predict_batch(const RstEnsemble& ensemble, const Dataset& test,
                          std::size_t use_members) {
  if (test.num_observations() == 0) {
    throw std::invalid_argument("predict_batch: empty test set");
  }
  if (test.series_length() != ensemble.series_length) {
    throw std::invalid_argument("predict_batch: series length mismatch");
  }
  RepresentationCache cache(ensemble);
  BatchResult result;
  result.labels.reserve(static_cast<std::size_t>(test.num_observations()));
  int correct = 0;
  for (int i = 0; i < test.num_observations(); ++i) {
    int label = vote(ensemble, cache, test.series.row(i).transpose(), use_members);
    result.labels.push_back(label);
    if (label == test.labels[static_cast<std::size_t>(i)]) ++correct;
  }
  result.accuracy = static_cast<double>(correct) / test.num_observations();
  return result;
}

}  // namespace rst
