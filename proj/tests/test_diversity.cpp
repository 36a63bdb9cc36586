#include <doctest.h>

#include <cmath>

#include "rst/diversity.hpp"
#include "rst/rng.hpp"

using namespace rst;

namespace {

RepresentationSet constant_curves(const std::vector<double>& levels,
                                  int grid_size = 101) {
  RepresentationSet reps;
  reps.grid = uniform_grid(grid_size);
  reps.values.resize(static_cast<Eigen::Index>(levels.size()), grid_size);
  for (std::size_t s = 0; s < levels.size(); ++s) {
    reps.values.row(static_cast<Eigen::Index>(s)).setConstant(levels[s]);
  }
  return reps;
}

}  // namespace

TEST_CASE("l2_distance: identity, constants, symmetry") {
  Eigen::VectorXd grid = uniform_grid(101);
  Eigen::VectorXd ones = Eigen::VectorXd::Ones(101);
  Eigen::VectorXd zeros = Eigen::VectorXd::Zero(101);
  CHECK(l2_distance(ones, ones, grid) == 0.0);
  CHECK(l2_distance(ones, zeros, grid) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(l2_distance(ones, zeros, grid) == l2_distance(zeros, ones, grid));
  CHECK_THROWS_AS(l2_distance(ones, Eigen::VectorXd::Zero(100), grid),
                  std::invalid_argument);
}

TEST_CASE("l2_distance of t vs 0 approximates sqrt(1/3)") {
  Eigen::VectorXd grid = uniform_grid(1000);
  Eigen::VectorXd ramp = grid;
  Eigen::VectorXd zeros = Eigen::VectorXd::Zero(1000);
  // Closed-form oracle: integral of t^2 over [0,1] is 1/3.
  CHECK(l2_distance(ramp, zeros, grid) ==
        doctest::Approx(std::sqrt(1.0 / 3.0)).epsilon(1e-4));
}

TEST_CASE("pairwise diversity of constant ensembles") {
  CHECK(pairwise_diversity(constant_curves({2.0, 2.0, 2.0})) == 0.0);
  CHECK(pairwise_diversity(constant_curves({0.0, 1.0})) ==
        doctest::Approx(1.0).epsilon(1e-12));
  // Pairs (0,1), (0,2), (1,2) have distances 1, 2, 1.
  CHECK(pairwise_diversity(constant_curves({0.0, 1.0, 2.0})) ==
        doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  CHECK_THROWS_AS(pairwise_diversity(constant_curves({1.0})),
                  std::invalid_argument);
}

TEST_CASE("quadratic diversity and the Q = d^2 identity") {
  CHECK(quadratic_diversity(constant_curves({0.0, 1.0, 2.0})) ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK(quadratic_diversity(constant_curves({3.0, 3.0})) == 0.0);

  Rng rng(61);
  RepresentationSet reps;
  reps.grid = uniform_grid(200);
  reps.values.resize(2, 200);
  for (int g = 0; g < 200; ++g) {
    reps.values(0, g) = rng.next_real(-1.0, 1.0);
    reps.values(1, g) = rng.next_real(-1.0, 1.0);
  }
  double d = l2_distance(reps.values.row(0).transpose(),
                         reps.values.row(1).transpose(), reps.grid);
  CHECK(quadratic_diversity(reps) == doctest::Approx(d * d).epsilon(1e-9));
}

TEST_CASE("functional variance of constant ensembles") {
  CHECK(functional_variance(constant_curves({5.0})) == 0.0);
  CHECK(functional_variance(constant_curves({0.0, 2.0})) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("V_F equals Q_D (T-1)/(2T) on random constant ensembles") {
  Rng rng(67);
  for (int trial = 0; trial < 20; ++trial) {
    int t = rng.next_int(2, 8);
    std::vector<double> levels;
    for (int s = 0; s < t; ++s) levels.push_back(rng.next_real(-3.0, 3.0));
    RepresentationSet reps = constant_curves(levels);
    double vf = functional_variance(reps);
    double qd = quadratic_diversity(reps);
    CHECK(vf == doctest::Approx(qd * (t - 1) / (2.0 * t)).epsilon(1e-9));
  }
}

TEST_CASE("fixed-basis ensembles have zero diversity") {
  auto [train, test] = synth_dataset(6, 32, 0.2, 71);
  (void)test;
  RstConfig config;
  config.n_estimators = 8;
  config.o_min = config.o_max = 3;
  config.k_min = config.k_max = 5;
  config.master_seed = 4;
  RstEnsemble ensemble = fit_rst(train, config);
  DiversityReport report = ensemble_diversity_report(ensemble, train, 200);
  for (double d : report.per_obs_pairwise) CHECK(d == 0.0);
  for (double v : report.per_obs_variance) CHECK(v == 0.0);
  CHECK(report.mean_pairwise == 0.0);
}

TEST_CASE("randomized ranges yield strictly positive mean diversity") {
  auto [train, test] = synth_dataset(6, 64, 0.2, 73);
  (void)test;
  RstConfig wide;
  wide.n_estimators = 10;
  wide.master_seed = 12;
  RstEnsemble ensemble = fit_rst(train, wide);
  DiversityReport report = ensemble_diversity_report(ensemble, train, 300);
  CHECK(report.mean_pairwise > 0.0);
  CHECK(report.mean_quadratic > 0.0);
  CHECK(report.mean_variance > 0.0);

  // Diversity ordering: wide ranges beat the degenerate fixed config.
  RstConfig fixed = wide;
  fixed.o_min = fixed.o_max = 3;
  fixed.k_min = fixed.k_max = 11;
  DiversityReport fixed_report =
      ensemble_diversity_report(fit_rst(train, fixed), train, 300);
  CHECK(report.mean_pairwise > fixed_report.mean_pairwise);
}

TEST_CASE("report means equal the arithmetic mean of per-observation rows") {
  auto [train, test] = synth_dataset(5, 48, 0.3, 79);
  (void)test;
  RstConfig config;
  config.n_estimators = 6;
  config.master_seed = 2;
  DiversityReport report =
      ensemble_diversity_report(fit_rst(train, config), train, 250);
  double sum = 0.0;
  for (double d : report.per_obs_pairwise) sum += d;
  CHECK(report.mean_pairwise ==
        doctest::Approx(sum / report.per_obs_pairwise.size()).epsilon(1e-12));
  CHECK(report.per_obs_pairwise.size() ==
        static_cast<std::size_t>(train.num_observations()));
}

TEST_CASE("grid refinement shrinks the integration change") {
  auto [train, test] = synth_dataset(4, 48, 0.2, 83);
  (void)test;
  RstConfig config;
  config.n_estimators = 6;
  config.master_seed = 3;
  RstEnsemble ensemble = fit_rst(train, config);
  double coarse = ensemble_diversity_report(ensemble, train, 100).mean_quadratic;
  double mid = ensemble_diversity_report(ensemble, train, 200).mean_quadratic;
  double fine = ensemble_diversity_report(ensemble, train, 400).mean_quadratic;
  CHECK(std::abs(fine - mid) <= std::abs(mid - coarse) + 1e-12);
}

TEST_CASE("diversity is undefined for the raw-value baseline") {
  auto [train, test] = synth_dataset(6, 32, 0.2, 89);
  (void)test;
  RstEnsemble forest = fit_rf_baseline(train, 3, 0, 1);
  CHECK_THROWS_AS(ensemble_diversity_report(forest, train, 100),
                  std::invalid_argument);
}
