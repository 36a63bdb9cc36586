#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "rst/dataset.hpp"
#include "rst/ensemble.hpp"

namespace rst {

/// The T reconstructions of one observation, cached on a shared uniform
/// grid over [0, 1]. values(s, g) is curve s at grid point g.
struct RepresentationSet {
  Eigen::MatrixXd values;  // T x G
  Eigen::VectorXd grid;    // G uniform points on [0, 1]
};

/// Builds a uniform grid of `size` points on [0, 1] (size >= 2).
Eigen::VectorXd uniform_grid(int size);

/// Trapezoid-rule L2 distance (integral of the squared difference over
/// [0, 1], square-rooted) between two curves sampled on a shared grid.
double l2_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                   const Eigen::VectorXd& grid);

/// Mean pairwise L2 distance over all T(T-1)/2 curve pairs. Requires
/// T >= 2.
double pairwise_diversity(const RepresentationSet& reps);

/// Mean pairwise squared-L2 difference (the un-rooted analogue of the
/// pairwise diversity). Requires T >= 2.
double quadratic_diversity(const RepresentationSet& reps);

/// Mean integrated squared deviation of each curve from the pointwise
/// ensemble mean curve.
double functional_variance(const RepresentationSet& reps);

struct DiversityReport {
  std::vector<double> per_obs_pairwise;     // D per observation
  std::vector<double> per_obs_quadratic;    // Q_D per observation
  std::vector<double> per_obs_variance;     // V_F per observation
  double mean_pairwise = 0.0;
  double mean_quadratic = 0.0;
  double mean_variance = 0.0;
};

/// Per-observation representation set: each member's basis fit of that
/// observation, evaluated on the grid.
RepresentationSet representation_set(const RstEnsemble& ensemble,
                                     const RepresentationCache& cache,
                                     const std::vector<Eigen::MatrixXd>& grid_eval,
                                     const Eigen::VectorXd& series,
                                     const Eigen::VectorXd& grid);

/// Diversity diagnostics of an ensemble over a dataset: for every
/// observation, D, Q_D and V_F of its T reconstructions, plus dataset
/// means. Only defined for spline-based ensembles.
DiversityReport ensemble_diversity_report(const RstEnsemble& ensemble,
                                          const Dataset& data,
                                          int grid_size = 1000);

}  // namespace rst
