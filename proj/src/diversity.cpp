#include "rst/diversity.hpp"

#include <stdexcept>

#include "rst/bspline.hpp"

namespace rst {

namespace {

/// Trapezoid integral of a function sampled on a (uniform) grid.
double trapezoid(const Eigen::VectorXd& values, const Eigen::VectorXd& grid) {
  double sum = 0.0;
  for (Eigen::Index g = 0; g + 1 < grid.size(); ++g) {
    sum += 0.5 * (values[g] + values[g + 1]) * (grid[g + 1] - grid[g]);
  }
  return sum;
}

double squared_l2(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                  const Eigen::VectorXd& grid) {
  return trapezoid((a - b).array().square().matrix(), grid);
}

}  // namespace

Eigen::VectorXd uniform_grid(int size) {
  if (size < 2) {
    throw std::invalid_argument("uniform_grid: need at least 2 points");
  }
  Eigen::VectorXd grid(size);
  for (int g = 0; g < size; ++g) {
    grid[g] = static_cast<double>(g) / (size - 1);
  }
  return grid;
}

double l2_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                   const Eigen::VectorXd& grid) {
  if (a.size() != grid.size() || b.size() != grid.size()) {
    throw std::invalid_argument("l2_distance: curves and grid size mismatch");
  }
  return std::sqrt(squared_l2(a, b, grid));
}

double pairwise_diversity(const RepresentationSet& reps) {
  Eigen::Index t = reps.values.rows();
  if (t < 2) {
    throw std::invalid_argument("pairwise_diversity: need at least 2 curves");
  }
  double sum = 0.0;
  for (Eigen::Index s = 0; s < t; ++s) {
    for (Eigen::Index r = s + 1; r < t; ++r) {
      sum += l2_distance(reps.values.row(s).transpose(),
                         reps.values.row(r).transpose(), reps.grid);
    }
  }
  return 2.0 * sum / (static_cast<double>(t) * (t - 1));
}

double quadratic_diversity(const RepresentationSet& reps) {
  Eigen::Index t = reps.values.rows();
  if (t < 2) {
    throw std::invalid_argument("quadratic_diversity: need at least 2 curves");
  }
  double sum = 0.0;
  for (Eigen::Index s = 0; s < t; ++s) {
    for (Eigen::Index r = s + 1; r < t; ++r) {
      sum += squared_l2(reps.values.row(s).transpose(),
                        reps.values.row(r).transpose(), reps.grid);
    }
  }
  return 2.0 * sum / (static_cast<double>(t) * (t - 1));
}

double functional_variance(const RepresentationSet& reps) {
  Eigen::Index t = reps.values.rows();
  if (t < 1) {
    throw std::invalid_argument("functional_variance: need at least 1 curve");
  }
  Eigen::VectorXd mean = reps.values.colwise().mean().transpose();
  double sum = 0.0;
  for (Eigen::Index s = 0; s < t; ++s) {
    sum += squared_l2(reps.values.row(s).transpose(), mean, reps.grid);
  }
  return sum / static_cast<double>(t);
}

RepresentationSet representation_set(
    const RstEnsemble& ensemble, const RepresentationCache& cache,
    const std::vector<Eigen::MatrixXd>& grid_eval,
    const Eigen::VectorXd& series, const Eigen::VectorXd& grid) {
  std::vector<Eigen::VectorXd> coeffs = cache.transform(series);
  RepresentationSet reps;
  reps.grid = grid;
  reps.values.resize(static_cast<Eigen::Index>(ensemble.members.size()),
                     grid.size());
  for (std::size_t m = 0; m < ensemble.members.size(); ++m) {
    std::size_t g = cache.group_of(m);
    reps.values.row(static_cast<Eigen::Index>(m)) =
        (grid_eval[g] * coeffs[g]).transpose();
  }
  return reps;
}

DiversityReport ensemble_diversity_report(const RstEnsemble& ensemble,
                                          const Dataset& data, int grid_size) {
  if (ensemble.raw_features) {
    throw std::invalid_argument(
        "ensemble_diversity_report: raw-value forests have no functional "
        "representations");
  }
  if (data.num_observations() == 0) {
    throw std::invalid_argument("ensemble_diversity_report: empty dataset");
  }
  Eigen::VectorXd grid = uniform_grid(grid_size);
  RepresentationCache cache(ensemble);

  // Basis values on the grid, one G x K matrix per distinct basis.
  std::vector<Eigen::MatrixXd> grid_eval;
  grid_eval.reserve(cache.num_groups());
  for (std::size_t g = 0; g < cache.num_groups(); ++g) {
    const BSplineBasis& basis = cache.group_basis(g);
    Eigen::MatrixXd values(grid.size(), basis.num_basis);
    for (Eigen::Index p = 0; p < grid.size(); ++p) {
      values.row(p) = eval_basis(basis, grid[p]).transpose();
    }
    grid_eval.push_back(std::move(values));
  }

  DiversityReport report;
  for (int i = 0; i < data.num_observations(); ++i) {
    RepresentationSet reps = representation_set(
        ensemble, cache, grid_eval, data.series.row(i).transpose(), grid);
    report.per_obs_pairwise.push_back(pairwise_diversity(reps));
    report.per_obs_quadratic.push_back(quadratic_diversity(reps));
    report.per_obs_variance.push_back(functional_variance(reps));
  }
  auto mean = [](const std::vector<double>& v) {
    double sum = 0.0;
    for (double x : v) sum += x;
    return sum / static_cast<double>(v.size());
  };
  report.mean_pairwise = mean(report.per_obs_pairwise);
  report.mean_quadratic = mean(report.per_obs_quadratic);
  report.mean_variance = mean(report.per_obs_variance);
  return report;
}

}  // namespace rst
