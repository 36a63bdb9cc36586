#include "rst/bspline.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace rst {

BSplineBasis make_basis(int order, int num_basis) {
  if (order < 1) {
    throw std::invalid_argument("make_basis: order must be >= 1, got " +
                                std::to_string(order));
  }
  if (num_basis < order) {
    throw std::invalid_argument(
        "make_basis: num_basis must be >= order (got K=" +
        std::to_string(num_basis) + ", o=" + std::to_string(order) + ")");
  }
  BSplineBasis basis;
  basis.order = order;
  basis.num_basis = num_basis;
  basis.knots.resize(static_cast<std::size_t>(num_basis + order));
  int interior = num_basis - order;
  for (int i = 0; i < order; ++i) basis.knots[i] = 0.0;
  for (int j = 1; j <= interior; ++j) {
    basis.knots[order + j - 1] = static_cast<double>(j) / (interior + 1);
  }
  for (int i = 0; i < order; ++i) {
    basis.knots[static_cast<std::size_t>(num_basis + i)] = 1.0;
  }
  return basis;
}

Eigen::VectorXd eval_basis(const BSplineBasis& basis, double t) {
  if (t < 0.0 || t > 1.0) {
    throw std::invalid_argument("eval_basis: t outside [0,1]: " +
                                std::to_string(t));
  }
  const auto& knots = basis.knots;
  const int order = basis.order;
  const int num_knots = static_cast<int>(knots.size());

  // Order-1 indicators over the half-open knot intervals; the final
  // nondegenerate interval is closed on the right so t = 1 is covered.
  std::vector<double> b(static_cast<std::size_t>(num_knots - 1), 0.0);
  if (t >= 1.0) {
    b[static_cast<std::size_t>(basis.num_basis - 1)] = 1.0;
  } else {
    for (int i = 0; i < num_knots - 1; ++i) {
      if (knots[i] <= t && t < knots[i + 1]) {
        b[static_cast<std::size_t>(i)] = 1.0;
        break;
      }
    }
  }

  for (int ord = 2; ord <= order; ++ord) {
    int count = num_knots - ord;  // functions of this order
    for (int i = 0; i < count; ++i) {
      double left = 0.0;
      double dl = knots[i + ord - 1] - knots[i];
      if (dl > 0.0) left = (t - knots[i]) / dl * b[static_cast<std::size_t>(i)];
      double right = 0.0;
      double dr = knots[i + ord] - knots[i + 1];
      if (dr > 0.0) {
        right = (knots[i + ord] - t) / dr * b[static_cast<std::size_t>(i + 1)];
      }
      b[static_cast<std::size_t>(i)] = left + right;
    }
  }

  Eigen::VectorXd out(basis.num_basis);
  for (int j = 0; j < basis.num_basis; ++j) out[j] = b[static_cast<std::size_t>(j)];
  return out;
}

DesignMatrix design_matrix(const BSplineBasis& basis, int num_samples) {
  if (num_samples < 2) {
    throw std::invalid_argument("design_matrix: need at least 2 samples, got " +
                                std::to_string(num_samples));
  }
  DesignMatrix dm;
  dm.basis = basis;
  dm.sample_points.resize(num_samples);
  dm.values.resize(num_samples, basis.num_basis);
  for (int p = 0; p < num_samples; ++p) {
    double t = static_cast<double>(p) / (num_samples - 1);
    dm.sample_points[p] = t;
    dm.values.row(p) = eval_basis(basis, t).transpose();
  }
  return dm;
}

Eigen::VectorXd LeastSquaresSolver::solve(const Eigen::VectorXd& rhs) const {
  if (rhs.size() != rows_) {
    throw std::invalid_argument("LeastSquaresSolver: series length " +
                                std::to_string(rhs.size()) +
                                " does not match design rows " +
                                std::to_string(rows_));
  }
  return cod_.solve(rhs);
}

Eigen::VectorXd fit_coefficients(const Eigen::VectorXd& series,
                                 const DesignMatrix& dm) {
  LeastSquaresSolver solver(dm.values);
  return solver.solve(series);
}

CoefficientMatrix coefficients_matrix(const Eigen::MatrixXd& series_set,
                                      int order, int num_basis) {
  const int num_samples = static_cast<int>(series_set.cols());
  int effective_k = std::min(num_basis, num_samples);
  BSplineBasis basis = make_basis(order, effective_k);
  DesignMatrix dm = design_matrix(basis, num_samples);
  LeastSquaresSolver solver(dm.values);

  CoefficientMatrix cm;
  cm.basis = basis;
  cm.coeffs.resize(series_set.rows(), effective_k);
  for (Eigen::Index i = 0; i < series_set.rows(); ++i) {
    cm.coeffs.row(i) = solver.solve(series_set.row(i).transpose()).transpose();
  }
  return cm;
}

double reconstruct(const Eigen::VectorXd& coeffs, const BSplineBasis& basis,
                   double t) {
  if (coeffs.size() != basis.num_basis) {
    throw std::invalid_argument("reconstruct: coefficient count mismatch");
  }
  return coeffs.dot(eval_basis(basis, t));
}

}  // namespace rst
