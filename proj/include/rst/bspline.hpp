#pragma once

#include <Eigen/Dense>
#include <vector>

namespace rst {

/// Clamped B-spline basis of order `order` (degree order-1) with
/// `num_basis` basis functions on [0, 1]. The knot vector has
/// num_basis + order entries: `order` zeros, num_basis - order uniformly
/// spaced interior knots, `order` ones.
struct BSplineBasis {
  int order = 0;
  int num_basis = 0;
  std::vector<double> knots;

  bool operator==(const BSplineBasis& other) const {
    return order == other.order && num_basis == other.num_basis &&
           knots == other.knots;
  }
};

/// Builds the clamped uniform basis. Requires order >= 1 and
/// num_basis >= order.
BSplineBasis make_basis(int order, int num_basis);

/// Evaluates all num_basis basis functions at t in [0, 1] via the
/// Cox-de Boor recursion. 0/0 terms are taken as 0. At t = 1 the last
/// basis function evaluates to 1 (the indicator intervals are half-open;
/// the right endpoint is closed explicitly).
Eigen::VectorXd eval_basis(const BSplineBasis& basis, double t);

/// Basis functions tabulated on a sample grid: values(p, j) = B_j(t_p).
struct DesignMatrix {
  Eigen::MatrixXd values;        // P x K
  Eigen::VectorXd sample_points; // P, uniform on [0, 1]
  BSplineBasis basis;
};

/// Tabulates the basis on the uniform grid t_p = (p-1)/(P-1), p = 1..P.
/// Requires num_samples >= 2.
DesignMatrix design_matrix(const BSplineBasis& basis, int num_samples);

/// Reusable least-squares solver for one design matrix. Uses a complete
/// orthogonal decomposition, which yields the minimum-norm solution when
/// the design matrix is rank deficient.
class LeastSquaresSolver {
 public:
  explicit LeastSquaresSolver(const Eigen::MatrixXd& design)
      : rows_(design.rows()), cod_(design) {}

  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
  Eigen::Index rows() const { return rows_; }

 private:
  Eigen::Index rows_;
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod_;
};

/// Minimum-norm least-squares coefficients of one series against a
/// tabulated basis. series.size() must equal dm.values.rows().
Eigen::VectorXd fit_coefficients(const Eigen::VectorXd& series,
                                 const DesignMatrix& dm);

/// Per-observation coefficient rows under a shared basis.
struct CoefficientMatrix {
  Eigen::MatrixXd coeffs;  // N x K
  BSplineBasis basis;
};

/// Fits every row of series_set (N x P) against the (order, num_basis)
/// basis; the design matrix is factored once and reused. num_basis is
/// clamped to P (an underdetermined fit on short series is never built);
/// the returned basis reflects the effective count.
CoefficientMatrix coefficients_matrix(const Eigen::MatrixXd& series_set,
                                      int order, int num_basis);

/// Spline value sum_j coeffs[j] * B_j(t) at t in [0, 1].
double reconstruct(const Eigen::VectorXd& coeffs, const BSplineBasis& basis,
                   double t);

}  // namespace rst
