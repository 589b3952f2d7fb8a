#pragma once

#include <Eigen/Dense>

namespace tdon {

/// Rank-revealing least squares, min_x ||A x - b||_2, via column-pivoted
/// Householder QR. Deterministic; near-dependent columns are handled by the
/// pivoting threshold rather than by explicit damping, so exactly
/// representable targets are reproduced to machine precision.
Eigen::VectorXd solve_least_squares(const Eigen::MatrixXd& A, const Eigen::VectorXd& b);

/// Multi-right-hand-side variant sharing one factorization.
Eigen::MatrixXd solve_least_squares(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B);

/// Damped normal equations (A^T A + lambda I) x = A^T b with lambda =
/// damping_rel * mean(diag(A^T A)), followed by `refinements` passes of
/// iterative refinement on the residual. The damping keeps coefficients along
/// ill-conditioned directions small (important when downstream budgets scale
/// with sum |x_i|), while refinement restores near machine-precision accuracy
/// along well-conditioned directions.
Eigen::MatrixXd solve_damped_refined(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                     double damping_rel = 1e-8, int refinements = 2);

}  // namespace tdon
