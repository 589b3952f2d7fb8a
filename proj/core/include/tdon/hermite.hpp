#pragma once

#include <Eigen/Dense>

namespace tdon {

/// Values of the first `count` orthonormal Hermite polynomials (orthonormal
/// with respect to the weight exp(-x^2)) at the given points. Row q holds
/// (H~_0(x_q), ..., H~_{count-1}(x_q)).
Eigen::MatrixXd hermite_poly_table(const Eigen::VectorXd& points, int count);

/// Values of the first `count` Hermite functions h_n(x) = H~_n(x) exp(-x^2/2),
/// which form an orthonormal system in L^2(R).
Eigen::MatrixXd hermite_function_table(const Eigen::VectorXd& points, int count);

/// Single-point convenience: (h_0(x), ..., h_{count-1}(x)).
Eigen::VectorXd hermite_function_values(double x, int count);

}  // namespace tdon
