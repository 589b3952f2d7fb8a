#pragma once

#include <Eigen/Dense>

namespace tdon {

/// Nodes are strictly increasing, weights strictly positive.
struct QuadratureRule {
    Eigen::VectorXd nodes;
    Eigen::VectorXd weights;
};

/// n-point Gauss-Legendre rule on [a, b]; exact for polynomials of degree
/// <= 2n-1. Computed by the Golub-Welsch eigenvalue method.
QuadratureRule gauss_legendre(int n, double a, double b);

/// n-point Gauss-Hermite rule for the weight exp(-x^2) on the real line
/// (physicists' convention); weights sum to sqrt(pi).
QuadratureRule gauss_hermite(int n);

}  // namespace tdon
