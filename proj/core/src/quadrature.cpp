#include "tdon/quadrature.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace tdon {

namespace {

// Golub-Welsch: nodes are eigenvalues of the symmetric tridiagonal Jacobi
// matrix of the orthogonal polynomial recurrence, weights are
// mu0 * (first eigenvector component)^2.
QuadratureRule golub_welsch(const Eigen::VectorXd& offdiag, double mu0) {
    const int n = static_cast<int>(offdiag.size()) + 1;
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k + 1 < n; ++k) {
        jacobi(k, k + 1) = offdiag(k);
        jacobi(k + 1, k) = offdiag(k);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
    if (es.info() != Eigen::Success) {
        throw std::runtime_error("quadrature: eigen decomposition failed");
    }
    QuadratureRule rule;
    rule.nodes = es.eigenvalues();  // ascending
    rule.weights.resize(n);
    for (int k = 0; k < n; ++k) {
        const double v0 = es.eigenvectors()(0, k);
        rule.weights(k) = mu0 * v0 * v0;
    }
    return rule;
}

}  // namespace

QuadratureRule gauss_legendre(int n, double a, double b) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
    if (!(a < b)) throw std::invalid_argument("gauss_legendre: need a < b");
    QuadratureRule rule;
    if (n == 1) {
        rule.nodes = Eigen::VectorXd::Constant(1, 0.0);
        rule.weights = Eigen::VectorXd::Constant(1, 2.0);
    } else {
        Eigen::VectorXd beta(n - 1);
        for (int k = 1; k < n; ++k) {
            beta(k - 1) = k / std::sqrt(4.0 * k * k - 1.0);
        }
        rule = golub_welsch(beta, 2.0);
    }
    // affine map from [-1,1] to [a,b]
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    for (int k = 0; k < n; ++k) {
        rule.nodes(k) = mid + half * rule.nodes(k);
        rule.weights(k) *= half;
    }
    return rule;
}

QuadratureRule gauss_hermite(int n) {
    if (n < 1) throw std::invalid_argument("gauss_hermite: n must be >= 1");
    const double sqrt_pi = std::sqrt(M_PI);
    if (n == 1) {
        QuadratureRule rule;
        rule.nodes = Eigen::VectorXd::Constant(1, 0.0);
        rule.weights = Eigen::VectorXd::Constant(1, sqrt_pi);
        return rule;
    }
    Eigen::VectorXd beta(n - 1);
    for (int k = 1; k < n; ++k) beta(k - 1) = std::sqrt(0.5 * k);
    return golub_welsch(beta, sqrt_pi);
}

}  // namespace tdon
