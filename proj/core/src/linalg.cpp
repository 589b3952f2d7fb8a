#include "tdon/linalg.hpp"

#include <stdexcept>

namespace tdon {

Eigen::VectorXd solve_least_squares(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
    if (A.rows() != b.size()) throw std::invalid_argument("least squares: size mismatch");
    return A.colPivHouseholderQr().solve(b);
}

Eigen::MatrixXd solve_least_squares(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
    if (A.rows() != B.rows()) throw std::invalid_argument("least squares: size mismatch");
    return A.colPivHouseholderQr().solve(B);
}

Eigen::MatrixXd solve_damped_refined(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                     double damping_rel, int refinements) {
    if (A.rows() != B.rows()) throw std::invalid_argument("damped solve: size mismatch");
    const Eigen::Index n = A.cols();
    Eigen::MatrixXd gram = A.transpose() * A;
    const double lambda = damping_rel * gram.trace() / static_cast<double>(n);
    gram.diagonal().array() += lambda;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
    if (ldlt.info() != Eigen::Success) {
        throw std::runtime_error("damped solve: factorization failed");
    }
    Eigen::MatrixXd x = ldlt.solve(A.transpose() * B);
    for (int it = 0; it < refinements; ++it) {
        x += ldlt.solve(A.transpose() * (B - A * x));
    }
    return x;
}

}  // namespace tdon
