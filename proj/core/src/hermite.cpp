#include "tdon/hermite.hpp"

#include <cmath>
#include <stdexcept>

namespace tdon {

Eigen::MatrixXd hermite_poly_table(const Eigen::VectorXd& points, int count) {
    if (count < 1) throw std::invalid_argument("hermite_poly_table: count >= 1");
    const auto q = points.size();
    Eigen::MatrixXd table(q, count);
    const double h0 = std::pow(M_PI, -0.25);
    for (Eigen::Index i = 0; i < q; ++i) {
        const double x = points(i);
        table(i, 0) = h0;
        if (count > 1) table(i, 1) = std::sqrt(2.0) * x * h0;
        // H~_{n+1} = x sqrt(2/(n+1)) H~_n - sqrt(n/(n+1)) H~_{n-1}
        for (int n = 1; n + 1 < count; ++n) {
            table(i, n + 1) = x * std::sqrt(2.0 / (n + 1)) * table(i, n) -
                              std::sqrt(static_cast<double>(n) / (n + 1)) * table(i, n - 1);
        }
    }
    return table;
}

Eigen::MatrixXd hermite_function_table(const Eigen::VectorXd& points, int count) {
    Eigen::MatrixXd table = hermite_poly_table(points, count);
    for (Eigen::Index i = 0; i < points.size(); ++i) {
        table.row(i) *= std::exp(-0.5 * points(i) * points(i));
    }
    return table;
}

Eigen::VectorXd hermite_function_values(double x, int count) {
    Eigen::VectorXd pt(1);
    pt(0) = x;
    return hermite_function_table(pt, count).row(0);
}

}  // namespace tdon
