#include <doctest.h>

#include <cmath>

#include "tdon/hermite.hpp"
#include "tdon/quadrature.hpp"

using namespace tdon;

TEST_CASE("gauss-legendre 5-point matches the classical table") {
    // canonical nodes/weights on [-1, 1]
    const QuadratureRule r = gauss_legendre(5, -1.0, 1.0);
    const double nodes[] = {-0.906179845938664, -0.5384693101056831, 0.0, 0.5384693101056831,
                            0.906179845938664};
    const double weights[] = {0.23692688505618908, 0.47862867049936647, 0.5688888888888889,
                              0.47862867049936647, 0.23692688505618908};
    for (int i = 0; i < 5; ++i) {
        CHECK(r.nodes(i) == doctest::Approx(nodes[i]).epsilon(1e-14));
        CHECK(r.weights(i) == doctest::Approx(weights[i]).epsilon(1e-13));
    }
}

TEST_CASE("gauss-legendre is exact for polynomials of degree 2n-1") {
    const QuadratureRule r = gauss_legendre(4, 0.0, 1.0);
    // int_0^1 x^7 dx = 1/8, degree 7 = 2*4 - 1
    double acc = 0.0;
    for (int q = 0; q < 4; ++q) acc += r.weights(q) * std::pow(r.nodes(q), 7);
    CHECK(acc == doctest::Approx(0.125).epsilon(1e-14));
}

TEST_CASE("gauss-legendre nodes increase and weights are positive") {
    const QuadratureRule r = gauss_legendre(32, 0.0, 1.0);
    for (int i = 0; i + 1 < 32; ++i) CHECK(r.nodes(i) < r.nodes(i + 1));
    for (int i = 0; i < 32; ++i) CHECK(r.weights(i) > 0.0);
    CHECK(r.weights.sum() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("gauss-hermite 3-point matches the classical table") {
    const QuadratureRule r = gauss_hermite(3);
    CHECK(r.nodes(0) == doctest::Approx(-1.224744871391589).epsilon(1e-14));
    CHECK(r.nodes(1) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(r.nodes(2) == doctest::Approx(1.224744871391589).epsilon(1e-14));
    CHECK(r.weights(0) == doctest::Approx(0.2954089751509194).epsilon(1e-13));
    CHECK(r.weights(1) == doctest::Approx(1.1816359006036772).epsilon(1e-13));
    CHECK(r.weights.sum() == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-14));
}

TEST_CASE("hermite functions are orthonormal under the matched rule") {
    const int H = 8;
    const QuadratureRule r = gauss_hermite(H);
    const Eigen::MatrixXd table = hermite_poly_table(r.nodes, H);
    const Eigen::MatrixXd gram = table.transpose() * r.weights.asDiagonal() * table;
    for (int i = 0; i < H; ++i) {
        for (int j = 0; j < H; ++j) {
            CHECK(gram(i, j) == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("hermite function values carry the gaussian factor") {
    // h_0(x) = pi^{-1/4} exp(-x^2/2)
    const Eigen::VectorXd v = hermite_function_values(0.7, 3);
    CHECK(v(0) == doctest::Approx(std::pow(M_PI, -0.25) * std::exp(-0.245)).epsilon(1e-14));
}
