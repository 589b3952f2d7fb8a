#include <doctest.h>

#include <cmath>

#include "tdon/rng.hpp"
#include "tdon/spaces.hpp"

using namespace tdon;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> xs) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) v(i++) = x;
    return v;
}

}  // namespace

TEST_CASE("matrix pairing is the trace pairing") {
    // trace(I . A) for A = diag(3, 4)
    const MeasurementSpace space = make_matrix_space(2, 2);
    const DualFunctional identity = make_functional(space, vec({1, 0, 0, 1}));
    const SpaceElement a = make_element(space, vec({3, 0, 0, 4}));
    CHECK(pair(space, identity, a) == 7.0);
}

TEST_CASE("l2 pairing integrates the constant exactly") {
    const MeasurementSpace space = make_l2_interval_space(16);
    const DualFunctional ones = make_functional(space, Eigen::VectorXd::Ones(16));
    const SpaceElement u = make_element(space, Eigen::VectorXd::Ones(16));
    CHECK(pair(space, ones, u) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("sequence pairing is the finite weighted sum") {
    const MeasurementSpace space = make_sequence_lp_space(4);
    const DualFunctional f = make_functional(space, vec({1.0, 0.5, 0.25, 0.125}));
    const SpaceElement u = make_element(space, vec({1, 1, 1, 1}));
    // independent summation oracle
    double expected = 0.0;
    for (double w : {1.0, 0.5, 0.25, 0.125}) expected += w;
    CHECK(pair(space, f, u) == doctest::Approx(expected).epsilon(1e-15));
    CHECK(pair(space, f, u) == doctest::Approx(1.875).epsilon(1e-15));
}

TEST_CASE("pairing rejects space mismatches") {
    const MeasurementSpace matrix22 = make_matrix_space(2, 2);
    const MeasurementSpace seq = make_sequence_lp_space(4);
    const DualFunctional f = make_functional(seq, Eigen::VectorXd::Ones(4));
    const SpaceElement u = make_element(matrix22, Eigen::VectorXd::Ones(4));
    CHECK_THROWS_AS(pair(matrix22, f, u), std::invalid_argument);
}

TEST_CASE("pairing is linear in both arguments") {
    Rng rng(31);
    for (SpaceKind kind : {SpaceKind::Matrix, SpaceKind::SequenceLp, SpaceKind::SequenceC0,
                           SpaceKind::L2Interval, SpaceKind::SchwartzHermite}) {
        MeasurementSpace space;
        switch (kind) {
            case SpaceKind::Matrix: space = make_matrix_space(3, 2); break;
            case SpaceKind::SequenceLp: space = make_sequence_lp_space(6); break;
            case SpaceKind::SequenceC0: space = make_sequence_c0_space(6); break;
            case SpaceKind::L2Interval: space = make_l2_interval_space(12); break;
            case SpaceKind::SchwartzHermite: space = make_schwartz_hermite_space(6); break;
        }
        const int dim = space.dim();
        for (int trial = 0; trial < 100; ++trial) {
            Eigen::VectorXd fw(dim), uc(dim), vc(dim);
            for (int i = 0; i < dim; ++i) {
                fw(i) = rng.uniform(-1, 1);
                uc(i) = rng.uniform(-1, 1);
                vc(i) = rng.uniform(-1, 1);
            }
            const double alpha = rng.uniform(-2, 2), beta = rng.uniform(-2, 2);
            const DualFunctional f = make_functional(space, fw);
            const SpaceElement u = make_element(space, uc);
            const SpaceElement v = make_element(space, vc);
            const SpaceElement lin = make_element(space, alpha * uc + beta * vc);
            const double lhs = pair(space, f, lin);
            const double rhs = alpha * pair(space, f, u) + beta * pair(space, f, v);
            const double scale = std::max(1.0, std::abs(lhs));
            CHECK(std::abs(lhs - rhs) <=
                  1e-12 * (1.0 + std::abs(alpha) + std::abs(beta)) * scale);
        }
    }
}

TEST_CASE("l2 pairing is exact on polynomials up to gauss degree") {
    // doubling the node count changes the pairing of low-degree polynomials
    // only at roundoff level
    for (int q : {8, 16}) {
        const MeasurementSpace coarse = make_l2_interval_space(q);
        const MeasurementSpace fine = make_l2_interval_space(2 * q);
        const auto poly_at = [](const Eigen::VectorXd& nodes, int degree) {
            Eigen::VectorXd v(nodes.size());
            for (Eigen::Index i = 0; i < nodes.size(); ++i) v(i) = std::pow(nodes(i), degree);
            return v;
        };
        // g of degree q-1, u of degree q => product degree 2q-1, exact for both rules
        const double a = pair(coarse, make_functional(coarse, poly_at(coarse.quadrature.nodes, q - 1)),
                              make_element(coarse, poly_at(coarse.quadrature.nodes, q)));
        const double b = pair(fine, make_functional(fine, poly_at(fine.quadrature.nodes, q - 1)),
                              make_element(fine, poly_at(fine.quadrature.nodes, q)));
        CHECK(std::abs(a - b) <= 1e-13);
    }
}

TEST_CASE("hermite pairing of basis against dual unit vectors is kronecker") {
    const MeasurementSpace space = make_schwartz_hermite_space(7);
    for (int i = 0; i < 7; ++i) {
        for (int j = 0; j < 7; ++j) {
            const SpaceElement hi = make_element(space, Eigen::VectorXd::Unit(7, i));
            const DualFunctional ej = make_functional(space, Eigen::VectorXd::Unit(7, j));
            CHECK(pair(space, ej, hi) == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-10));
        }
    }
}

TEST_CASE("element_of is the affine basis combination") {
    const MeasurementSpace space = make_sequence_lp_space(3);
    const CompactFamily family =
        make_family(space, {make_element(space, vec({1, 0, 0})), make_element(space, vec({0, 2, 0}))},
                    vec({-1, -1}), vec({1, 1}));

    CHECK(element_of(family, vec({0, 0})).coeffs.isZero(0.0));
    CHECK_THROWS_AS(element_of(family, vec({2, 0})), std::out_of_range);

    // affine: element(c1) + element(c2) == element(c1+c2) coefficientwise
    Rng rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const Eigen::VectorXd c1 = vec({rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)});
        const Eigen::VectorXd c2 = vec({rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)});
        const Eigen::VectorXd lhs =
            element_of(family, c1).coeffs + element_of(family, c2).coeffs;
        const Eigen::VectorXd rhs = element_of(family, c1 + c2).coeffs;
        CHECK((lhs - rhs).lpNorm<Eigen::Infinity>() == 0.0);
    }
}

TEST_CASE("single-basis scaling doubles the coefficients") {
    const MeasurementSpace space = make_sequence_lp_space(2);
    const CompactFamily family =
        make_family(space, {make_element(space, vec({1, 3}))}, vec({0}), vec({4}));
    const SpaceElement e = element_of(family, vec({2}));
    CHECK(e.coeffs(0) == 2.0);
    CHECK(e.coeffs(1) == 6.0);
}

TEST_CASE("analytic family reproduces closed forms on the grid") {
    const MeasurementSpace space = make_l2_interval_space(32);
    const double tau = 2.0 * M_PI;
    const AnalyticFamily family(space,
                                {AnalyticFunction::sine(tau), AnalyticFunction::cosine(tau)},
                                vec({-1, -1}), vec({1, 1}));
    const SpaceElement u = element_of(family.family(), vec({1, 1}));
    for (int q = 0; q < 32; ++q) {
        const double x = space.quadrature.nodes(q);
        CHECK(u.coeffs(q) ==
              doctest::Approx(std::sin(tau * x) + std::cos(tau * x)).epsilon(1e-14));
    }
    // coefficient recovery is exact for span members
    const Eigen::VectorXd c = family.coefficients_of(u);
    CHECK(c(0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c(1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(family.value_at(u, 0.3) ==
          doctest::Approx(std::sin(tau * 0.3) + std::cos(tau * 0.3)).epsilon(1e-12));
}

TEST_CASE("grid sampling hits corners, random sampling is deterministic") {
    const MeasurementSpace space = make_sequence_lp_space(2);
    const CompactFamily family =
        make_family(space, {make_element(space, vec({1, 0})), make_element(space, vec({0, 1}))},
                    vec({0, 0}), vec({1, 1}));

    const auto grid3 = sample_family(family, SampleScheme::grid(3));
    REQUIRE(grid3.size() == 9);
    CHECK(grid3[0].c == vec({0, 0}));
    CHECK(grid3[4].c == vec({0.5, 0.5}));
    CHECK(grid3[8].c == vec({1, 1}));

    const auto corners = sample_family(family, SampleScheme::grid(2));
    REQUIRE(corners.size() == 4);

    const auto r1 = sample_family(family, SampleScheme::uniform_random(5, 7));
    const auto r2 = sample_family(family, SampleScheme::uniform_random(5, 7));
    REQUIRE(r1.size() == 5);
    for (std::size_t i = 0; i < r1.size(); ++i) {
        CHECK((r1[i].c - r2[i].c).lpNorm<Eigen::Infinity>() == 0.0);
    }
}

TEST_CASE("element distance: frobenius of identity and the triangle inequality") {
    const MeasurementSpace space = make_matrix_space(2, 2);
    const SpaceElement eye = make_element(space, vec({1, 0, 0, 1}));
    const SpaceElement zero = zero_element(space);
    CHECK(element_distance(space, eye, eye) == 0.0);
    CHECK(element_distance(space, eye, zero) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));

    Rng rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        Eigen::VectorXd a(4), b(4), c(4);
        for (int i = 0; i < 4; ++i) {
            a(i) = rng.uniform(-1, 1);
            b(i) = rng.uniform(-1, 1);
            c(i) = rng.uniform(-1, 1);
        }
        const SpaceElement ua = make_element(space, a), ub = make_element(space, b),
                           uc = make_element(space, c);
        for (DistanceMetric metric : {DistanceMetric::Euclidean, DistanceMetric::Sup}) {
            const double ab = element_distance(space, ua, ub, metric);
            const double bc = element_distance(space, ub, uc, metric);
            const double ac = element_distance(space, ua, uc, metric);
            CHECK(ac <= ab + bc + 1e-15);
        }
    }
}

TEST_CASE("c0 spaces default to the sup metric") {
    const MeasurementSpace c0 = make_sequence_c0_space(3);
    const SpaceElement u = make_element(c0, vec({3, 0, 0}));
    const SpaceElement v = make_element(c0, vec({0, 4, 0}));
    CHECK(element_distance(c0, u, v) == 4.0);  // sup, not sqrt(25)
}
