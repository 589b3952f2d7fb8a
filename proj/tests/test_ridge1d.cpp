#include <doctest.h>

#include <cmath>
#include <thread>

#include "tdon/ridge1d.hpp"

using namespace tdon;

namespace {

// dense-grid sup-error oracle, independent of the fit's internal validation
double dense_sup_error(const std::function<double(double)>& target, const Ridge1DExpansion& exp,
                       double lo, double hi, int points = 20001) {
    double sup = 0.0;
    for (int i = 0; i < points; ++i) {
        const double t = lo + (hi - lo) * i / (points - 1.0);
        sup = std::max(sup, std::abs(target(t) - eval_expansion(exp, t)));
    }
    return sup;
}

}  // namespace

TEST_CASE("eval_expansion basics") {
    Ridge1DExpansion exp;
    exp.activation = Activation::Tanh;
    exp.interval_lo = -1;
    exp.interval_hi = 1;
    SUBCASE("empty expansion evaluates to zero") { CHECK(eval_expansion(exp, 0.3) == 0.0); }
    SUBCASE("single tanh term at the origin") {
        exp.terms = {{1.0, 1.0, 0.0}};
        CHECK(eval_expansion(exp, 0.0) == 0.0);
    }
    SUBCASE("relu hand evaluation") {
        exp.activation = Activation::Relu;
        exp.terms = {{2.0, 1.0, 0.0}, {-1.0, 2.0, 1.0}};
        // 2*relu(1) - 1*relu(2-1) = 2 - 1
        CHECK(eval_expansion(exp, 1.0) == 1.0);
    }
    SUBCASE("pruning removes exact zeros") {
        exp.terms = {{0.0, 1.0, 0.0}, {2.0, 1.0, 0.5}};
        CHECK(prune_zero_terms(exp).terms.size() == 1);
    }
}

TEST_CASE("fitting a dictionary atom with budget 1 is exact") {
    const auto target = [](double t) { return std::tanh(2.0 * t - 1.0); };
    const RidgeFitResult r =
        fit_ridge_1d(target, -1.0, 1.0, Activation::Tanh, 1, 1e-12, {{2.0, 1.0}});
    CHECK(r.achieved_sup_error <= 1e-12);
    CHECK(r.tolerance_met);
    CHECK(r.expansion.terms.size() == 1);
}

TEST_CASE("zero target fits with zero error") {
    const RidgeFitResult r =
        fit_ridge_1d([](double) { return 0.0; }, -1.0, 1.0, Activation::Tanh, 8, 1e-12);
    CHECK(r.achieved_sup_error <= 1e-13);
}

TEST_CASE("dictionary closure: in-span targets are recovered") {
    // target built from atoms that are handed to the fit
    const RidgeAtoms atoms = {{2.0, 0.3}, {-1.5, 0.4}, {5.0, -1.0}};
    const auto target = [&](double t) {
        return 0.7 * std::tanh(2.0 * t - 0.3) - 1.2 * std::tanh(-1.5 * t - 0.4) +
               0.05 * std::tanh(5.0 * t + 1.0);
    };
    const RidgeFitResult r = fit_ridge_1d(target, -1.0, 1.0, Activation::Tanh, 32, 1e-10, atoms);
    CHECK(r.achieved_sup_error <= 1e-10);
}

TEST_CASE("exp fit on [-1,1] with budget 32 meets 1e-3") {
    const RidgeFitResult r =
        fit_ridge_1d([](double t) { return std::exp(t); }, -1.0, 1.0, Activation::Tanh, 32, 1e-3);
    CHECK(r.achieved_sup_error <= 1e-3);
    CHECK(static_cast<int>(r.expansion.terms.size()) <= 32);
    // the reported error is honest against an independent denser grid
    const double dense =
        dense_sup_error([](double t) { return std::exp(t); }, r.expansion, -1.0, 1.0);
    CHECK(r.achieved_sup_error == doctest::Approx(dense).epsilon(1e-3));
    CHECK(dense <= 1.1e-3);
}

TEST_CASE("nan targets are rejected") {
    CHECK_THROWS_AS(fit_ridge_1d([](double t) { return t > 0 ? std::nan("") : 0.0; }, -1.0, 1.0,
                                 Activation::Tanh, 4, 1e-3),
                    std::invalid_argument);
}

TEST_CASE("degenerate interval is rejected") {
    CHECK_THROWS_AS(approx_exp(0.0, 0.0, Activation::Tanh, 1e-2), std::invalid_argument);
}

TEST_CASE("approx_exp meets tolerances on both intervals") {
    SUBCASE("[-1,1] at 1e-2") {
        const RidgeFitResult r = approx_exp(-1.0, 1.0, Activation::Tanh, 1e-2);
        CHECK(r.tolerance_met);
        CHECK(dense_sup_error([](double t) { return std::exp(t); }, r.expansion, -1, 1) <= 1e-2);
    }
    SUBCASE("[-3,3] needs more terms than [-1,1] at 1e-3") {
        const RidgeFitResult narrow = approx_exp(-1.0, 1.0, Activation::Tanh, 1e-3);
        const RidgeFitResult wide = approx_exp(-3.0, 3.0, Activation::Tanh, 1e-3);
        CHECK(narrow.tolerance_met);
        CHECK(wide.tolerance_met);
        CHECK(wide.expansion.terms.size() >= narrow.expansion.terms.size());
    }
}

TEST_CASE("tolerance refinement never worsens the achieved error") {
    double previous = 1e300;
    for (double tol : {1e-1, 1e-2, 1e-3}) {
        const RidgeFitResult r = approx_exp(-1.5, 1.5, Activation::Tanh, tol);
        CHECK(r.achieved_sup_error <= previous);
        previous = r.achieved_sup_error;
    }
}

TEST_CASE("approx_exp cache is consistent under concurrent use") {
    std::vector<std::thread> threads;
    std::vector<double> errors(8, -1.0);
    for (int t = 0; t < 8; ++t) {
        threads.emplace_back([&errors, t] {
            errors[static_cast<std::size_t>(t)] =
                approx_exp(-2.0, 2.0, Activation::Tanh, 1e-4).achieved_sup_error;
        });
    }
    for (auto& th : threads) th.join();
    for (int t = 1; t < 8; ++t) CHECK(errors[static_cast<std::size_t>(t)] == errors[0]);
    CHECK(errors[0] <= 1e-4);
}

TEST_CASE("unreachable tolerance returns a flagged best effort") {
    const RidgeFitResult r = fit_ridge_1d([](double t) { return std::exp(3.0 * t); }, -2.0, 2.0,
                                          Activation::Tanh, 2, 1e-12);
    CHECK_FALSE(r.tolerance_met);
    CHECK(r.achieved_sup_error > 1e-12);
    CHECK(!r.expansion.terms.empty());
}
