#include "tdon/ridge1d.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <tuple>

#include <Eigen/Dense>

#include "tdon/linalg.hpp"

namespace tdon {

double eval_expansion(const Ridge1DExpansion& exp, double t) {
    double acc = 0.0;
    for (const auto& term : exp.terms) {
        acc += term.coefficient * activate(exp.activation, term.weight * t - term.shift);
    }
    return acc;
}

Ridge1DExpansion prune_zero_terms(Ridge1DExpansion exp) {
    std::erase_if(exp.terms, [](const RidgeTerm& t) { return t.coefficient == 0.0; });
    return exp;
}

namespace {

constexpr int kValidationPoints = 10000;

RidgeAtoms default_dictionary(double lo, double hi, int budget) {
    // Allocate the budget between weight magnitudes and transition points:
    // 2 * n_w * n_t atoms with n_w ~ sqrt(budget/8).
    RidgeAtoms atoms;
    const int per_sign = budget / 2;
    if (per_sign < 1) return atoms;
    int n_w = std::clamp(static_cast<int>(std::sqrt(per_sign / 2.0)), 1, 8);
    int n_t = std::max(1, per_sign / n_w);
    while (2 * n_w * n_t > budget && n_t > 1) --n_t;
    const double span = hi - lo;
    for (int iw = 0; iw < n_w; ++iw) {
        const double mag =
            n_w == 1 ? 1.0 / span
                     : (1.0 / span) * std::pow(64.0, static_cast<double>(iw) / (n_w - 1));
        for (double sign : {1.0, -1.0}) {
            const double w = sign * mag;
            for (int it = 0; it < n_t; ++it) {
                const double transition =
                    n_t == 1 ? 0.5 * (lo + hi) : lo + span * static_cast<double>(it) / (n_t - 1);
                atoms.emplace_back(w, w * transition);  // sigma(w t - theta), kink at theta/w
            }
        }
    }
    return atoms;
}

double sup_error_on_grid(const std::function<double(double)>& target,
                         const Ridge1DExpansion& exp, double lo, double hi, int points) {
    double sup = 0.0;
    for (int i = 0; i < points; ++i) {
        const double t = lo + (hi - lo) * static_cast<double>(i) / (points - 1);
        sup = std::max(sup, std::abs(target(t) - eval_expansion(exp, t)));
    }
    return sup;
}

}  // namespace

RidgeFitResult fit_ridge_1d(const std::function<double(double)>& target, double lo, double hi,
                            Activation activation, int budget, double tol,
                            const RidgeAtoms& extra_atoms) {
    if (!(lo < hi)) throw std::invalid_argument("fit_ridge_1d: need lo < hi");
    if (budget < 1) throw std::invalid_argument("fit_ridge_1d: budget >= 1");

    RidgeAtoms atoms = extra_atoms;
    if (static_cast<int>(atoms.size()) > budget) atoms.resize(static_cast<std::size_t>(budget));
    const RidgeAtoms defaults = default_dictionary(lo, hi, budget - static_cast<int>(atoms.size()));
    atoms.insert(atoms.end(), defaults.begin(), defaults.end());
    if (atoms.empty()) atoms.emplace_back(1.0 / (hi - lo), 0.0);

    const int n_atoms = static_cast<int>(atoms.size());
    const int n_grid = 64 * budget;
    Eigen::MatrixXd design(n_grid, n_atoms);
    Eigen::VectorXd rhs(n_grid);
    for (int i = 0; i < n_grid; ++i) {
        const double t = lo + (hi - lo) * static_cast<double>(i) / (n_grid - 1);
        const double y = target(t);
        if (!std::isfinite(y)) {
            throw std::invalid_argument("fit_ridge_1d: target is not finite on the interval");
        }
        rhs(i) = y;
        for (int j = 0; j < n_atoms; ++j) {
            design(i, j) = activate(activation, atoms[j].first * t - atoms[j].second);
        }
    }
    const Eigen::VectorXd coeff = solve_least_squares(design, rhs);

    RidgeFitResult result;
    result.expansion.activation = activation;
    result.expansion.interval_lo = lo;
    result.expansion.interval_hi = hi;
    result.expansion.terms.reserve(static_cast<std::size_t>(n_atoms));
    for (int j = 0; j < n_atoms; ++j) {
        result.expansion.terms.push_back({coeff(j), atoms[j].first, atoms[j].second});
    }
    result.achieved_sup_error =
        sup_error_on_grid(target, result.expansion, lo, hi, kValidationPoints);
    result.tolerance_met = result.achieved_sup_error <= tol;
    return result;
}

namespace {

struct ExpCacheKey {
    std::uint64_t lo_bits, hi_bits, tol_bits;
    int activation;
    bool operator<(const ExpCacheKey& o) const {
        return std::tie(lo_bits, hi_bits, tol_bits, activation) <
               std::tie(o.lo_bits, o.hi_bits, o.tol_bits, o.activation);
    }
};

std::uint64_t double_bits(double x) {
    std::uint64_t b;
    std::memcpy(&b, &x, sizeof(b));
    return b;
}

std::shared_mutex exp_cache_mutex;
std::map<ExpCacheKey, RidgeFitResult> exp_cache;

}  // namespace

RidgeFitResult approx_exp(double lo, double hi, Activation activation, double tol) {
    if (!(lo < hi)) throw std::invalid_argument("approx_exp: need lo < hi");
    if (!(tol > 0.0)) throw std::invalid_argument("approx_exp: need tol > 0");

    const ExpCacheKey key{double_bits(lo), double_bits(hi), double_bits(tol),
                          static_cast<int>(activation)};
    {
        std::shared_lock lock(exp_cache_mutex);
        if (auto it = exp_cache.find(key); it != exp_cache.end()) return it->second;
    }

    const auto target = [](double t) { return std::exp(t); };
    RidgeFitResult best;
    best.achieved_sup_error = std::numeric_limits<double>::infinity();
    for (int budget = 16; budget <= 1024; budget *= 2) {
        RidgeFitResult r = fit_ridge_1d(target, lo, hi, activation, budget, tol);
        if (r.achieved_sup_error < best.achieved_sup_error) best = r;
        if (best.achieved_sup_error <= tol) break;
    }
    best.tolerance_met = best.achieved_sup_error <= tol;

    std::unique_lock lock(exp_cache_mutex);
    return exp_cache.emplace(key, std::move(best)).first->second;
}

}  // namespace tdon
