#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "tdon/activation.hpp"

namespace tdon {

/// One term c * sigma(w t - theta) of a one-dimensional ridge expansion.
struct RidgeTerm {
    double coefficient = 0.0;
    double weight = 0.0;
    double shift = 0.0;  // theta
};

struct Ridge1DExpansion {
    Activation activation = Activation::Tanh;
    std::vector<RidgeTerm> terms;
    double interval_lo = 0.0;
    double interval_hi = 1.0;
};

/// sum_j c_j sigma(w_j t - theta_j); defined for all t, accuracy is only
/// claimed on the expansion's interval. An empty term list evaluates to 0.
double eval_expansion(const Ridge1DExpansion& exp, double t);

/// Drops exact-zero coefficients.
Ridge1DExpansion prune_zero_terms(Ridge1DExpansion exp);

struct RidgeFitResult {
    Ridge1DExpansion expansion;
    /// Sup error recomputed on the dense validation grid, not the fit
    /// residual.
    double achieved_sup_error = 0.0;
    bool tolerance_met = false;
};

/// Candidate (weight, shift) atoms the fit may use in addition to the default
/// dictionary; they count toward the budget and are placed first.
using RidgeAtoms = std::vector<std::pair<double, double>>;

/// Fits sum c_j sigma(w_j t - theta_j) to `target` on [lo, hi] by linear
/// least squares over a deterministic dictionary: weights log-spaced over
/// [1/(hi-lo), 64/(hi-lo)] in both signs, shifts placed so the activation
/// transition points tile the interval. Fit grid has 64 * budget equispaced
/// points; the reported error is measured on a 10^4-point validation grid.
/// An unreachable tolerance is reported through `tolerance_met`, never as an
/// exception. NaN in the target is a rejected input.
RidgeFitResult fit_ridge_1d(const std::function<double(double)>& target, double lo, double hi,
                            Activation activation, int budget, double tol,
                            const RidgeAtoms& extra_atoms = {});

/// Ridge expansion of t -> e^t on [lo, hi] with validation sup error <= tol,
/// found by escalating the fit budget (16, 32, ..., 1024) and keeping the
/// best expansion seen. Results are cached per (interval, activation, tol);
/// the cache is safe under concurrent readers and writers.
RidgeFitResult approx_exp(double lo, double hi, Activation activation, double tol);

}  // namespace tdon
