#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "tdon/analytic.hpp"
#include "tdon/deeponet.hpp"
#include "tdon/operators.hpp"
#include "tdon/ridge1d.hpp"
#include "tdon/spaces.hpp"
#include "tdon/toponet.hpp"

namespace tdon {

// ---------------------------------------------------------------------------
// Exponential dictionary (universal approximants on compact families)
// ---------------------------------------------------------------------------

/// Dictionary of functionals l_1..l_M for the span{ exp(l(u)) } algebra. The
/// zero functional is always entry 0 (its feature is the constant 1), the
/// remaining entries are seeded random dual vectors rescaled so that l_i(V)
/// lies inside [-target_range, target_range] on the training sample. ranges
/// holds per-functional intervals covering the sampled image with padding.
struct ExpDictionary {
    std::vector<DualFunctional> functionals;
    std::vector<std::pair<double, double>> ranges;
    /// Coefficients of the most recent exponential-stage fit, one column per
    /// output coordinate (M x m).
    Eigen::MatrixXd alphas;
};

struct ExpDictionaryOptions {
    int size = 24;  // total functionals including the zero entry
    std::uint64_t seed = 202;
    double target_range = 2.0;
    double range_padding = 0.05;
};

ExpDictionary build_exp_dictionary(const MeasurementSpace& space,
                                   const std::vector<FamilySample>& train,
                                   const ExpDictionaryOptions& options);

/// exp(l_i(u_s)) feature matrix, one row per sample, one column per
/// dictionary functional.
Eigen::MatrixXd exp_features(const MeasurementSpace& space, const ExpDictionary& dict,
                             const std::vector<FamilySample>& samples);

struct UniversalFitOptions {
    ExpDictionaryOptions dictionary;
    SampleScheme train_scheme = SampleScheme::grid(9);
    SampleScheme validation_scheme = SampleScheme::uniform_random(200, 9001);
    Activation activation = Activation::Tanh;
};

struct UniversalFitResult {
    TopoNetwork network;
    ExpDictionary dictionary;
    /// Sup error of the assembled network on the held-out validation sample.
    double achieved_error = 0.0;
    /// Sup error of the exponential-stage fit alone (before each e^t is
    /// replaced by its ridge expansion) on the same sample.
    double exp_stage_error = 0.0;
    bool tolerance_met = false;
};

/// Executable form of the universality construction: least-squares fit of
/// alpha over exp(l_i(.)) features on a training sample, then replacement of
/// each e^t on [a_i, b_i] by a ridge expansion with per-term tolerance
/// tol / (2 (1 + sum_i |alpha_i|)), assembled into one shallow network with
/// hidden units sigma(w l_i(u) - theta).
UniversalFitResult build_universal_approximant(
    const MeasurementSpace& space,
    const std::function<Eigen::VectorXd(const SpaceElement&)>& target, int output_dim,
    const CompactFamily& family, int dictionary_size, double tol,
    UniversalFitOptions options = {});

/// Same construction over pre-sampled data and an existing dictionary; used
/// by the separable pipeline so all coefficient fits share one dictionary
/// and one feature matrix.
UniversalFitResult fit_universal_presampled(const MeasurementSpace& space,
                                            const ExpDictionary& dictionary,
                                            const Eigen::MatrixXd& features_train,
                                            const Eigen::MatrixXd& targets_train,
                                            const std::vector<FamilySample>& validation,
                                            const Eigen::MatrixXd& features_validation,
                                            const Eigen::MatrixXd& targets_validation, double tol,
                                            Activation activation);

// ---------------------------------------------------------------------------
// delta-cover and partition of unity on the operator image
// ---------------------------------------------------------------------------

/// A sampled output function h = G(u), stored as its values on the fixed
/// y-grid flattened point-major (m values per grid point). Distances between
/// grid functions are sup norms over points and components.
using GridFunction = Eigen::VectorXd;

double grid_distance(const GridFunction& a, const GridFunction& b);

/// Greedy delta-net over the samples, scanned in order: a sample becomes a
/// representative iff it is more than delta away from all earlier
/// representatives. Every sample ends up within delta of some representative
/// and representatives are mutually more than delta apart. Returns indices
/// into `samples`.
std::vector<std::size_t> cover_image(const std::vector<GridFunction>& samples, double delta);

/// Hat-function partition of unity subordinate to the 2*delta-balls around
/// the representatives: eta_j = psi_j / sum_k psi_k with
/// psi_j(h) = max(0, 2 delta - dist(h, h_j)). Throws if h is farther than
/// 2*delta from every representative (violated cover precondition).
Eigen::VectorXd partition_of_unity(const std::vector<GridFunction>& representatives, double delta,
                                   const GridFunction& h);

// ---------------------------------------------------------------------------
// Separable expansion (the operator approximation pipeline)
// ---------------------------------------------------------------------------

struct SeparableAtom {
    Eigen::VectorXd omega;
    double zeta = 0.0;
};

/// sum_k a_k(u) phi_k(y) with ridge atoms phi_k(y) = sigma(omega_k.y+zeta_k)
/// and coefficient maps a_k realized as shallow topological networks.
struct SeparableExpansion {
    MeasurementSpace space;
    Activation activation = Activation::Tanh;
    std::vector<SeparableAtom> atoms;
    std::vector<TopoNetwork> coeff_nets;  // one per atom, each X -> R^m
    int output_dim = 1;
    Box domain;

    // bookkeeping from the construction
    std::vector<GridFunction> representatives;
    double delta = 0.0;
};

Eigen::VectorXd evaluate_expansion(const SeparableExpansion& exp, const SpaceElement& u,
                                   const Eigen::VectorXd& y);

struct SeparableBuildOptions {
    SampleScheme train_scheme = SampleScheme::grid(5);
    SampleScheme validation_scheme = SampleScheme::uniform_random(200, 77);
    int y_points_per_axis = 33;
    int trunk_atoms = 32;
    std::uint64_t trunk_seed = 424242;
    ExpDictionaryOptions dictionary;
    Activation activation = Activation::Tanh;
    int workers = 1;
};

/// Error accounting for the construction. The audit bound is the
/// representation-stage estimate ||h - A(h)|| <= 2 delta (+ any ridge-fit
/// slack); the theoretical budget adds the coefficient-fit stage delta
/// (+ its slack), i.e. the 2 delta + delta decomposition.
struct SeparableBuildReport {
    double epsilon = 0.0;
    double delta = 0.0;
    int cover_size = 0;  // M, number of representatives
    int atom_count = 0;  // N, atoms after the union / zero-padding step
    int train_count = 0;
    int validation_count = 0;

    std::vector<double> ridge_errors;  // per representative, sup over grid
    double ridge_slack_sum = 0.0;      // sum_j max(0, err_j - delta)

    double branch_tolerance_min = 0.0;     // min_k delta / (N (M_k + 1) m)
    std::vector<double> branch_errors;     // per atom, validation sup
    double branch_slack_weighted = 0.0;    // sum_k M_k max(0, err_k - tol_k)
    int branch_fits_flagged = 0;

    double audit_bound = 0.0;  // 2 delta + ridge_slack_sum
    double audit_max = 0.0;    // max over train h of ||h - A(h)||_grid
    bool audit_ok = false;

    double theoretical_budget = 0.0;  // 3 delta + accumulated slack
    double empirical_sup = 0.0;       // validation samples x y-grid
    double empirical_mean = 0.0;
    bool epsilon_met = false;
    bool within_budget = false;

    std::uint64_t trunk_seed = 0;
    std::uint64_t dictionary_seed = 0;
};

/// Runs the operator-approximation construction: sample V, evaluate
/// W = G(V) on the y-grid, delta-net with delta = epsilon/4, fit each
/// representative by a ridge expansion on the grid to tolerance delta,
/// collect the atom union with zero-padded coefficients, blend coefficient
/// targets through the partition of unity, fit every coefficient map with
/// the exponential dictionary at tolerance delta / (N (M_k + 1) m), and
/// assemble. Sub-fits that miss tolerance are flagged and their slack
/// accumulated, never fatal.
std::pair<SeparableExpansion, SeparableBuildReport> build_separable_approximant(
    const OperatorFn& oracle, int output_dim, const CompactFamily& family, const Box& domain,
    double epsilon, const SeparableBuildOptions& options = {});

std::pair<SeparableExpansion, SeparableBuildReport> build_separable_approximant(
    const OperatorOracle& oracle, const CompactFamily& family, double epsilon,
    const SeparableBuildOptions& options = {});

/// Columnizes the expansion: p = N, branch columns = coefficient nets, trunk
/// directions/shifts = atoms with identity mixing.
TopologicalDeepONet expansion_to_deeponet(const SeparableExpansion& exp);

// ---------------------------------------------------------------------------
// Sensor discretization (Riemann-sum replacement of integral functionals)
// ---------------------------------------------------------------------------

/// Replacement of an integral functional by a weighted sum of point
/// evaluations: pair(f, u) ~ sum_j xi_j u(x_j), certified on a family sample.
struct SensorDiscretization {
    Eigen::VectorXd points;
    Eigen::VectorXd weights;
    double certified_error = 0.0;
    bool tolerance_met = false;
    /// (sensor count, certified error) pairs visited by the doubling search.
    std::vector<std::pair<int, double>> search_history;
};

struct DiscretizeOptions {
    SampleScheme sample_scheme = SampleScheme::uniform_random(128, 5150);
    int max_sensors = 4096;
};

/// L2Interval version: the functional is an analytic density g, paired as
/// integral of g * u; sensors are the nodes of a coarser Gauss-Legendre rule
/// and the coarsest count achieving delta is found by doubling.
SensorDiscretization discretize_functional(const AnalyticFamily& family,
                                           const AnalyticFunction& density, double delta,
                                           const DiscretizeOptions& options = {});

/// SchwartzHermite version: the functional is a Hermite-coefficient
/// distribution; sensors are coarser Gauss-Hermite nodes.
SensorDiscretization discretize_functional(const MeasurementSpace& space,
                                           const CompactFamily& family, const DualFunctional& f,
                                           double delta, const DiscretizeOptions& options = {});

/// Max |pair(f, u) - sum_j xi_j u(x_j)| over a fresh sample; the point values
/// come through the family's closed forms.
double validate_discretization(const AnalyticFamily& family, const AnalyticFunction& density,
                               const SensorDiscretization& disc, const SampleScheme& scheme);

}  // namespace tdon
