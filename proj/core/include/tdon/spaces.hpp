#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tdon/analytic.hpp"
#include "tdon/quadrature.hpp"

namespace tdon {

/// The concrete input-space instances. Every space stores elements and dual
/// functionals through finite coefficient vectors:
///   Matrix          - n x p real matrices, entries flattened row-major;
///                     duals pair by trace(W^T A).
///   SequenceLp      - l_p sequences truncated to length N; duals are l_q
///                     weight vectors, pairing is the finite dot product.
///   SequenceC0      - c_0 sequences truncated to length N (tail exactly
///                     zero); duals are l_1 weights.
///   L2Interval      - L^2([a,b]) functions stored as values on a fixed
///                     Gauss-Legendre grid; duals are densities sampled at
///                     the same nodes, pairing folds in the quadrature
///                     weights.
///   SchwartzHermite - rapidly decreasing functions truncated to the first H
///                     Hermite-function coefficients; duals are Hermite
///                     coefficients of the pairing distribution, pairing is
///                     evaluated under a fixed Gauss-Hermite rule.
enum class SpaceKind { Matrix, SequenceLp, SequenceC0, L2Interval, SchwartzHermite };

std::string space_kind_name(SpaceKind k);
SpaceKind space_kind_from_name(const std::string& s);

enum class DistanceMetric { Euclidean, Sup };

struct MeasurementSpace {
    SpaceKind kind = SpaceKind::Matrix;

    // Matrix
    int rows = 0, cols = 0;
    // SequenceLp / SequenceC0
    int length = 0;
    double p_exponent = 2.0;  // descriptive only; pairing is the finite sum
    // L2Interval
    double interval_lo = 0.0, interval_hi = 1.0;
    int quadrature_points = 0;
    // SchwartzHermite
    int hermite_order = 0;

    // Derived, filled at construction.
    QuadratureRule quadrature;    // L2Interval (on [lo,hi]) or Gauss-Hermite
    Eigen::MatrixXd pairing_gram; // SchwartzHermite only: Htilde^T W Htilde

    /// Coefficient-vector length of elements and functionals.
    int dim() const;

    /// The coefficient-space representation of the pairing: for an element u,
    /// pair(f, u) = f.weights . pairing_vector(u.coeffs). Identity for Matrix
    /// and sequence spaces, quadrature-weight scaling for L2Interval, and the
    /// (near-identity) Hermite quadrature Gram for SchwartzHermite.
    Eigen::VectorXd pairing_vector(const Eigen::VectorXd& coeffs) const;

    DistanceMetric default_metric() const {
        return kind == SpaceKind::SequenceC0 ? DistanceMetric::Sup : DistanceMetric::Euclidean;
    }
};

MeasurementSpace make_matrix_space(int rows, int cols);
MeasurementSpace make_sequence_lp_space(int length, double p = 2.0);
MeasurementSpace make_sequence_c0_space(int length);
MeasurementSpace make_l2_interval_space(int quadrature_points, double lo = 0.0, double hi = 1.0);
/// quadrature_points defaults to hermite_order, the smallest count for which
/// the Hermite functions are orthonormal under the rule (so the pairing Gram
/// is the identity to machine precision).
MeasurementSpace make_schwartz_hermite_space(int hermite_order, int quadrature_points = 0);

/// An element of the space, in the coefficient representation described on
/// SpaceKind.
struct SpaceElement {
    SpaceKind kind = SpaceKind::Matrix;
    Eigen::VectorXd coeffs;
};

/// A continuous linear functional on the space, same storage convention.
struct DualFunctional {
    SpaceKind kind = SpaceKind::Matrix;
    Eigen::VectorXd weights;
};

SpaceElement make_element(const MeasurementSpace& space, Eigen::VectorXd coeffs);
DualFunctional make_functional(const MeasurementSpace& space, Eigen::VectorXd weights);
SpaceElement zero_element(const MeasurementSpace& space);
DualFunctional zero_functional(const MeasurementSpace& space);

/// Evaluates the dual pairing <f, u>. Throws on space mismatch.
double pair(const MeasurementSpace& space, const DualFunctional& f, const SpaceElement& u);

/// Distance on the coefficient representation (all topologies coincide on
/// these finite-dimensional parameterizations).
double element_distance(const MeasurementSpace& space, const SpaceElement& u,
                        const SpaceElement& v, DistanceMetric metric);
double element_distance(const MeasurementSpace& space, const SpaceElement& u,
                        const SpaceElement& v);  // space default metric

/// A compact subset of the space: the image of a closed coefficient box under
/// the affine map c -> sum_j c_j phi_j.
struct CompactFamily {
    MeasurementSpace space;
    std::vector<SpaceElement> basis;
    Eigen::VectorXd box_lo;
    Eigen::VectorXd box_hi;

    int parameter_dim() const { return static_cast<int>(basis.size()); }
};

CompactFamily make_family(const MeasurementSpace& space, std::vector<SpaceElement> basis,
                          Eigen::VectorXd box_lo, Eigen::VectorXd box_hi);

/// sum_j c_j phi_j, accumulated in basis order (bit-reproducible).
/// Throws if c lies outside [box_lo, box_hi].
SpaceElement element_of(const CompactFamily& family, const Eigen::VectorXd& c);

struct FamilySample {
    Eigen::VectorXd c;
    SpaceElement element;
};

struct SampleScheme {
    enum class Kind { Grid, UniformRandom };
    Kind kind = Kind::Grid;
    int grid_points = 2;       // per axis, includes both corners
    int count = 1;             // UniformRandom
    std::uint64_t seed = 0;

    static SampleScheme grid(int k);
    static SampleScheme uniform_random(int n, std::uint64_t seed);
};

/// Deterministic sampling of the family box. Grid sampling includes every
/// corner of the box; random sampling reproduces exactly for a fixed seed.
std::vector<FamilySample> sample_family(const CompactFamily& family, const SampleScheme& scheme);

/// An L2Interval (or general) family whose basis functions carry closed
/// forms, so elements can be evaluated off the quadrature grid and integrated
/// exactly. Coefficient recovery maps a grid-valued element back to its basis
/// coefficients via a precomputed least-squares factorization.
class AnalyticFamily {
public:
    AnalyticFamily(MeasurementSpace space, AnalyticBasis basis_forms,
                   Eigen::VectorXd box_lo, Eigen::VectorXd box_hi);

    const CompactFamily& family() const { return family_; }
    const AnalyticBasis& basis_forms() const { return basis_forms_; }

    /// Basis coefficients of a grid-valued element (exact to machine
    /// precision for elements in the span of the basis).
    Eigen::VectorXd coefficients_of(const SpaceElement& u) const;

    /// Point value sum_j c_j phi_j(x) from recovered coefficients.
    double value_at(const SpaceElement& u, double x) const;

private:
    CompactFamily family_;
    AnalyticBasis basis_forms_;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> recover_qr_;
};

}  // namespace tdon
