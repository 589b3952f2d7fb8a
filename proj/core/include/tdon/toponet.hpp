#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "tdon/activation.hpp"
#include "tdon/spaces.hpp"

namespace tdon {

/// First layer of a topological network: r dual functionals and biases,
/// mapping u to (  <f_1,u> - theta_1, ..., <f_r,u> - theta_r ).
struct FunctionalLayer {
    std::vector<DualFunctional> functionals;
    Eigen::VectorXd biases;

    int width() const { return static_cast<int>(functionals.size()); }
};

struct HiddenLayer {
    Eigen::MatrixXd weights;  // A_l
    Eigen::VectorXd biases;   // b_l, subtracted: z_l = sigma(A_l z_{l-1} - b_l)
};

/// Feedforward network on a measurement space: the functional layer feeds a
/// (possibly empty) stack of Euclidean hidden layers and a linear output
/// A_L z_{L-1}. With no hidden layers this is exactly the shallow form
/// H(u) = A sigma(T(u)).
struct TopoNetwork {
    SpaceKind space_kind = SpaceKind::Matrix;
    FunctionalLayer functional_layer;
    std::vector<HiddenLayer> hidden;
    Eigen::MatrixXd output_matrix;  // m x n_{L-1}
    Activation activation = Activation::Tanh;

    int output_dim() const { return static_cast<int>(output_matrix.rows()); }
};

/// Validates the dimension chain; throws std::invalid_argument on mismatch.
TopoNetwork make_toponet(const MeasurementSpace& space, FunctionalLayer layer,
                         std::vector<HiddenLayer> hidden, Eigen::MatrixXd output_matrix,
                         Activation activation);

/// Seeded network with the given layer widths; functional weights and
/// matrices are uniform(-s, s) with s = 1/sqrt(fan-in).
TopoNetwork random_toponet(const MeasurementSpace& space, int functional_width,
                           const std::vector<int>& hidden_widths, int output_dim,
                           Activation activation, std::uint64_t seed);

Eigen::VectorXd forward(const MeasurementSpace& space, const TopoNetwork& net,
                        const SpaceElement& u);

/// Row i equals forward(net, elements[i]) bitwise.
Eigen::MatrixXd forward_batch(const MeasurementSpace& space, const TopoNetwork& net,
                              const std::vector<SpaceElement>& elements);

/// Flat parameter order: functional weights (per functional, in layer
/// order), functional biases, then per hidden layer its matrix (row-major)
/// and biases, then the output matrix (row-major).
Eigen::VectorXd parameter_vector(const TopoNetwork& net);
int parameter_count(const TopoNetwork& net);
TopoNetwork with_parameters(const TopoNetwork& net, const Eigen::VectorXd& params);

}  // namespace tdon
