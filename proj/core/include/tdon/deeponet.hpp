#pragma once

#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "tdon/toponet.hpp"

namespace tdon {

/// Axis-aligned box in R^d, the output domain K.
struct Box {
    Eigen::VectorXd lo;
    Eigen::VectorXd hi;

    int dim() const { return static_cast<int>(lo.size()); }
    bool contains(const Eigen::VectorXd& y, double slack = 0.0) const;
};

Box make_box(Eigen::VectorXd lo, Eigen::VectorXd hi);

/// Tensor-product grid over the box, `points_per_axis` per dimension,
/// first axis varying slowest. Returns one row per grid point.
std::vector<Eigen::VectorXd> tensor_grid(const Box& box, int points_per_axis);

/// Ridge trunk t_k(y) = sigma(omega_k . y + zeta_k), with an optional output
/// mixing matrix applied on top (identity when absent, which is the
/// constructive form).
struct TrunkNetwork {
    std::vector<Eigen::VectorXd> omegas;  // p direction vectors in R^d
    Eigen::VectorXd zetas;                // length p
    Activation activation = Activation::Tanh;
    std::optional<Eigen::MatrixXd> mixing;  // p x p

    int latent_dim() const { return static_cast<int>(omegas.size()); }
    int input_dim() const { return omegas.empty() ? 0 : static_cast<int>(omegas.front().size()); }
};

TrunkNetwork make_trunk(std::vector<Eigen::VectorXd> omegas, Eigen::VectorXd zetas,
                        Activation activation,
                        std::optional<Eigen::MatrixXd> mixing = std::nullopt);
TrunkNetwork random_trunk(int input_dim, int latent_dim, Activation activation,
                          std::uint64_t seed, bool with_mixing = true);

Eigen::VectorXd trunk_values(const TrunkNetwork& trunk, const Eigen::VectorXd& y);

/// Branch map u -> m x p matrix whose k-th column is columns[k].forward(u).
struct BranchNetwork {
    std::vector<TopoNetwork> columns;

    int latent_dim() const { return static_cast<int>(columns.size()); }
    int output_dim() const { return columns.empty() ? 0 : columns.front().output_dim(); }
};

Eigen::MatrixXd branch_matrix(const MeasurementSpace& space, const BranchNetwork& branch,
                              const SpaceElement& u);

struct TopologicalDeepONet {
    MeasurementSpace space;
    BranchNetwork branch;
    TrunkNetwork trunk;
    Box domain;

    int output_dim() const { return branch.output_dim(); }
    int latent_dim() const { return trunk.latent_dim(); }
};

TopologicalDeepONet make_deeponet(MeasurementSpace space, BranchNetwork branch,
                                  TrunkNetwork trunk, Box domain);

/// B(u) T(y). Evaluation is permitted outside the domain box; accuracy is
/// only claimed on it. The combine step is an explicit fixed-order loop so a
/// 1 x p matrix-vector product is bit-identical to the dot product.
Eigen::VectorXd evaluate(const TopologicalDeepONet& model, const SpaceElement& u,
                         const Eigen::VectorXd& y);

/// Rowwise equal to evaluate(); the branch matrix is computed once per u and
/// reused, which is bit-identical to the per-point loop.
Eigen::MatrixXd evaluate_field(const TopologicalDeepONet& model, const SpaceElement& u,
                               const std::vector<Eigen::VectorXd>& grid);

/// Ground truth for error reporting: (u, y) -> R^m.
using OperatorFn = std::function<Eigen::VectorXd(const SpaceElement&, const Eigen::VectorXd&)>;

struct ErrorReport {
    double sup = 0.0;
    double mean = 0.0;
    Eigen::VectorXd argmax_c;  // family coefficients of the worst element
    Eigen::VectorXd argmax_y;
    std::size_t samples = 0;
};

/// Sup/mean of || G(u)(y) - model(u)(y) ||_inf over the finite sample set
/// (sup norm on R^m). Deterministic for any worker count: per-element results
/// are reduced in sample order.
ErrorReport sup_error(const TopologicalDeepONet& model, const OperatorFn& reference,
                      const std::vector<FamilySample>& u_samples,
                      const std::vector<Eigen::VectorXd>& y_grid, int workers = 1);

}  // namespace tdon
