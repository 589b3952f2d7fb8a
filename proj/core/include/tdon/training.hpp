#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "tdon/deeponet.hpp"
#include "tdon/spaces.hpp"

namespace tdon {

struct DataRecord {
    Eigen::VectorXd c;  // family coefficients (regenerable provenance)
    SpaceElement u;
    Eigen::VectorXd y;
    Eigen::VectorXd g;  // oracle output at (u, y)
};

struct OperatorDataset {
    std::vector<DataRecord> train;
    std::vector<DataRecord> validation;

    int output_dim() const { return train.empty() ? 0 : static_cast<int>(train.front().g.size()); }
};

/// n_u elements drawn uniformly from the family box (seeded), crossed with
/// the y grid; elements are split between train and validation so validation
/// inputs are unseen. Targets come from the oracle.
OperatorDataset generate_dataset(const OperatorFn& oracle, const CompactFamily& family, int n_u,
                                 const std::vector<Eigen::VectorXd>& y_grid, std::uint64_t seed,
                                 double split_ratio);

/// First-order optimizer with bias-corrected first and second moment
/// accumulators:
///   m <- beta1 m + (1-beta1) g,   v <- beta2 v + (1-beta2) g^2,
///   p <- p - lr_t * (m / (1-beta1^t)) / (sqrt(v / (1-beta2^t)) + eps_hat),
/// with lr_t = learning_rate * decay^epoch.
struct TrainConfig {
    std::uint64_t seed = 1;
    int epochs = 200;
    int batch_size = 32;
    double learning_rate = 1e-2;
    double decay = 0.995;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps_hat = 1e-8;
    /// Proof-faithful mode: functional-layer weights stay at their initial
    /// values (the generalized sensors are fixed, only Euclidean layers and
    /// the trunk are fitted).
    bool freeze_functionals = false;
};

struct EpochStats {
    double train_mse = 0.0;
    double validation_mse = 0.0;
};

struct TrainResult {
    TopologicalDeepONet model;  // parameters with the best validation MSE seen
    std::vector<EpochStats> history;
    double best_validation_mse = 0.0;
    int best_epoch = 0;
    bool diverged = false;
};

/// Mean over records of the squared Euclidean norm of the residual.
double dataset_mse(const TopologicalDeepONet& model, const std::vector<DataRecord>& records);

/// Full flat parameter vector of the model: branch columns in order (each in
/// toponet parameter order), then trunk directions (atom-major), trunk
/// shifts, then the mixing matrix row-major when present.
Eigen::VectorXd model_parameters(const TopologicalDeepONet& model);
TopologicalDeepONet model_with_parameters(const TopologicalDeepONet& model,
                                          const Eigen::VectorXd& params);

/// Analytic gradient of dataset_mse with respect to model_parameters.
Eigen::VectorXd mse_gradient(const TopologicalDeepONet& model,
                             const std::vector<DataRecord>& records,
                             bool freeze_functionals = false);

TrainResult train(const TopologicalDeepONet& model, const OperatorDataset& dataset,
                  const TrainConfig& config);

/// Max over parameters of |analytic - central difference| / (1 + max(|.|)),
/// on the given records. For relu models, records where any preactivation
/// lies within `kink_margin` of the kink are excluded before probing.
double gradient_check(const TopologicalDeepONet& model, const std::vector<DataRecord>& records,
                      double fd_step, double kink_margin = 1e-3);

}  // namespace tdon
