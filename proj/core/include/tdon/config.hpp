#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "tdon/analytic.hpp"
#include "tdon/deeponet.hpp"
#include "tdon/operators.hpp"
#include "tdon/spaces.hpp"
#include "tdon/training.hpp"

namespace tdon {

enum class Pipeline { Constructive, Trained, ChenChenDiscretized };

std::string pipeline_name(Pipeline p);

/// Parsed and schema-validated experiment description. Validation is strict:
/// unknown keys anywhere in the document are rejected before any compute.
struct ExperimentConfig {
    std::uint64_t seed = 7;
    std::string output_dir = "out";
    Pipeline pipeline = Pipeline::Constructive;

    MeasurementSpace space;
    CompactFamily family;
    /// Set when the family has closed-form basis functions (L2Interval).
    std::shared_ptr<AnalyticFamily> analytic_family;
    std::shared_ptr<OperatorOracle> oracle;  // null for discretization studies
    Box domain;

    // grids block
    int y_points = 33;
    bool train_grid = true;
    int train_grid_points = 5;
    int train_count = 125;
    int validation_count = 200;

    // construct block
    double epsilon = 0.1;
    int trunk_atoms = 32;
    int exp_dictionary_size = 24;

    // train block
    TrainConfig train_config;
    int latent_dim = 16;
    int branch_width = 16;
    int n_u = 48;
    double split_ratio = 0.8;
    Activation train_activation = Activation::Tanh;

    // discretize block
    double discretize_delta = 1e-4;
    AnalyticFunction density = AnalyticFunction::constant(1.0);
    int max_sensors = 4096;
    int discretize_samples = 128;
    int discretize_validation_samples = 128;

    // sweep block
    std::vector<double> sweep_epsilons;

    /// Original config file text, echoed into run reports.
    std::string source_text;

    SampleScheme train_scheme() const;
    SampleScheme validation_scheme() const;
    std::vector<Eigen::VectorXd> y_grid() const;
};

ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& text);

}  // namespace tdon
