#include "tdon/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace tdon {

using nlohmann::json;

std::string pipeline_name(Pipeline p) {
    switch (p) {
        case Pipeline::Constructive: return "constructive";
        case Pipeline::Trained: return "trained";
        case Pipeline::ChenChenDiscretized: return "chen_chen_discretized";
    }
    throw std::logic_error("unknown pipeline");
}

namespace {

[[noreturn]] void config_error(const std::string& context, const std::string& message) {
    throw std::invalid_argument("config: " + context + ": " + message);
}

void check_keys(const json& obj, const std::set<std::string>& allowed,
                const std::string& context) {
    if (!obj.is_object()) config_error(context, "expected an object");
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.count(key)) config_error(context, "unknown key '" + key + "'");
    }
}

Eigen::VectorXd require_vector(const json& j, const std::string& context) {
    if (!j.is_array() || j.empty()) config_error(context, "expected a non-empty array");
    Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) config_error(context, "expected numbers");
        v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
    }
    return v;
}

MeasurementSpace parse_space(const json& j) {
    check_keys(j, {"kind", "rows", "cols", "length", "p", "interval", "quadrature_points",
                   "hermite_order"},
               "space");
    const SpaceKind kind = space_kind_from_name(j.at("kind").get<std::string>());
    switch (kind) {
        case SpaceKind::Matrix:
            return make_matrix_space(j.at("rows").get<int>(), j.at("cols").get<int>());
        case SpaceKind::SequenceLp:
            return make_sequence_lp_space(j.at("length").get<int>(), j.value("p", 2.0));
        case SpaceKind::SequenceC0:
            return make_sequence_c0_space(j.at("length").get<int>());
        case SpaceKind::L2Interval: {
            double lo = 0.0, hi = 1.0;
            if (j.contains("interval")) {
                const auto iv = j.at("interval");
                if (!iv.is_array() || iv.size() != 2) config_error("space", "interval = [lo, hi]");
                lo = iv[0].get<double>();
                hi = iv[1].get<double>();
            }
            return make_l2_interval_space(j.at("quadrature_points").get<int>(), lo, hi);
        }
        case SpaceKind::SchwartzHermite:
            return make_schwartz_hermite_space(j.at("hermite_order").get<int>(),
                                               j.value("quadrature_points", 0));
    }
    throw std::logic_error("unknown space kind");
}

AnalyticFunction parse_analytic_function(const json& j, const std::string& context) {
    check_keys(j, {"type", "value", "degree", "omega", "amplitude"}, context);
    const std::string type = j.at("type").get<std::string>();
    const double amplitude = j.value("amplitude", 1.0);
    if (type == "constant") return AnalyticFunction::constant(j.value("value", amplitude));
    if (type == "monomial") return AnalyticFunction::monomial(j.at("degree").get<int>(), amplitude);
    if (type == "sine") return AnalyticFunction::sine(j.at("omega").get<double>(), amplitude);
    if (type == "cosine") return AnalyticFunction::cosine(j.at("omega").get<double>(), amplitude);
    config_error(context, "unknown analytic function type '" + type + "'");
}

void parse_family(const json& j, ExperimentConfig& cfg) {
    check_keys(j, {"box_lo", "box_hi", "analytic_basis", "basis"}, "family");
    Eigen::VectorXd lo = require_vector(j.at("box_lo"), "family.box_lo");
    Eigen::VectorXd hi = require_vector(j.at("box_hi"), "family.box_hi");
    if (j.contains("analytic_basis")) {
        if (cfg.space.kind != SpaceKind::L2Interval) {
            config_error("family", "analytic_basis requires an l2_interval space");
        }
        AnalyticBasis basis;
        for (const auto& f : j.at("analytic_basis")) {
            basis.push_back(parse_analytic_function(f, "family.analytic_basis"));
        }
        cfg.analytic_family = std::make_shared<AnalyticFamily>(cfg.space, std::move(basis),
                                                               std::move(lo), std::move(hi));
        cfg.family = cfg.analytic_family->family();
        return;
    }
    if (!j.contains("basis")) config_error("family", "needs 'basis' or 'analytic_basis'");
    std::vector<SpaceElement> basis;
    for (const auto& b : j.at("basis")) {
        basis.push_back(make_element(cfg.space, require_vector(b, "family.basis")));
    }
    cfg.family = make_family(cfg.space, std::move(basis), std::move(lo), std::move(hi));
}

void parse_operator(const json& j, ExperimentConfig& cfg) {
    check_keys(j, {"kind", "w0", "v", "omega0", "zeta0", "damping_rate"}, "operator");
    const OperatorKind kind = operator_kind_from_name(j.at("kind").get<std::string>());
    switch (kind) {
        case OperatorKind::Antiderivative:
            if (!cfg.analytic_family) {
                config_error("operator", "antiderivative needs a family with analytic_basis");
            }
            cfg.oracle = make_antiderivative_oracle(cfg.analytic_family, cfg.domain);
            return;
        case OperatorKind::RankOneMatrix: {
            const auto& rows = j.at("w0");
            Eigen::MatrixXd w0(static_cast<Eigen::Index>(rows.size()),
                               static_cast<Eigen::Index>(rows[0].size()));
            for (std::size_t i = 0; i < rows.size(); ++i) {
                w0.row(static_cast<Eigen::Index>(i)) =
                    require_vector(rows[i], "operator.w0").transpose();
            }
            cfg.oracle = make_rank_one_matrix_oracle(
                cfg.space, std::move(w0), require_vector(j.at("v"), "operator.v"),
                require_vector(j.at("omega0"), "operator.omega0"), j.value("zeta0", 0.0),
                cfg.domain);
            return;
        }
        case OperatorKind::PowerSeries:
            cfg.oracle = make_power_series_oracle(cfg.space, cfg.domain);
            return;
        case OperatorKind::GaussianConvolution:
            cfg.oracle = make_gaussian_convolution_oracle(cfg.space,
                                                          j.value("damping_rate", 0.5), cfg.domain);
            return;
        case OperatorKind::NonlinearComposition:
            if (!cfg.analytic_family) {
                config_error("operator",
                             "nonlinear_composition needs a family with analytic_basis");
            }
            cfg.oracle = make_nonlinear_composition_oracle(cfg.analytic_family, cfg.domain);
            return;
    }
    throw std::logic_error("unknown operator kind");
}

}  // namespace

SampleScheme ExperimentConfig::train_scheme() const {
    return train_grid ? SampleScheme::grid(train_grid_points)
                      : SampleScheme::uniform_random(train_count, seed + 11);
}

SampleScheme ExperimentConfig::validation_scheme() const {
    return SampleScheme::uniform_random(validation_count, seed + 7919);
}

std::vector<Eigen::VectorXd> ExperimentConfig::y_grid() const {
    return tensor_grid(domain, y_points);
}

ExperimentConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config: not valid JSON: ") + e.what());
    }
    check_keys(j,
               {"seed", "output_dir", "pipeline", "space", "family", "operator", "domain",
                "grids", "construct", "train", "discretize", "sweep"},
               "top level");

    ExperimentConfig cfg;
    cfg.source_text = text;
    cfg.seed = j.value("seed", static_cast<std::uint64_t>(7));
    cfg.output_dir = j.value("output_dir", std::string("out"));

    const std::string pipeline = j.at("pipeline").get<std::string>();
    if (pipeline == "constructive") {
        cfg.pipeline = Pipeline::Constructive;
    } else if (pipeline == "trained") {
        cfg.pipeline = Pipeline::Trained;
    } else if (pipeline == "chen_chen_discretized") {
        cfg.pipeline = Pipeline::ChenChenDiscretized;
    } else {
        config_error("pipeline", "unknown pipeline '" + pipeline + "'");
    }

    cfg.space = parse_space(j.at("space"));
    {
        const auto& dj = j.at("domain");
        check_keys(dj, {"lo", "hi"}, "domain");
        cfg.domain = make_box(require_vector(dj.at("lo"), "domain.lo"),
                              require_vector(dj.at("hi"), "domain.hi"));
    }
    parse_family(j.at("family"), cfg);
    if (j.contains("operator")) parse_operator(j.at("operator"), cfg);

    if (cfg.pipeline != Pipeline::ChenChenDiscretized && !cfg.oracle) {
        config_error("operator", "this pipeline requires an operator block");
    }

    if (j.contains("grids")) {
        const auto& g = j.at("grids");
        check_keys(g,
                   {"y_points", "train_scheme", "train_grid_points", "train_count",
                    "validation_count"},
                   "grids");
        cfg.y_points = g.value("y_points", cfg.y_points);
        if (g.contains("train_scheme")) {
            const std::string s = g.at("train_scheme").get<std::string>();
            if (s == "grid") {
                cfg.train_grid = true;
            } else if (s == "random") {
                cfg.train_grid = false;
            } else {
                config_error("grids.train_scheme", "must be 'grid' or 'random'");
            }
        }
        cfg.train_grid_points = g.value("train_grid_points", cfg.train_grid_points);
        cfg.train_count = g.value("train_count", cfg.train_count);
        cfg.validation_count = g.value("validation_count", cfg.validation_count);
        if (cfg.y_points < 1) config_error("grids.y_points", "must be >= 1");
    }

    if (j.contains("construct")) {
        const auto& c = j.at("construct");
        check_keys(c, {"epsilon", "trunk_atoms", "exp_dictionary_size"}, "construct");
        cfg.epsilon = c.value("epsilon", cfg.epsilon);
        cfg.trunk_atoms = c.value("trunk_atoms", cfg.trunk_atoms);
        cfg.exp_dictionary_size = c.value("exp_dictionary_size", cfg.exp_dictionary_size);
        if (!(cfg.epsilon > 0.0)) config_error("construct.epsilon", "must be > 0");
    } else if (cfg.pipeline == Pipeline::Constructive) {
        config_error("construct", "constructive pipeline requires a construct block");
    }

    if (j.contains("train")) {
        const auto& t = j.at("train");
        check_keys(t,
                   {"epochs", "batch_size", "learning_rate", "decay", "latent_dim",
                    "branch_width", "n_u", "split_ratio", "freeze_functionals", "activation"},
                   "train");
        cfg.train_config.seed = cfg.seed;
        cfg.train_config.epochs = t.value("epochs", cfg.train_config.epochs);
        cfg.train_config.batch_size = t.value("batch_size", cfg.train_config.batch_size);
        cfg.train_config.learning_rate = t.value("learning_rate", cfg.train_config.learning_rate);
        cfg.train_config.decay = t.value("decay", cfg.train_config.decay);
        cfg.train_config.freeze_functionals =
            t.value("freeze_functionals", cfg.train_config.freeze_functionals);
        cfg.latent_dim = t.value("latent_dim", cfg.latent_dim);
        cfg.branch_width = t.value("branch_width", cfg.branch_width);
        cfg.n_u = t.value("n_u", cfg.n_u);
        cfg.split_ratio = t.value("split_ratio", cfg.split_ratio);
        if (t.contains("activation")) {
            cfg.train_activation = activation_from_name(t.at("activation").get<std::string>());
        }
    } else if (cfg.pipeline == Pipeline::Trained) {
        config_error("train", "trained pipeline requires a train block");
    }

    if (j.contains("discretize")) {
        const auto& d = j.at("discretize");
        check_keys(d,
                   {"delta", "density", "max_sensors", "sample_count", "validation_count"},
                   "discretize");
        cfg.discretize_delta = d.value("delta", cfg.discretize_delta);
        if (d.contains("density")) {
            cfg.density = parse_analytic_function(d.at("density"), "discretize.density");
        }
        cfg.max_sensors = d.value("max_sensors", cfg.max_sensors);
        cfg.discretize_samples = d.value("sample_count", cfg.discretize_samples);
        cfg.discretize_validation_samples =
            d.value("validation_count", cfg.discretize_validation_samples);
        if (!(cfg.discretize_delta > 0.0)) config_error("discretize.delta", "must be > 0");
    } else if (cfg.pipeline == Pipeline::ChenChenDiscretized) {
        config_error("discretize", "chen_chen_discretized pipeline requires a discretize block");
    }

    if (j.contains("sweep")) {
        const auto& s = j.at("sweep");
        check_keys(s, {"epsilons"}, "sweep");
        for (const auto& e : s.at("epsilons")) {
            if (!e.is_number() || !(e.get<double>() > 0.0)) {
                config_error("sweep.epsilons", "entries must be positive numbers");
            }
            cfg.sweep_epsilons.push_back(e.get<double>());
        }
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

}  // namespace tdon
