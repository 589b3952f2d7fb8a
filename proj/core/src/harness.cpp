#include "tdon/harness.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "tdon/constructive.hpp"
#include "tdon/model_io.hpp"
#include "tdon/rng.hpp"
#include "tdon/training.hpp"

namespace tdon {

using nlohmann::json;

namespace {

class StageClock {
public:
    void start(const std::string& stage) {
        stage_ = stage;
        t0_ = std::chrono::steady_clock::now();
    }
    void stop(json& runtimes) {
        const auto dt = std::chrono::steady_clock::now() - t0_;
        runtimes[stage_] = std::chrono::duration<double>(dt).count();
    }

private:
    std::string stage_;
    std::chrono::steady_clock::time_point t0_;
};

ExperimentConfig apply_overrides(ExperimentConfig cfg, const HarnessOptions& options) {
    if (options.seed_override) {
        cfg.seed = *options.seed_override;
        cfg.train_config.seed = *options.seed_override;
    }
    if (options.output_dir_override) cfg.output_dir = *options.output_dir_override;
    return cfg;
}

std::string ensure_output_dir(const ExperimentConfig& cfg) {
    std::filesystem::create_directories(cfg.output_dir);
    return cfg.output_dir;
}

json config_echo(const ExperimentConfig& cfg) { return json::parse(cfg.source_text); }

void write_report(const std::string& path, const json& report) {
    write_file_atomic(path, report.dump(1));
}

void collect_metrics(const json& node, const std::string& prefix,
                     std::map<std::string, double>& out) {
    if (node.is_number()) {
        out[prefix] = node.get<double>();
    } else if (node.is_boolean()) {
        out[prefix] = node.get<bool>() ? 1.0 : 0.0;
    } else if (node.is_object()) {
        for (const auto& [key, value] : node.items()) {
            collect_metrics(value, prefix.empty() ? key : prefix + "." + key, out);
        }
    }
}

RunOutcome finish(const std::string& report_path, json report, bool flagged,
                  std::string model_path = {}) {
    report["flagged"] = flagged;
    write_report(report_path, report);
    RunOutcome outcome;
    outcome.flagged = flagged;
    outcome.report_path = report_path;
    outcome.model_path = std::move(model_path);
    collect_metrics(report.value("metrics", json::object()), "", outcome.metrics);
    return outcome;
}

void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<double>>& rows) {
    std::ostringstream os;
    os << header << "\n";
    os.precision(17);
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << ",";
            os << row[i];
        }
        os << "\n";
    }
    write_file_atomic(path, os.str());
}

ErrorReport model_error_report(const TopologicalDeepONet& model, const ExperimentConfig& cfg,
                               int workers) {
    const auto validation = sample_family(cfg.family, cfg.validation_scheme());
    return sup_error(model, cfg.oracle->as_fn(), validation, cfg.y_grid(), workers);
}

}  // namespace

RunOutcome run_construct(const ExperimentConfig& config, const HarnessOptions& options) {
    const ExperimentConfig cfg = apply_overrides(config, options);
    if (!cfg.oracle) throw std::invalid_argument("construct: config has no operator block");
    const std::string dir = ensure_output_dir(cfg);

    SeparableBuildOptions build;
    build.train_scheme = cfg.train_scheme();
    build.validation_scheme = cfg.validation_scheme();
    build.y_points_per_axis = cfg.y_points;
    build.trunk_atoms = cfg.trunk_atoms;
    build.trunk_seed = cfg.seed + 13;
    build.dictionary.size = cfg.exp_dictionary_size;
    build.dictionary.seed = cfg.seed + 17;
    build.workers = options.workers;

    json runtimes;
    StageClock clock;
    clock.start("construct_seconds");
    auto [expansion, report] = build_separable_approximant(*cfg.oracle, cfg.family,
                                                           cfg.epsilon, build);
    clock.stop(runtimes);

    clock.start("persist_seconds");
    const TopologicalDeepONet model = expansion_to_deeponet(expansion);
    const std::string model_path = dir + "/model.json";
    save_deeponet(model, model_path);
    clock.stop(runtimes);

    // recomputable check: the persisted model evaluated on the validation
    // scheme must reproduce the build's empirical sup
    clock.start("evaluate_seconds");
    const ErrorReport eval = model_error_report(model, cfg, options.workers);
    clock.stop(runtimes);

    json stages;
    stages["epsilon"] = report.epsilon;
    stages["delta"] = report.delta;
    stages["cover_size"] = report.cover_size;
    stages["atom_count"] = report.atom_count;
    stages["train_count"] = report.train_count;
    stages["validation_count"] = report.validation_count;
    stages["ridge_errors"] = report.ridge_errors;
    stages["ridge_slack_sum"] = report.ridge_slack_sum;
    stages["branch_tolerance_min"] = report.branch_tolerance_min;
    stages["branch_errors"] = report.branch_errors;
    stages["branch_fits_flagged"] = report.branch_fits_flagged;
    stages["branch_slack_weighted"] = report.branch_slack_weighted;
    stages["audit_bound"] = report.audit_bound;
    stages["audit_max"] = report.audit_max;
    stages["audit_ok"] = report.audit_ok;
    stages["theoretical_budget"] = report.theoretical_budget;
    stages["seeds"] = {{"trunk", report.trunk_seed}, {"dictionary", report.dictionary_seed}};

    json metrics;
    metrics["empirical_sup"] = report.empirical_sup;
    metrics["empirical_mean"] = report.empirical_mean;
    metrics["model_sup"] = eval.sup;
    metrics["model_mean"] = eval.mean;
    metrics["epsilon_met"] = report.epsilon_met;
    metrics["within_budget"] = report.within_budget;

    const bool flagged = !report.epsilon_met || !report.audit_ok || !report.within_budget ||
                         report.branch_fits_flagged > 0 || report.ridge_slack_sum > 0.0;

    json doc;
    doc["command"] = "construct";
    doc["config"] = config_echo(cfg);
    doc["stages"] = stages;
    doc["metrics"] = metrics;
    doc["runtime_seconds"] = runtimes;
    doc["artifacts"] = {{"model", model_path}};
    return finish(dir + "/construct_report.json", std::move(doc), flagged, model_path);
}

RunOutcome run_train(const ExperimentConfig& config, const HarnessOptions& options) {
    const ExperimentConfig cfg = apply_overrides(config, options);
    if (!cfg.oracle) throw std::invalid_argument("train: config has no operator block");
    const std::string dir = ensure_output_dir(cfg);

    json runtimes;
    StageClock clock;
    clock.start("dataset_seconds");
    const OperatorDataset dataset = generate_dataset(cfg.oracle->as_fn(), cfg.family, cfg.n_u,
                                                     cfg.y_grid(), cfg.seed, cfg.split_ratio);
    clock.stop(runtimes);

    BranchNetwork branch;
    for (int k = 0; k < cfg.latent_dim; ++k) {
        branch.columns.push_back(random_toponet(cfg.space, cfg.branch_width, {},
                                                cfg.oracle->output_dim(), cfg.train_activation,
                                                cfg.seed + 1000 + static_cast<std::uint64_t>(k)));
    }
    TopologicalDeepONet model = make_deeponet(
        cfg.space, std::move(branch),
        random_trunk(cfg.domain.dim(), cfg.latent_dim, cfg.train_activation, cfg.seed + 99, true),
        cfg.domain);

    clock.start("train_seconds");
    const TrainResult trained = train(model, dataset, cfg.train_config);
    clock.stop(runtimes);

    const std::string model_path = dir + "/model.json";
    save_deeponet(trained.model, model_path);

    std::vector<std::vector<double>> history_rows;
    for (std::size_t e = 0; e < trained.history.size(); ++e) {
        history_rows.push_back({static_cast<double>(e), trained.history[e].train_mse,
                                trained.history[e].validation_mse});
    }
    const std::string history_path = dir + "/history.csv";
    write_csv(history_path, "epoch,train_mse,validation_mse", history_rows);

    clock.start("evaluate_seconds");
    const ErrorReport eval = model_error_report(trained.model, cfg, options.workers);
    clock.stop(runtimes);

    json metrics;
    metrics["best_validation_mse"] = trained.best_validation_mse;
    metrics["best_epoch"] = trained.best_epoch;
    metrics["final_train_mse"] =
        trained.history.empty() ? 0.0 : trained.history.back().train_mse;
    metrics["sup_error"] = eval.sup;
    metrics["mean_error"] = eval.mean;
    metrics["diverged"] = trained.diverged;

    json doc;
    doc["command"] = "train";
    doc["config"] = config_echo(cfg);
    doc["metrics"] = metrics;
    doc["runtime_seconds"] = runtimes;
    doc["artifacts"] = {{"model", model_path}, {"history", history_path}};
    return finish(dir + "/train_report.json", std::move(doc), trained.diverged, model_path);
}

RunOutcome run_evaluate(const std::string& model_path, const ExperimentConfig& config,
                        const HarnessOptions& options) {
    const ExperimentConfig cfg = apply_overrides(config, options);
    if (!cfg.oracle) throw std::invalid_argument("evaluate: config has no operator block");
    const std::string dir = ensure_output_dir(cfg);

    json runtimes;
    StageClock clock;
    clock.start("evaluate_seconds");
    const TopologicalDeepONet model = load_deeponet(model_path);
    const ErrorReport eval = model_error_report(model, cfg, options.workers);
    clock.stop(runtimes);

    json metrics;
    metrics["sup_error"] = eval.sup;
    metrics["mean_error"] = eval.mean;
    metrics["samples"] = static_cast<double>(eval.samples);

    json doc;
    doc["command"] = "evaluate";
    doc["config"] = config_echo(cfg);
    doc["metrics"] = metrics;
    doc["argmax_y"] = std::vector<double>(eval.argmax_y.data(),
                                          eval.argmax_y.data() + eval.argmax_y.size());
    doc["argmax_c"] = std::vector<double>(eval.argmax_c.data(),
                                          eval.argmax_c.data() + eval.argmax_c.size());
    doc["runtime_seconds"] = runtimes;
    doc["artifacts"] = {{"model", model_path}};
    return finish(dir + "/evaluate_report.json", std::move(doc), false, model_path);
}

RunOutcome run_discretize(const ExperimentConfig& config, const HarnessOptions& options) {
    const ExperimentConfig cfg = apply_overrides(config, options);
    if (!cfg.analytic_family) {
        throw std::invalid_argument("discretize: config needs a family with analytic_basis");
    }
    const std::string dir = ensure_output_dir(cfg);

    DiscretizeOptions disc_options;
    disc_options.sample_scheme = SampleScheme::uniform_random(cfg.discretize_samples, cfg.seed + 5);
    disc_options.max_sensors = cfg.max_sensors;

    json runtimes;
    StageClock clock;
    clock.start("discretize_seconds");
    const SensorDiscretization disc = discretize_functional(*cfg.analytic_family, cfg.density,
                                                            cfg.discretize_delta, disc_options);
    const double validation = validate_discretization(
        *cfg.analytic_family, cfg.density, disc,
        SampleScheme::uniform_random(cfg.discretize_validation_samples, cfg.seed + 31337));
    clock.stop(runtimes);

    std::vector<std::vector<double>> table;
    for (const auto& [count, err] : disc.search_history) {
        table.push_back({static_cast<double>(count), err});
    }
    const std::string table_path = dir + "/discretize_table.csv";
    write_csv(table_path, "sensor_count,certified_error", table);

    std::vector<double> xs, errs;
    for (const auto& [count, err] : disc.search_history) {
        xs.push_back(static_cast<double>(count));
        errs.push_back(err);
    }
    const std::string plot_path = dir + "/discretize_curve.svg";
    write_svg_line_plot(plot_path, "certified error vs sensor count", xs, {errs},
                        {"certified_error"});

    json metrics;
    metrics["sensor_count"] = static_cast<double>(disc.points.size());
    metrics["certified_error"] = disc.certified_error;
    metrics["validation_error"] = validation;
    metrics["delta"] = cfg.discretize_delta;
    metrics["tolerance_met"] = disc.tolerance_met;

    const bool flagged = !disc.tolerance_met || validation > 1.5 * cfg.discretize_delta;

    json doc;
    doc["command"] = "discretize";
    doc["config"] = config_echo(cfg);
    doc["metrics"] = metrics;
    doc["runtime_seconds"] = runtimes;
    doc["artifacts"] = {{"table", table_path}, {"plot", plot_path}};
    return finish(dir + "/discretize_report.json", std::move(doc), flagged);
}

RunOutcome run_sweep(const ExperimentConfig& config, const HarnessOptions& options) {
    const ExperimentConfig cfg = apply_overrides(config, options);
    if (cfg.sweep_epsilons.empty()) {
        throw std::invalid_argument("sweep: config needs a sweep block with epsilons");
    }
    const std::string dir = ensure_output_dir(cfg);

    bool flagged = false;
    std::vector<std::vector<double>> rows;
    std::vector<double> xs, sups, budgets;
    for (std::size_t i = 0; i < cfg.sweep_epsilons.size(); ++i) {
        ExperimentConfig sub = cfg;
        sub.epsilon = cfg.sweep_epsilons[i];
        sub.output_dir = dir + "/eps_" + std::to_string(i);
        HarnessOptions sub_options = options;
        sub_options.output_dir_override.reset();
        const RunOutcome outcome = run_construct(sub, sub_options);
        flagged = flagged || outcome.flagged;
        const double sup = outcome.metrics.at("empirical_sup");
        rows.push_back({sub.epsilon, sup, outcome.metrics.at("model_sup"),
                        outcome.flagged ? 1.0 : 0.0});
        xs.push_back(sub.epsilon);
        sups.push_back(sup);
        budgets.push_back(sub.epsilon);
    }
    const std::string table_path = dir + "/sweep.csv";
    write_csv(table_path, "epsilon,empirical_sup,model_sup,flagged", rows);
    const std::string plot_path = dir + "/sweep_curve.svg";
    write_svg_line_plot(plot_path, "achieved sup error vs requested epsilon", xs,
                        {sups, budgets}, {"empirical_sup", "epsilon"});

    json doc;
    doc["command"] = "sweep";
    doc["config"] = config_echo(cfg);
    doc["metrics"] = {{"runs", cfg.sweep_epsilons.size()}};
    doc["artifacts"] = {{"table", table_path}, {"plot", plot_path}};
    return finish(dir + "/sweep_report.json", std::move(doc), flagged);
}

double run_reduction_check(int dim, int width, int probes, std::uint64_t seed, bool verbose) {
    // Coordinate embedding: R^dim as dim x 1 matrices; every functional is a
    // plain weight vector and forward must reduce to a standard one-hidden-
    // layer MLP with the same parameters.
    const MeasurementSpace space = make_matrix_space(dim, 1);
    const TopoNetwork net = random_toponet(space, width, {}, 3, Activation::Tanh, seed);

    // Independent reference evaluation with raw loops.
    const auto reference = [&](const std::vector<double>& x) {
        std::vector<double> hidden_out(static_cast<std::size_t>(width), 0.0);
        for (int i = 0; i < width; ++i) {
            double pre = -net.functional_layer.biases(i);
            for (int j = 0; j < dim; ++j) {
                pre += net.functional_layer.functionals[static_cast<std::size_t>(i)].weights(j) *
                       x[static_cast<std::size_t>(j)];
            }
            hidden_out[static_cast<std::size_t>(i)] = std::tanh(pre);
        }
        std::vector<double> out(3, 0.0);
        for (int r = 0; r < 3; ++r) {
            double acc = 0.0;
            for (int i = 0; i < width; ++i) {
                acc += net.output_matrix(r, i) * hidden_out[static_cast<std::size_t>(i)];
            }
            out[static_cast<std::size_t>(r)] = acc;
        }
        return out;
    };

    Rng rng(seed + 1);
    double worst = 0.0;
    for (int n = 0; n < probes; ++n) {
        Eigen::VectorXd x(dim);
        std::vector<double> xv(static_cast<std::size_t>(dim));
        for (int j = 0; j < dim; ++j) {
            x(j) = rng.uniform(-2.0, 2.0);
            xv[static_cast<std::size_t>(j)] = x(j);
        }
        const Eigen::VectorXd got = forward(space, net, SpaceElement{space.kind, x});
        const std::vector<double> want = reference(xv);
        for (int r = 0; r < 3; ++r) {
            worst = std::max(worst, std::abs(got(r) - want[static_cast<std::size_t>(r)]));
        }
    }
    if (verbose) {
        std::cout << (worst <= 1e-12 ? "PASS" : "FAIL")
                  << " euclidean reduction: max deviation " << worst << " over " << probes
                  << " probes\n";
    }
    return worst;
}

void write_svg_line_plot(const std::string& path, const std::string& title,
                         const std::vector<double>& xs,
                         const std::vector<std::vector<double>>& series,
                         const std::vector<std::string>& labels) {
    const int w = 640, h = 420, margin = 60;
    double x_lo = 1e300, x_hi = -1e300, y_lo = 1e300, y_hi = -1e300;
    for (const double x : xs) {
        x_lo = std::min(x_lo, x);
        x_hi = std::max(x_hi, x);
    }
    for (const auto& s : series) {
        for (const double y : s) {
            const double ly = std::log10(std::max(y, 1e-300));
            y_lo = std::min(y_lo, ly);
            y_hi = std::max(y_hi, ly);
        }
    }
    if (!(x_hi > x_lo)) x_hi = x_lo + 1.0;
    if (!(y_hi > y_lo)) y_hi = y_lo + 1.0;
    const auto px = [&](double x) {
        return margin + (x - x_lo) / (x_hi - x_lo) * (w - 2 * margin);
    };
    const auto py = [&](double y) {
        const double ly = std::log10(std::max(y, 1e-300));
        return h - margin - (ly - y_lo) / (y_hi - y_lo) * (h - 2 * margin);
    };
    const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
    std::ostringstream os;
    os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << w << "' height='" << h << "'>\n";
    os << "<rect width='100%' height='100%' fill='white'/>\n";
    os << "<text x='" << w / 2 << "' y='24' text-anchor='middle' font-size='14'>" << title
       << "</text>\n";
    os << "<line x1='" << margin << "' y1='" << h - margin << "' x2='" << w - margin << "' y2='"
       << h - margin << "' stroke='black'/>\n";
    os << "<line x1='" << margin << "' y1='" << margin << "' x2='" << margin << "' y2='"
       << h - margin << "' stroke='black'/>\n";
    for (std::size_t s = 0; s < series.size(); ++s) {
        os << "<polyline fill='none' stroke='" << colors[s % 4] << "' stroke-width='1.5' points='";
        for (std::size_t i = 0; i < xs.size() && i < series[s].size(); ++i) {
            os << px(xs[i]) << "," << py(series[s][i]) << " ";
        }
        os << "'/>\n";
        if (s < labels.size()) {
            os << "<text x='" << w - margin + 4 << "' y='" << margin + 16 * (s + 1)
               << "' font-size='11' fill='" << colors[s % 4] << "' text-anchor='end'>"
               << labels[s] << "</text>\n";
        }
    }
    os << "<text x='" << w / 2 << "' y='" << h - 16
       << "' text-anchor='middle' font-size='11'>x</text>\n";
    os << "<text x='16' y='" << h / 2 << "' font-size='11' transform='rotate(-90 16 " << h / 2
       << ")' text-anchor='middle'>log10(y)</text>\n";
    os << "</svg>\n";
    write_file_atomic(path, os.str());
}

}  // namespace tdon
