#pragma once

#include <map>
#include <optional>
#include <string>

#include "tdon/config.hpp"

namespace tdon {

struct HarnessOptions {
    std::optional<std::uint64_t> seed_override;
    std::optional<std::string> output_dir_override;
    bool best_effort = false;
    int workers = 1;
};

/// What a subcommand produced: artifact paths plus the flat numeric metrics
/// the JSON report carries (every metric is recomputable from the persisted
/// artifacts). `flagged` means some tolerance audit failed; the CLI exits
/// nonzero on it unless --best-effort.
struct RunOutcome {
    bool flagged = false;
    std::string report_path;
    std::string model_path;
    std::map<std::string, double> metrics;
};

RunOutcome run_construct(const ExperimentConfig& config, const HarnessOptions& options = {});
RunOutcome run_train(const ExperimentConfig& config, const HarnessOptions& options = {});
RunOutcome run_evaluate(const std::string& model_path, const ExperimentConfig& config,
                        const HarnessOptions& options = {});
RunOutcome run_discretize(const ExperimentConfig& config, const HarnessOptions& options = {});
RunOutcome run_sweep(const ExperimentConfig& config, const HarnessOptions& options = {});

/// Compares a topological network on the coordinate-embedding space (d x 1
/// matrices) against an independently coded dense reference MLP with the
/// same parameters, over `probes` random inputs. Prints one line and returns
/// the max componentwise deviation.
double run_reduction_check(int dim, int width, int probes, std::uint64_t seed, bool verbose = true);

/// Minimal polyline plot, one series per column of ys; log-scaled y axis.
void write_svg_line_plot(const std::string& path, const std::string& title,
                         const std::vector<double>& xs,
                         const std::vector<std::vector<double>>& series,
                         const std::vector<std::string>& labels);

}  // namespace tdon
