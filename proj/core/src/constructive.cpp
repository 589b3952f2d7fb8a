#include "tdon/constructive.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tdon/hermite.hpp"
#include "tdon/linalg.hpp"
#include "tdon/parallel.hpp"
#include "tdon/rng.hpp"

namespace tdon {

namespace {

// Quantize a tolerance down to {1,3} x 10^k so approx_exp cache entries are
// shared across coefficient fits with nearby budgets.
double quantize_tol(double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
    const double decade = std::pow(10.0, std::floor(std::log10(tol)));
    return 3.0 * decade <= tol ? 3.0 * decade : decade;
}

std::pair<double, double> padded_range(double lo, double hi, double padding) {
    double span = hi - lo;
    if (span < 1e-9) {
        const double widen = std::max(1e-6, 1e-6 * std::abs(lo));
        return {lo - widen, hi + widen};
    }
    return {lo - padding * span, hi + padding * span};
}

}  // namespace

ExpDictionary build_exp_dictionary(const MeasurementSpace& space,
                                   const std::vector<FamilySample>& train,
                                   const ExpDictionaryOptions& options) {
    if (options.size < 1) throw std::invalid_argument("exp dictionary: size >= 1");
    if (train.empty()) throw std::invalid_argument("exp dictionary: empty training sample");

    ExpDictionary dict;
    dict.functionals.push_back(zero_functional(space));
    dict.ranges.push_back(padded_range(0.0, 0.0, options.range_padding));

    Rng rng(options.seed);
    const int dim = space.dim();
    for (int i = 1; i < options.size; ++i) {
        Eigen::VectorXd w(dim);
        for (int j = 0; j < dim; ++j) w(j) = rng.uniform(-1.0, 1.0);
        DualFunctional f{space.kind, std::move(w)};
        double max_abs = 0.0;
        for (const auto& s : train) max_abs = std::max(max_abs, std::abs(pair(space, f, s.element)));
        if (max_abs > 0.0) f.weights *= options.target_range / max_abs;
        double lo = 0.0, hi = 0.0;
        for (const auto& s : train) {
            const double v = pair(space, f, s.element);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        dict.ranges.push_back(padded_range(lo, hi, options.range_padding));
        dict.functionals.push_back(std::move(f));
    }
    return dict;
}

Eigen::MatrixXd exp_features(const MeasurementSpace& space, const ExpDictionary& dict,
                             const std::vector<FamilySample>& samples) {
    const auto M = static_cast<Eigen::Index>(dict.functionals.size());
    Eigen::MatrixXd F(static_cast<Eigen::Index>(samples.size()), M);
    for (std::size_t s = 0; s < samples.size(); ++s) {
        const Eigen::VectorXd pv = space.pairing_vector(samples[s].element.coeffs);
        for (Eigen::Index i = 0; i < M; ++i) {
            F(static_cast<Eigen::Index>(s), i) =
                std::exp(dict.functionals[static_cast<std::size_t>(i)].weights.dot(pv));
        }
    }
    return F;
}

UniversalFitResult fit_universal_presampled(const MeasurementSpace& space,
                                            const ExpDictionary& dictionary,
                                            const Eigen::MatrixXd& features_train,
                                            const Eigen::MatrixXd& targets_train,
                                            const std::vector<FamilySample>& validation,
                                            const Eigen::MatrixXd& features_validation,
                                            const Eigen::MatrixXd& targets_validation, double tol,
                                            Activation activation) {
    if (!(tol > 0.0)) throw std::invalid_argument("universal fit: tol > 0 required");
    const auto M = static_cast<Eigen::Index>(dictionary.functionals.size());
    const Eigen::Index m = targets_train.cols();

    UniversalFitResult result;
    result.dictionary = dictionary;
    result.dictionary.alphas = solve_damped_refined(features_train, targets_train);
    const Eigen::MatrixXd& alphas = result.dictionary.alphas;

    result.exp_stage_error =
        (features_validation * alphas - targets_validation).lpNorm<Eigen::Infinity>();

    // Per-term budget for replacing e^t: tol / (2 (1 + sum_i |alpha_i|)),
    // taken over the worst output coordinate so one expansion per functional
    // serves all coordinates.
    const double alpha_sum = alphas.cwiseAbs().colwise().sum().maxCoeff();
    const double exp_tol = quantize_tol(tol / (2.0 * (1.0 + alpha_sum)));

    FunctionalLayer layer;
    std::vector<double> biases;
    std::vector<std::pair<Eigen::Index, double>> unit_sources;  // (functional index, coeff)
    for (Eigen::Index i = 0; i < M; ++i) {
        const auto [lo, hi] = dictionary.ranges[static_cast<std::size_t>(i)];
        const RidgeFitResult exp_fit = approx_exp(lo, hi, activation, exp_tol);
        for (const auto& term : exp_fit.expansion.terms) {
            DualFunctional f = dictionary.functionals[static_cast<std::size_t>(i)];
            f.weights *= term.weight;  // w * l_i is again a functional
            layer.functionals.push_back(std::move(f));
            biases.push_back(term.shift);
            unit_sources.emplace_back(i, term.coefficient);
        }
    }
    const auto units = static_cast<Eigen::Index>(layer.functionals.size());
    layer.biases = Eigen::Map<const Eigen::VectorXd>(biases.data(), units);
    Eigen::MatrixXd output(m, units);
    for (Eigen::Index u = 0; u < units; ++u) {
        const auto [i, c] = unit_sources[static_cast<std::size_t>(u)];
        for (Eigen::Index r = 0; r < m; ++r) output(r, u) = alphas(i, r) * c;
    }

    result.network =
        make_toponet(space, std::move(layer), {}, std::move(output), activation);

    double sup = 0.0;
    for (std::size_t s = 0; s < validation.size(); ++s) {
        const Eigen::VectorXd out = forward(space, result.network, validation[s].element);
        sup = std::max(
            sup, (out - targets_validation.row(static_cast<Eigen::Index>(s)).transpose())
                     .lpNorm<Eigen::Infinity>());
    }
    result.achieved_error = sup;
    result.tolerance_met = sup <= tol;
    return result;
}

UniversalFitResult build_universal_approximant(
    const MeasurementSpace& space,
    const std::function<Eigen::VectorXd(const SpaceElement&)>& target, int output_dim,
    const CompactFamily& family, int dictionary_size, double tol, UniversalFitOptions options) {
    if (output_dim < 1) throw std::invalid_argument("universal fit: output_dim >= 1");
    options.dictionary.size = dictionary_size;

    const std::vector<FamilySample> train = sample_family(family, options.train_scheme);
    const std::vector<FamilySample> validation = sample_family(family, options.validation_scheme);
    const ExpDictionary dict = build_exp_dictionary(space, train, options.dictionary);

    const auto eval_targets = [&](const std::vector<FamilySample>& samples) {
        Eigen::MatrixXd T(static_cast<Eigen::Index>(samples.size()), output_dim);
        for (std::size_t s = 0; s < samples.size(); ++s) {
            const Eigen::VectorXd g = target(samples[s].element);
            if (g.size() != output_dim) {
                throw std::invalid_argument("universal fit: target output dim mismatch");
            }
            T.row(static_cast<Eigen::Index>(s)) = g.transpose();
        }
        return T;
    };

    return fit_universal_presampled(space, dict, exp_features(space, dict, train),
                                    eval_targets(train), validation,
                                    exp_features(space, dict, validation),
                                    eval_targets(validation), tol, options.activation);
}

double grid_distance(const GridFunction& a, const GridFunction& b) {
    if (a.size() != b.size()) throw std::invalid_argument("grid_distance: length mismatch");
    return (a - b).lpNorm<Eigen::Infinity>();
}

std::vector<std::size_t> cover_image(const std::vector<GridFunction>& samples, double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("cover_image: delta > 0 required");
    std::vector<std::size_t> reps;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        bool covered = false;
        for (const std::size_t j : reps) {
            if (grid_distance(samples[i], samples[j]) <= delta) {
                covered = true;
                break;
            }
        }
        if (!covered) reps.push_back(i);
    }
    return reps;
}

Eigen::VectorXd partition_of_unity(const std::vector<GridFunction>& representatives, double delta,
                                   const GridFunction& h) {
    if (representatives.empty()) {
        throw std::invalid_argument("partition_of_unity: no representatives");
    }
    const auto M = static_cast<Eigen::Index>(representatives.size());
    Eigen::VectorXd psi(M);
    double total = 0.0;
    double nearest = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < M; ++j) {
        const double dist = grid_distance(representatives[static_cast<std::size_t>(j)], h);
        nearest = std::min(nearest, dist);
        psi(j) = std::max(0.0, 2.0 * delta - dist);
        total += psi(j);
    }
    if (total <= 0.0) {
        throw std::domain_error(
            "partition_of_unity: function lies outside every 2*delta ball (nearest "
            "representative at distance " +
            std::to_string(nearest) + ", delta = " + std::to_string(delta) + ")");
    }
    return psi / total;
}

Eigen::VectorXd evaluate_expansion(const SeparableExpansion& exp, const SpaceElement& u,
                                   const Eigen::VectorXd& y) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(exp.output_dim);
    for (std::size_t k = 0; k < exp.atoms.size(); ++k) {
        const double phi = activate(exp.activation, exp.atoms[k].omega.dot(y) + exp.atoms[k].zeta);
        out += phi * forward(exp.space, exp.coeff_nets[k], u);
    }
    return out;
}

namespace {

// Seeded trunk candidate atoms: unit directions (fixed +-1 in one dimension,
// normalized Gaussians otherwise) x log-spaced magnitudes, shifts tiling the
// projected range of the domain box.
std::vector<SeparableAtom> trunk_dictionary(const Box& domain, int atom_budget,
                                            std::uint64_t seed) {
    const int d = domain.dim();
    Rng rng(seed);
    std::vector<Eigen::VectorXd> directions;
    if (d == 1) {
        directions.push_back(Eigen::VectorXd::Constant(1, 1.0));
        directions.push_back(Eigen::VectorXd::Constant(1, -1.0));
    } else {
        const int n_dir = std::max(2, 2 * d);
        for (int i = 0; i < n_dir; ++i) {
            Eigen::VectorXd v(d);
            for (int j = 0; j < d; ++j) {
                // Box-Muller with the explicit uniform mapping
                const double u1 = std::max(rng.unit(), 1e-300);
                const double u2 = rng.unit();
                v(j) = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
            }
            const double n = v.norm();
            directions.push_back(n > 0 ? Eigen::VectorXd(v / n) : Eigen::VectorXd::Unit(d, 0));
        }
    }
    const double diam = (domain.hi - domain.lo).norm();
    const int n_dir = static_cast<int>(directions.size());
    const int n_mag = 4;
    const int n_shift = std::max(1, atom_budget / (n_dir * n_mag));

    std::vector<SeparableAtom> atoms;
    for (const auto& dir : directions) {
        for (int im = 0; im < n_mag; ++im) {
            const double mag = (1.0 / diam) * std::pow(32.0, static_cast<double>(im) / (n_mag - 1));
            const Eigen::VectorXd omega = mag * dir;
            // projected range of the box corners onto omega
            double p_lo = 0.0, p_hi = 0.0;
            for (int j = 0; j < d; ++j) {
                const double a = omega(j) * domain.lo(j);
                const double b = omega(j) * domain.hi(j);
                p_lo += std::min(a, b);
                p_hi += std::max(a, b);
            }
            for (int is = 0; is < n_shift; ++is) {
                const double t = n_shift == 1 ? 0.5 * (p_lo + p_hi)
                                              : p_lo + (p_hi - p_lo) * static_cast<double>(is) /
                                                           (n_shift - 1);
                atoms.push_back(SeparableAtom{omega, -t});
            }
        }
    }
    return atoms;
}

}  // namespace

std::pair<SeparableExpansion, SeparableBuildReport> build_separable_approximant(
    const OperatorFn& oracle, int output_dim, const CompactFamily& family, const Box& domain,
    double epsilon, const SeparableBuildOptions& options) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("separable build: epsilon > 0 required");
    if (output_dim < 1) throw std::invalid_argument("separable build: output_dim >= 1");
    const MeasurementSpace& space = family.space;
    const double delta = epsilon / 4.0;
    const int m = output_dim;

    SeparableBuildReport report;
    report.epsilon = epsilon;
    report.delta = delta;
    report.trunk_seed = options.trunk_seed;
    report.dictionary_seed = options.dictionary.seed;

    // --- sample V and evaluate W = G(V) on the y-grid -----------------------
    const std::vector<Eigen::VectorXd> y_grid = tensor_grid(domain, options.y_points_per_axis);
    const auto n_y = static_cast<Eigen::Index>(y_grid.size());
    const std::vector<FamilySample> train = sample_family(family, options.train_scheme);
    const std::vector<FamilySample> validation = sample_family(family, options.validation_scheme);
    report.train_count = static_cast<int>(train.size());
    report.validation_count = static_cast<int>(validation.size());

    const auto evaluate_on_grid = [&](const std::vector<FamilySample>& samples) {
        std::vector<GridFunction> out(samples.size());
        parallel_for(samples.size(), options.workers, [&](std::size_t i) {
            GridFunction h(n_y * m);
            for (Eigen::Index q = 0; q < n_y; ++q) {
                const Eigen::VectorXd g = oracle(samples[i].element, y_grid[q]);
                if (g.size() != m) {
                    throw std::invalid_argument("separable build: oracle output dim mismatch");
                }
                h.segment(q * m, m) = g;
            }
            out[i] = std::move(h);
        });
        return out;
    };
    const std::vector<GridFunction> w_train = evaluate_on_grid(train);
    const std::vector<GridFunction> w_validation = evaluate_on_grid(validation);

    // --- delta-net over the image -------------------------------------------
    const std::vector<std::size_t> rep_idx = cover_image(w_train, delta);
    std::vector<GridFunction> representatives;
    representatives.reserve(rep_idx.size());
    for (const auto j : rep_idx) representatives.push_back(w_train[j]);
    const int n_reps = static_cast<int>(representatives.size());
    report.cover_size = n_reps;

    // --- per-representative ridge fits on the y-grid ------------------------
    const std::vector<SeparableAtom> atoms =
        trunk_dictionary(domain, options.trunk_atoms, options.trunk_seed);
    const auto N = static_cast<Eigen::Index>(atoms.size());
    report.atom_count = static_cast<int>(N);

    Eigen::MatrixXd phi(n_y, N);  // atom values on the grid
    for (Eigen::Index q = 0; q < n_y; ++q) {
        for (Eigen::Index k = 0; k < N; ++k) {
            phi(q, k) = activate(options.activation,
                                 atoms[static_cast<std::size_t>(k)].omega.dot(y_grid[q]) +
                                     atoms[static_cast<std::size_t>(k)].zeta);
        }
    }

    // A_j: per representative the N x m coefficient block (zero-padding is
    // implicit: every representative is expressed over the shared atom union).
    std::vector<Eigen::MatrixXd> rep_coeffs(representatives.size());
    report.ridge_errors.assign(representatives.size(), 0.0);
    {
        // one factorization shared by every representative fit
        Eigen::MatrixXd targets(n_y, static_cast<Eigen::Index>(representatives.size()) * m);
        for (std::size_t j = 0; j < representatives.size(); ++j) {
            for (Eigen::Index q = 0; q < n_y; ++q) {
                targets.block(q, static_cast<Eigen::Index>(j) * m, 1, m) =
                    representatives[j].segment(q * m, m).transpose();
            }
        }
        const Eigen::MatrixXd solution = solve_least_squares(phi, targets);
        for (std::size_t j = 0; j < representatives.size(); ++j) {
            rep_coeffs[j] = solution.middleCols(static_cast<Eigen::Index>(j) * m, m);
            const Eigen::MatrixXd residual =
                phi * rep_coeffs[j] -
                Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                               Eigen::RowMajor>>(representatives[j].data(), n_y, m);
            report.ridge_errors[j] = residual.cwiseAbs().maxCoeff();
            report.ridge_slack_sum += std::max(0.0, report.ridge_errors[j] - delta);
        }
    }

    // --- coefficient targets through the partition of unity -----------------
    const auto coefficient_targets = [&](const std::vector<GridFunction>& w) {
        Eigen::MatrixXd targets(static_cast<Eigen::Index>(w.size()), N * m);
        for (std::size_t i = 0; i < w.size(); ++i) {
            const Eigen::VectorXd eta = partition_of_unity(representatives, delta, w[i]);
            Eigen::MatrixXd c = Eigen::MatrixXd::Zero(N, m);
            for (std::size_t j = 0; j < representatives.size(); ++j) {
                c += eta(static_cast<Eigen::Index>(j)) * rep_coeffs[j];
            }
            for (Eigen::Index k = 0; k < N; ++k) {
                targets.block(static_cast<Eigen::Index>(i), k * m, 1, m) = c.row(k);
            }
        }
        return targets;
    };
    const Eigen::MatrixXd c_train = coefficient_targets(w_train);
    const Eigen::MatrixXd c_validation = coefficient_targets(w_validation);

    // --- audit of the representation stage ----------------------------------
    report.audit_bound = 2.0 * delta + report.ridge_slack_sum;
    for (std::size_t i = 0; i < w_train.size(); ++i) {
        GridFunction blended(n_y * m);
        for (Eigen::Index q = 0; q < n_y; ++q) {
            for (Eigen::Index r = 0; r < m; ++r) {
                double acc = 0.0;
                for (Eigen::Index k = 0; k < N; ++k) {
                    acc += c_train(static_cast<Eigen::Index>(i), k * m + r) * phi(q, k);
                }
                blended(q * m + r) = acc;
            }
        }
        report.audit_max = std::max(report.audit_max, grid_distance(blended, w_train[i]));
    }
    report.audit_ok = report.audit_max <= report.audit_bound;

    // --- branch fits over a shared exponential dictionary -------------------
    const ExpDictionary dict = build_exp_dictionary(space, train, options.dictionary);
    const Eigen::MatrixXd f_train = exp_features(space, dict, train);
    const Eigen::MatrixXd f_validation = exp_features(space, dict, validation);

    Eigen::VectorXd atom_sup(N);  // M_k = max_grid |phi_k|
    for (Eigen::Index k = 0; k < N; ++k) atom_sup(k) = phi.col(k).cwiseAbs().maxCoeff();

    report.branch_errors.assign(static_cast<std::size_t>(N), 0.0);
    report.branch_tolerance_min = std::numeric_limits<double>::infinity();
    std::vector<TopoNetwork> coeff_nets(static_cast<std::size_t>(N));
    std::vector<double> branch_slack(static_cast<std::size_t>(N), 0.0);
    std::vector<int> branch_flag(static_cast<std::size_t>(N), 0);
    parallel_for(static_cast<std::size_t>(N), options.workers, [&](std::size_t k) {
        const auto ki = static_cast<Eigen::Index>(k);
        const double tol_k =
            delta / (static_cast<double>(N) * (atom_sup(ki) + 1.0) * static_cast<double>(m));
        UniversalFitResult fit = fit_universal_presampled(
            space, dict, f_train, c_train.middleCols(ki * m, m), validation, f_validation,
            c_validation.middleCols(ki * m, m), tol_k, options.activation);
        report.branch_errors[k] = fit.achieved_error;
        branch_slack[k] = atom_sup(ki) * std::max(0.0, fit.achieved_error - tol_k);
        branch_flag[k] = fit.tolerance_met ? 0 : 1;
        coeff_nets[k] = std::move(fit.network);
    });
    for (Eigen::Index k = 0; k < N; ++k) {
        const double tol_k =
            delta / (static_cast<double>(N) * (atom_sup(k) + 1.0) * static_cast<double>(m));
        report.branch_tolerance_min = std::min(report.branch_tolerance_min, tol_k);
        report.branch_slack_weighted += branch_slack[static_cast<std::size_t>(k)];
        report.branch_fits_flagged += branch_flag[static_cast<std::size_t>(k)];
    }

    // --- assemble and measure ------------------------------------------------
    SeparableExpansion expansion;
    expansion.space = space;
    expansion.activation = options.activation;
    expansion.atoms = atoms;
    expansion.coeff_nets = std::move(coeff_nets);
    expansion.output_dim = m;
    expansion.domain = domain;
    expansion.representatives = representatives;
    expansion.delta = delta;

    report.theoretical_budget =
        3.0 * delta + report.ridge_slack_sum + report.branch_slack_weighted;

    // empirical sup on validation samples; branch values computed once per u
    double sup = 0.0, sum = 0.0;
    std::vector<double> per_sample_sup(validation.size(), 0.0);
    std::vector<double> per_sample_sum(validation.size(), 0.0);
    parallel_for(validation.size(), options.workers, [&](std::size_t i) {
        Eigen::MatrixXd b(m, N);
        for (Eigen::Index k = 0; k < N; ++k) {
            b.col(k) = forward(space, expansion.coeff_nets[static_cast<std::size_t>(k)],
                               validation[i].element);
        }
        double local_sup = 0.0, local_sum = 0.0;
        for (Eigen::Index q = 0; q < n_y; ++q) {
            Eigen::VectorXd pred = Eigen::VectorXd::Zero(m);
            for (Eigen::Index k = 0; k < N; ++k) pred += phi(q, k) * b.col(k);
            const double err =
                (pred - w_validation[i].segment(q * m, m)).lpNorm<Eigen::Infinity>();
            local_sup = std::max(local_sup, err);
            local_sum += err;
        }
        per_sample_sup[i] = local_sup;
        per_sample_sum[i] = local_sum;
    });
    for (std::size_t i = 0; i < validation.size(); ++i) {
        sup = std::max(sup, per_sample_sup[i]);
        sum += per_sample_sum[i];
    }
    report.empirical_sup = sup;
    report.empirical_mean =
        validation.empty() ? 0.0 : sum / (static_cast<double>(validation.size()) * n_y);
    report.epsilon_met = report.empirical_sup <= epsilon;
    report.within_budget = report.empirical_sup <= report.theoretical_budget;

    return {std::move(expansion), std::move(report)};
}

std::pair<SeparableExpansion, SeparableBuildReport> build_separable_approximant(
    const OperatorOracle& oracle, const CompactFamily& family, double epsilon,
    const SeparableBuildOptions& options) {
    return build_separable_approximant(oracle.as_fn(), oracle.output_dim(), family,
                                       oracle.domain(), epsilon, options);
}

TopologicalDeepONet expansion_to_deeponet(const SeparableExpansion& exp) {
    if (exp.atoms.empty()) throw std::invalid_argument("expansion_to_deeponet: no atoms");
    std::vector<Eigen::VectorXd> omegas;
    Eigen::VectorXd zetas(static_cast<Eigen::Index>(exp.atoms.size()));
    for (std::size_t k = 0; k < exp.atoms.size(); ++k) {
        omegas.push_back(exp.atoms[k].omega);
        zetas(static_cast<Eigen::Index>(k)) = exp.atoms[k].zeta;
    }
    BranchNetwork branch{exp.coeff_nets};
    return make_deeponet(exp.space, std::move(branch),
                         make_trunk(std::move(omegas), std::move(zetas), exp.activation),
                         exp.domain);
}

namespace {

SensorDiscretization run_doubling_search(
    const std::function<std::pair<Eigen::VectorXd, Eigen::VectorXd>(int)>& rule_for,
    const std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)>& certify,
    double delta, int max_sensors) {
    SensorDiscretization best;
    best.certified_error = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= max_sensors; k *= 2) {
        auto [points, weights] = rule_for(k);
        const double err = certify(points, weights);
        best.search_history.emplace_back(k, err);
        if (err < best.certified_error) {
            best.points = points;
            best.weights = weights;
            best.certified_error = err;
        }
        if (err <= delta) {
            best.points = std::move(points);
            best.weights = std::move(weights);
            best.certified_error = err;
            best.tolerance_met = true;
            break;
        }
    }
    return best;
}

}  // namespace

SensorDiscretization discretize_functional(const AnalyticFamily& family,
                                           const AnalyticFunction& density, double delta,
                                           const DiscretizeOptions& options) {
    if (!(delta > 0.0)) throw std::invalid_argument("discretize: delta > 0 required");
    const MeasurementSpace& space = family.family().space;
    // the functional in node form, defining the reference pairing
    Eigen::VectorXd g(space.dim());
    for (int q = 0; q < space.dim(); ++q) g(q) = density.value(space.quadrature.nodes(q));
    const DualFunctional f = make_functional(space, std::move(g));

    const std::vector<FamilySample> samples = sample_family(family.family(), options.sample_scheme);
    std::vector<double> reference(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        reference[i] = pair(space, f, samples[i].element);
    }
    std::vector<Eigen::VectorXd> coefficients(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        coefficients[i] = family.coefficients_of(samples[i].element);
    }
    const auto& forms = family.basis_forms();

    const auto rule_for = [&](int k) {
        const QuadratureRule rule = gauss_legendre(k, space.interval_lo, space.interval_hi);
        Eigen::VectorXd weights(k);
        for (int j = 0; j < k; ++j) weights(j) = rule.weights(j) * density.value(rule.nodes(j));
        return std::make_pair(rule.nodes, weights);
    };
    const auto certify = [&](const Eigen::VectorXd& points, const Eigen::VectorXd& weights) {
        double worst = 0.0;
        for (std::size_t i = 0; i < samples.size(); ++i) {
            double acc = 0.0;
            for (Eigen::Index j = 0; j < points.size(); ++j) {
                double u_val = 0.0;
                for (std::size_t b = 0; b < forms.size(); ++b) {
                    u_val += coefficients[i](static_cast<Eigen::Index>(b)) *
                             forms[b].value(points(j));
                }
                acc += weights(j) * u_val;
            }
            worst = std::max(worst, std::abs(reference[i] - acc));
        }
        return worst;
    };
    return run_doubling_search(rule_for, certify, delta, options.max_sensors);
}

SensorDiscretization discretize_functional(const MeasurementSpace& space,
                                           const CompactFamily& family, const DualFunctional& f,
                                           double delta, const DiscretizeOptions& options) {
    if (space.kind != SpaceKind::SchwartzHermite) {
        throw std::invalid_argument(
            "discretize: this overload requires a SchwartzHermite space (use the analytic-family "
            "overload for L2Interval)");
    }
    if (!(delta > 0.0)) throw std::invalid_argument("discretize: delta > 0 required");
    const std::vector<FamilySample> samples = sample_family(family, options.sample_scheme);
    std::vector<double> reference(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        reference[i] = pair(space, f, samples[i].element);
    }
    const int H = space.hermite_order;

    const auto rule_for = [&](int k) {
        const QuadratureRule rule = gauss_hermite(k);
        // xi_j = w_j e^{x_j^2} T(x_j) with T the distribution's function form;
        // e^{x^2} h_n(x) = e^{x^2/2} H~_n(x) keeps the products bounded.
        const Eigen::MatrixXd polys = hermite_poly_table(rule.nodes, H);
        Eigen::VectorXd weights(k);
        for (int j = 0; j < k; ++j) {
            const double t_poly = polys.row(j).dot(f.weights);
            weights(j) = rule.weights(j) * std::exp(0.5 * rule.nodes(j) * rule.nodes(j)) * t_poly;
        }
        return std::make_pair(rule.nodes, weights);
    };
    const auto certify = [&](const Eigen::VectorXd& points, const Eigen::VectorXd& weights) {
        const Eigen::MatrixXd h_table = hermite_function_table(points, H);
        double worst = 0.0;
        for (std::size_t i = 0; i < samples.size(); ++i) {
            double acc = 0.0;
            for (Eigen::Index j = 0; j < points.size(); ++j) {
                acc += weights(j) * h_table.row(j).dot(samples[i].element.coeffs);
            }
            worst = std::max(worst, std::abs(reference[i] - acc));
        }
        return worst;
    };
    return run_doubling_search(rule_for, certify, delta, options.max_sensors);
}

double validate_discretization(const AnalyticFamily& family, const AnalyticFunction& density,
                               const SensorDiscretization& disc, const SampleScheme& scheme) {
    const MeasurementSpace& space = family.family().space;
    Eigen::VectorXd g(space.dim());
    for (int q = 0; q < space.dim(); ++q) g(q) = density.value(space.quadrature.nodes(q));
    const DualFunctional f = make_functional(space, std::move(g));

    double worst = 0.0;
    for (const auto& sample : sample_family(family.family(), scheme)) {
        const double reference = pair(space, f, sample.element);
        double acc = 0.0;
        for (Eigen::Index j = 0; j < disc.points.size(); ++j) {
            acc += disc.weights(j) * family.value_at(sample.element, disc.points(j));
        }
        worst = std::max(worst, std::abs(reference - acc));
    }
    return worst;
}

}  // namespace tdon
