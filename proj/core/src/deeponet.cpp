#include "tdon/deeponet.hpp"

#include <cmath>
#include <stdexcept>

#include "tdon/parallel.hpp"
#include "tdon/rng.hpp"

namespace tdon {

bool Box::contains(const Eigen::VectorXd& y, double slack) const {
    if (y.size() != lo.size()) return false;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        if (y(i) < lo(i) - slack || y(i) > hi(i) + slack) return false;
    }
    return true;
}

Box make_box(Eigen::VectorXd lo, Eigen::VectorXd hi) {
    if (lo.size() != hi.size() || lo.size() == 0) {
        throw std::invalid_argument("box: bounds must be non-empty and of equal length");
    }
    for (Eigen::Index i = 0; i < lo.size(); ++i) {
        if (!(lo(i) <= hi(i))) throw std::invalid_argument("box: lo <= hi required");
    }
    return Box{std::move(lo), std::move(hi)};
}

std::vector<Eigen::VectorXd> tensor_grid(const Box& box, int points_per_axis) {
    if (points_per_axis < 1) throw std::invalid_argument("tensor_grid: points >= 1");
    const int d = box.dim();
    std::size_t total = 1;
    for (int i = 0; i < d; ++i) total *= static_cast<std::size_t>(points_per_axis);
    std::vector<Eigen::VectorXd> grid;
    grid.reserve(total);
    std::vector<int> idx(static_cast<std::size_t>(d), 0);
    for (std::size_t n = 0; n < total; ++n) {
        Eigen::VectorXd y(d);
        for (int i = 0; i < d; ++i) {
            const double t = points_per_axis == 1
                                 ? 0.5
                                 : static_cast<double>(idx[static_cast<std::size_t>(i)]) /
                                       (points_per_axis - 1);
            y(i) = box.lo(i) + t * (box.hi(i) - box.lo(i));
        }
        grid.push_back(std::move(y));
        for (int i = d - 1; i >= 0; --i) {
            if (++idx[static_cast<std::size_t>(i)] < points_per_axis) break;
            idx[static_cast<std::size_t>(i)] = 0;
        }
    }
    return grid;
}

TrunkNetwork make_trunk(std::vector<Eigen::VectorXd> omegas, Eigen::VectorXd zetas,
                        Activation activation, std::optional<Eigen::MatrixXd> mixing) {
    if (omegas.empty()) throw std::invalid_argument("trunk: latent dim must be >= 1");
    const auto d = omegas.front().size();
    if (d < 1) throw std::invalid_argument("trunk: input dim must be >= 1");
    for (const auto& w : omegas) {
        if (w.size() != d) throw std::invalid_argument("trunk: inconsistent direction dims");
    }
    if (zetas.size() != static_cast<Eigen::Index>(omegas.size())) {
        throw std::invalid_argument("trunk: zeta count must equal latent dim");
    }
    if (mixing && (mixing->rows() != static_cast<Eigen::Index>(omegas.size()) ||
                   mixing->cols() != static_cast<Eigen::Index>(omegas.size()))) {
        throw std::invalid_argument("trunk: mixing matrix must be p x p");
    }
    TrunkNetwork t;
    t.omegas = std::move(omegas);
    t.zetas = std::move(zetas);
    t.activation = activation;
    t.mixing = std::move(mixing);
    return t;
}

TrunkNetwork random_trunk(int input_dim, int latent_dim, Activation activation,
                          std::uint64_t seed, bool with_mixing) {
    if (input_dim < 1 || latent_dim < 1) throw std::invalid_argument("trunk: dims >= 1");
    Rng rng(seed);
    const double s = 1.0 / std::sqrt(static_cast<double>(input_dim));
    std::vector<Eigen::VectorXd> omegas;
    omegas.reserve(static_cast<std::size_t>(latent_dim));
    for (int k = 0; k < latent_dim; ++k) {
        Eigen::VectorXd w(input_dim);
        for (int i = 0; i < input_dim; ++i) w(i) = rng.uniform(-s, s);
        omegas.push_back(std::move(w));
    }
    Eigen::VectorXd zetas(latent_dim);
    for (int k = 0; k < latent_dim; ++k) zetas(k) = rng.uniform(-s, s);
    std::optional<Eigen::MatrixXd> mixing;
    if (with_mixing) {
        const double sm = 1.0 / std::sqrt(static_cast<double>(latent_dim));
        Eigen::MatrixXd m(latent_dim, latent_dim);
        for (int i = 0; i < latent_dim; ++i)
            for (int j = 0; j < latent_dim; ++j) m(i, j) = rng.uniform(-sm, sm);
        mixing = std::move(m);
    }
    return make_trunk(std::move(omegas), std::move(zetas), activation, std::move(mixing));
}

Eigen::VectorXd trunk_values(const TrunkNetwork& trunk, const Eigen::VectorXd& y) {
    if (y.size() != trunk.input_dim()) {
        throw std::invalid_argument("trunk: point dimension mismatch");
    }
    const int p = trunk.latent_dim();
    Eigen::VectorXd t(p);
    for (int k = 0; k < p; ++k) {
        t(k) = activate(trunk.activation,
                        trunk.omegas[static_cast<std::size_t>(k)].dot(y) + trunk.zetas(k));
    }
    if (!trunk.mixing) return t;
    // fixed-order accumulation, matching the combine loop in evaluate()
    Eigen::VectorXd mixed(p);
    for (int i = 0; i < p; ++i) {
        double acc = 0.0;
        for (int k = 0; k < p; ++k) acc += (*trunk.mixing)(i, k) * t(k);
        mixed(i) = acc;
    }
    return mixed;
}

Eigen::MatrixXd branch_matrix(const MeasurementSpace& space, const BranchNetwork& branch,
                              const SpaceElement& u) {
    if (branch.columns.empty()) throw std::invalid_argument("branch: no columns");
    Eigen::MatrixXd B(branch.output_dim(), branch.latent_dim());
    for (int k = 0; k < branch.latent_dim(); ++k) {
        B.col(k) = forward(space, branch.columns[static_cast<std::size_t>(k)], u);
    }
    return B;
}

TopologicalDeepONet make_deeponet(MeasurementSpace space, BranchNetwork branch,
                                  TrunkNetwork trunk, Box domain) {
    if (branch.columns.empty()) throw std::invalid_argument("deeponet: branch has no columns");
    if (branch.latent_dim() != trunk.latent_dim()) {
        throw std::invalid_argument("deeponet: branch and trunk latent dims differ");
    }
    const int m = branch.output_dim();
    for (const auto& col : branch.columns) {
        if (col.output_dim() != m) {
            throw std::invalid_argument("deeponet: branch columns must share output dim");
        }
        if (col.space_kind != space.kind) {
            throw std::invalid_argument("deeponet: branch column space mismatch");
        }
    }
    if (trunk.input_dim() != domain.dim()) {
        throw std::invalid_argument("deeponet: trunk input dim must match the domain box");
    }
    TopologicalDeepONet model;
    model.space = std::move(space);
    model.branch = std::move(branch);
    model.trunk = std::move(trunk);
    model.domain = std::move(domain);
    return model;
}

namespace {

// out_r = sum_k B(r,k) t_k, accumulated in k order. Kept as hand-written
// loops so the m = 1 case is bitwise identical to an inner product and
// evaluate_field is bitwise identical to the per-point loop.
Eigen::VectorXd combine(const Eigen::MatrixXd& B, const Eigen::VectorXd& t) {
    Eigen::VectorXd out(B.rows());
    for (Eigen::Index r = 0; r < B.rows(); ++r) {
        double acc = 0.0;
        for (Eigen::Index k = 0; k < B.cols(); ++k) acc += B(r, k) * t(k);
        out(r) = acc;
    }
    return out;
}

}  // namespace

Eigen::VectorXd evaluate(const TopologicalDeepONet& model, const SpaceElement& u,
                         const Eigen::VectorXd& y) {
    const Eigen::MatrixXd B = branch_matrix(model.space, model.branch, u);
    return combine(B, trunk_values(model.trunk, y));
}

Eigen::MatrixXd evaluate_field(const TopologicalDeepONet& model, const SpaceElement& u,
                               const std::vector<Eigen::VectorXd>& grid) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(grid.size()), model.output_dim());
    if (grid.empty()) return out;
    const Eigen::MatrixXd B = branch_matrix(model.space, model.branch, u);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        out.row(static_cast<Eigen::Index>(i)) = combine(B, trunk_values(model.trunk, grid[i]));
    }
    return out;
}

ErrorReport sup_error(const TopologicalDeepONet& model, const OperatorFn& reference,
                      const std::vector<FamilySample>& u_samples,
                      const std::vector<Eigen::VectorXd>& y_grid, int workers) {
    struct Partial {
        double sup = 0.0;
        double sum = 0.0;
        std::size_t argmax_y = 0;
    };
    std::vector<Partial> partials(u_samples.size());
    parallel_for(u_samples.size(), workers, [&](std::size_t i) {
        const auto& sample = u_samples[i];
        const Eigen::MatrixXd pred = evaluate_field(model, sample.element, y_grid);
        Partial p;
        for (std::size_t j = 0; j < y_grid.size(); ++j) {
            const Eigen::VectorXd truth = reference(sample.element, y_grid[j]);
            const double err =
                (truth - pred.row(static_cast<Eigen::Index>(j)).transpose())
                    .lpNorm<Eigen::Infinity>();
            p.sum += err;
            if (err > p.sup) {
                p.sup = err;
                p.argmax_y = j;
            }
        }
        partials[i] = p;
    });

    ErrorReport report;
    report.samples = u_samples.size() * y_grid.size();
    if (report.samples == 0) return report;
    double sum = 0.0;
    std::size_t best_u = 0;
    for (std::size_t i = 0; i < partials.size(); ++i) {
        sum += partials[i].sum;
        if (partials[i].sup > report.sup) {
            report.sup = partials[i].sup;
            best_u = i;
        }
    }
    report.mean = sum / static_cast<double>(report.samples);
    report.argmax_c = u_samples[best_u].c;
    report.argmax_y = y_grid[partials[best_u].argmax_y];
    return report;
}

}  // namespace tdon
