#include "tdon/training.hpp"

#include <cmath>
#include <stdexcept>

#include "tdon/rng.hpp"
#include "tdon/toponet.hpp"

namespace tdon {

OperatorDataset generate_dataset(const OperatorFn& oracle, const CompactFamily& family, int n_u,
                                 const std::vector<Eigen::VectorXd>& y_grid, std::uint64_t seed,
                                 double split_ratio) {
    if (n_u < 2) throw std::invalid_argument("generate_dataset: n_u >= 2");
    if (y_grid.empty()) throw std::invalid_argument("generate_dataset: empty y grid");
    if (!(split_ratio > 0.0 && split_ratio < 1.0)) {
        throw std::invalid_argument("generate_dataset: split_ratio in (0,1)");
    }
    const std::vector<FamilySample> samples =
        sample_family(family, SampleScheme::uniform_random(n_u, seed));
    const int n_train =
        std::clamp(static_cast<int>(std::lround(split_ratio * n_u)), 1, n_u - 1);

    OperatorDataset ds;
    for (int i = 0; i < n_u; ++i) {
        auto& bucket = i < n_train ? ds.train : ds.validation;
        for (const auto& y : y_grid) {
            const Eigen::VectorXd g = oracle(samples[static_cast<std::size_t>(i)].element, y);
            bucket.push_back(DataRecord{samples[static_cast<std::size_t>(i)].c,
                                        samples[static_cast<std::size_t>(i)].element, y, g});
        }
    }
    return ds;
}

namespace {

int trunk_parameter_count(const TrunkNetwork& trunk) {
    int n = trunk.latent_dim() * trunk.input_dim() + trunk.latent_dim();
    if (trunk.mixing) n += trunk.latent_dim() * trunk.latent_dim();
    return n;
}

struct TrunkActivations {
    Eigen::VectorXd pre;  // omega_k . y + zeta_k
    Eigen::VectorXd z;    // sigma(pre)
    Eigen::VectorXd t;    // mixing applied (== z when absent)
};

TrunkActivations trunk_forward(const TrunkNetwork& trunk, const Eigen::VectorXd& y) {
    TrunkActivations acts;
    const int p = trunk.latent_dim();
    acts.pre.resize(p);
    acts.z.resize(p);
    for (int k = 0; k < p; ++k) {
        acts.pre(k) = trunk.omegas[static_cast<std::size_t>(k)].dot(y) + trunk.zetas(k);
        acts.z(k) = activate(trunk.activation, acts.pre(k));
    }
    acts.t = trunk.mixing ? Eigen::VectorXd(*trunk.mixing * acts.z) : acts.z;
    return acts;
}

struct NetActivations {
    Eigen::VectorXd pairing;           // P u
    std::vector<Eigen::VectorXd> pre;  // preactivation per layer
    std::vector<Eigen::VectorXd> z;    // activation per layer
};

NetActivations net_forward(const MeasurementSpace& space, const TopoNetwork& net,
                           const Eigen::VectorXd& pairing) {
    NetActivations acts;
    acts.pairing = pairing;
    const int r = net.functional_layer.width();
    Eigen::VectorXd pre(r);
    for (int i = 0; i < r; ++i) {
        pre(i) = net.functional_layer.functionals[static_cast<std::size_t>(i)].weights.dot(
                     pairing) -
                 net.functional_layer.biases(i);
    }
    Eigen::VectorXd z(r);
    for (int i = 0; i < r; ++i) z(i) = activate(net.activation, pre(i));
    acts.pre.push_back(pre);
    acts.z.push_back(z);
    for (const auto& layer : net.hidden) {
        pre = layer.weights * acts.z.back() - layer.biases;
        z.resize(pre.size());
        for (Eigen::Index i = 0; i < pre.size(); ++i) z(i) = activate(net.activation, pre(i));
        acts.pre.push_back(pre);
        acts.z.push_back(z);
    }
    (void)space;
    return acts;
}

// Gradient of (upstream . net_output) with respect to the net parameters,
// appended into grad[offset ... offset+count).
void net_backward(const TopoNetwork& net, const NetActivations& acts,
                  const Eigen::VectorXd& upstream, bool freeze_functionals,
                  Eigen::VectorXd& grad, Eigen::Index offset) {
    const auto layers = net.hidden.size();
    // output matrix: d/dA_L = upstream z_{L-1}^T
    const Eigen::VectorXd& z_last = acts.z.back();
    Eigen::Index at = offset;
    // functional weights
    const int r = net.functional_layer.width();
    const Eigen::Index dim = acts.pairing.size();

    // backprop through the chain first
    Eigen::VectorXd dz = net.output_matrix.transpose() * upstream;
    std::vector<Eigen::VectorXd> dpre(layers + 1);
    for (std::size_t l = layers; l-- > 0;) {
        // here dz refers to z_{l+1}
        Eigen::VectorXd dp = dz;
        for (Eigen::Index i = 0; i < dp.size(); ++i) {
            dp(i) *= activate_prime(net.activation, acts.pre[l + 1](i));
        }
        dpre[l + 1] = dp;
        dz = net.hidden[l].weights.transpose() * dp;
    }
    Eigen::VectorXd dp0 = dz;
    for (Eigen::Index i = 0; i < dp0.size(); ++i) {
        dp0(i) *= activate_prime(net.activation, acts.pre[0](i));
    }
    dpre[0] = dp0;

    // functional weights: d pre0_i / d w_i = pairing
    for (int i = 0; i < r; ++i) {
        if (!freeze_functionals) {
            grad.segment(at, dim) += dpre[0](i) * acts.pairing;
        }
        at += dim;
    }
    // functional biases (subtracted)
    grad.segment(at, r) -= dpre[0];
    at += r;
    // hidden layers
    for (std::size_t l = 0; l < layers; ++l) {
        const Eigen::MatrixXd dW = dpre[l + 1] * acts.z[l].transpose();
        for (Eigen::Index i = 0; i < dW.rows(); ++i) {
            grad.segment(at, dW.cols()) += dW.row(i);
            at += dW.cols();
        }
        grad.segment(at, dpre[l + 1].size()) -= dpre[l + 1];
        at += dpre[l + 1].size();
    }
    // output matrix, row-major
    for (Eigen::Index i = 0; i < net.output_matrix.rows(); ++i) {
        grad.segment(at, z_last.size()) += upstream(i) * z_last;
        at += z_last.size();
    }
}

}  // namespace

Eigen::VectorXd model_parameters(const TopologicalDeepONet& model) {
    std::vector<double> flat;
    for (const auto& col : model.branch.columns) {
        const Eigen::VectorXd v = parameter_vector(col);
        flat.insert(flat.end(), v.data(), v.data() + v.size());
    }
    for (const auto& w : model.trunk.omegas) {
        flat.insert(flat.end(), w.data(), w.data() + w.size());
    }
    flat.insert(flat.end(), model.trunk.zetas.data(),
                model.trunk.zetas.data() + model.trunk.zetas.size());
    if (model.trunk.mixing) {
        const auto& mix = *model.trunk.mixing;
        for (Eigen::Index i = 0; i < mix.rows(); ++i) {
            for (Eigen::Index j = 0; j < mix.cols(); ++j) flat.push_back(mix(i, j));
        }
    }
    return Eigen::Map<const Eigen::VectorXd>(flat.data(), static_cast<Eigen::Index>(flat.size()));
}

TopologicalDeepONet model_with_parameters(const TopologicalDeepONet& model,
                                          const Eigen::VectorXd& params) {
    TopologicalDeepONet out = model;
    Eigen::Index at = 0;
    for (auto& col : out.branch.columns) {
        const int n = parameter_count(col);
        col = with_parameters(col, params.segment(at, n));
        at += n;
    }
    for (auto& w : out.trunk.omegas) {
        w = params.segment(at, w.size());
        at += w.size();
    }
    out.trunk.zetas = params.segment(at, out.trunk.zetas.size());
    at += out.trunk.zetas.size();
    if (out.trunk.mixing) {
        auto& mix = *out.trunk.mixing;
        for (Eigen::Index i = 0; i < mix.rows(); ++i) {
            for (Eigen::Index j = 0; j < mix.cols(); ++j) mix(i, j) = params(at++);
        }
    }
    if (at != params.size()) {
        throw std::invalid_argument("model_with_parameters: parameter count mismatch");
    }
    return out;
}

double dataset_mse(const TopologicalDeepONet& model, const std::vector<DataRecord>& records) {
    if (records.empty()) return 0.0;
    double acc = 0.0;
    for (const auto& rec : records) {
        acc += (evaluate(model, rec.u, rec.y) - rec.g).squaredNorm();
    }
    return acc / static_cast<double>(records.size());
}

Eigen::VectorXd mse_gradient(const TopologicalDeepONet& model,
                             const std::vector<DataRecord>& records, bool freeze_functionals) {
    const Eigen::VectorXd params = model_parameters(model);
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(params.size());
    if (records.empty()) return grad;

    const int p = model.latent_dim();
    const int m = model.output_dim();
    std::vector<int> col_param_counts;
    Eigen::Index branch_params = 0;
    for (const auto& col : model.branch.columns) {
        col_param_counts.push_back(parameter_count(col));
        branch_params += col_param_counts.back();
    }
    const int d = model.trunk.input_dim();
    const double scale = 2.0 / static_cast<double>(records.size());

    for (const auto& rec : records) {
        const Eigen::VectorXd pairing = model.space.pairing_vector(rec.u.coeffs);
        std::vector<NetActivations> branch_acts;
        branch_acts.reserve(static_cast<std::size_t>(p));
        Eigen::MatrixXd b(m, p);
        for (int k = 0; k < p; ++k) {
            branch_acts.push_back(
                net_forward(model.space, model.branch.columns[static_cast<std::size_t>(k)],
                            pairing));
            b.col(k) = model.branch.columns[static_cast<std::size_t>(k)].output_matrix *
                       branch_acts.back().z.back();
        }
        const TrunkActivations trunk_acts = trunk_forward(model.trunk, rec.y);
        const Eigen::VectorXd residual = b * trunk_acts.t - rec.g;
        const Eigen::VectorXd dout = scale * residual;

        // branch columns: upstream for column k is dout * t_k
        Eigen::Index at = 0;
        for (int k = 0; k < p; ++k) {
            net_backward(model.branch.columns[static_cast<std::size_t>(k)],
                         branch_acts[static_cast<std::size_t>(k)], dout * trunk_acts.t(k),
                         freeze_functionals, grad, at);
            at += col_param_counts[static_cast<std::size_t>(k)];
        }
        // trunk: dt = B^T dout
        const Eigen::VectorXd dt = b.transpose() * dout;
        const Eigen::VectorXd dz =
            model.trunk.mixing ? Eigen::VectorXd(model.trunk.mixing->transpose() * dt) : dt;
        Eigen::VectorXd dpre(p);
        for (int k = 0; k < p; ++k) {
            dpre(k) = dz(k) * activate_prime(model.trunk.activation, trunk_acts.pre(k));
        }
        for (int k = 0; k < p; ++k) {
            grad.segment(branch_params + static_cast<Eigen::Index>(k) * d, d) += dpre(k) * rec.y;
        }
        grad.segment(branch_params + static_cast<Eigen::Index>(p) * d, p) += dpre;
        if (model.trunk.mixing) {
            const Eigen::Index mix_at = branch_params + static_cast<Eigen::Index>(p) * d + p;
            for (int i = 0; i < p; ++i) {
                grad.segment(mix_at + static_cast<Eigen::Index>(i) * p, p) +=
                    dt(i) * trunk_acts.z;
            }
        }
    }
    return grad;
}

TrainResult train(const TopologicalDeepONet& model, const OperatorDataset& dataset,
                  const TrainConfig& config) {
    if (config.epochs < 1) throw std::invalid_argument("train: epochs >= 1");
    if (config.batch_size < 1) throw std::invalid_argument("train: batch_size >= 1");
    if (!(config.learning_rate > 0.0)) throw std::invalid_argument("train: learning_rate > 0");
    if (dataset.train.empty()) throw std::invalid_argument("train: empty training split");
    for (const auto& rec : dataset.train) {
        if (rec.u.kind != model.space.kind) {
            throw std::invalid_argument("train: dataset space does not match the model");
        }
    }

    Eigen::VectorXd params = model_parameters(model);
    Eigen::VectorXd moment1 = Eigen::VectorXd::Zero(params.size());
    Eigen::VectorXd moment2 = Eigen::VectorXd::Zero(params.size());
    long step = 0;

    TrainResult result;
    result.model = model;
    result.best_validation_mse = std::numeric_limits<double>::infinity();
    Eigen::VectorXd best_params = params;

    Rng rng(config.seed);
    std::vector<std::size_t> order(dataset.train.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    TopologicalDeepONet current = model;
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        const double lr = config.learning_rate * std::pow(config.decay, epoch);
        rng.shuffle(order);
        bool finite = true;
        for (std::size_t start = 0; start < order.size() && finite;
             start += static_cast<std::size_t>(config.batch_size)) {
            const std::size_t stop =
                std::min(order.size(), start + static_cast<std::size_t>(config.batch_size));
            std::vector<DataRecord> batch;
            batch.reserve(stop - start);
            for (std::size_t i = start; i < stop; ++i) batch.push_back(dataset.train[order[i]]);

            current = model_with_parameters(current, params);
            const Eigen::VectorXd grad = mse_gradient(current, batch, config.freeze_functionals);
            if (!grad.allFinite()) {
                finite = false;
                break;
            }
            ++step;
            const double bc1 = 1.0 - std::pow(config.beta1, static_cast<double>(step));
            const double bc2 = 1.0 - std::pow(config.beta2, static_cast<double>(step));
            for (Eigen::Index i = 0; i < params.size(); ++i) {
                moment1(i) = config.beta1 * moment1(i) + (1.0 - config.beta1) * grad(i);
                moment2(i) = config.beta2 * moment2(i) + (1.0 - config.beta2) * grad(i) * grad(i);
                params(i) -= lr * (moment1(i) / bc1) /
                             (std::sqrt(moment2(i) / bc2) + config.eps_hat);
            }
        }

        current = model_with_parameters(current, params);
        EpochStats stats;
        stats.train_mse = dataset_mse(current, dataset.train);
        stats.validation_mse = dataset_mse(current, dataset.validation);
        result.history.push_back(stats);

        if (!finite || !std::isfinite(stats.train_mse)) {
            result.diverged = true;
            break;
        }
        if (stats.validation_mse < result.best_validation_mse) {
            result.best_validation_mse = stats.validation_mse;
            result.best_epoch = epoch;
            best_params = params;
        }
    }

    result.model = model_with_parameters(model, best_params);
    if (result.history.empty()) {
        result.best_validation_mse = dataset_mse(result.model, dataset.validation);
    }
    return result;
}

namespace {

bool clears_kink_margin(const TopologicalDeepONet& model, const DataRecord& rec, double margin) {
    const Eigen::VectorXd pairing = model.space.pairing_vector(rec.u.coeffs);
    for (const auto& col : model.branch.columns) {
        Eigen::VectorXd z(col.functional_layer.width());
        for (int i = 0; i < col.functional_layer.width(); ++i) {
            const double pre =
                col.functional_layer.functionals[static_cast<std::size_t>(i)].weights.dot(
                    pairing) -
                col.functional_layer.biases(i);
            if (std::abs(pre) <= margin) return false;
            z(i) = activate(col.activation, pre);
        }
        for (const auto& layer : col.hidden) {
            Eigen::VectorXd pre = layer.weights * z - layer.biases;
            for (Eigen::Index i = 0; i < pre.size(); ++i) {
                if (std::abs(pre(i)) <= margin) return false;
            }
            z.resize(pre.size());
            for (Eigen::Index i = 0; i < pre.size(); ++i) z(i) = activate(col.activation, pre(i));
        }
    }
    for (int k = 0; k < model.trunk.latent_dim(); ++k) {
        const double pre =
            model.trunk.omegas[static_cast<std::size_t>(k)].dot(rec.y) + model.trunk.zetas(k);
        if (std::abs(pre) <= margin) return false;
    }
    return true;
}

bool model_uses_relu(const TopologicalDeepONet& model) {
    if (model.trunk.activation == Activation::Relu) return true;
    for (const auto& col : model.branch.columns) {
        if (col.activation == Activation::Relu) return true;
    }
    return false;
}

}  // namespace

double gradient_check(const TopologicalDeepONet& model, const std::vector<DataRecord>& records,
                      double fd_step, double kink_margin) {
    if (records.empty()) throw std::invalid_argument("gradient_check: empty record slice");
    if (!(fd_step >= 1e-7 && fd_step <= 1e-4)) {
        throw std::invalid_argument("gradient_check: fd_step must lie in [1e-7, 1e-4]");
    }
    std::vector<DataRecord> probe;
    if (model_uses_relu(model)) {
        for (const auto& rec : records) {
            if (clears_kink_margin(model, rec, kink_margin)) probe.push_back(rec);
        }
    } else {
        probe = records;
    }
    if (probe.empty()) {
        throw std::invalid_argument("gradient_check: every record sits near a relu kink");
    }

    const Eigen::VectorXd analytic = mse_gradient(model, probe);
    const Eigen::VectorXd params = model_parameters(model);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < params.size(); ++i) {
        Eigen::VectorXd shifted = params;
        shifted(i) = params(i) + fd_step;
        const double up = dataset_mse(model_with_parameters(model, shifted), probe);
        shifted(i) = params(i) - fd_step;
        const double down = dataset_mse(model_with_parameters(model, shifted), probe);
        const double fd = (up - down) / (2.0 * fd_step);
        const double dev =
            std::abs(analytic(i) - fd) / (1.0 + std::max(std::abs(analytic(i)), std::abs(fd)));
        worst = std::max(worst, dev);
    }
    return worst;
}

}  // namespace tdon
