#include "tdon/toponet.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "tdon/rng.hpp"

namespace tdon {

namespace {

void validate_chain(const MeasurementSpace& space, const FunctionalLayer& layer,
                    const std::vector<HiddenLayer>& hidden, const Eigen::MatrixXd& output) {
    if (layer.functionals.empty()) {
        throw std::invalid_argument("toponet: functional layer must be non-empty");
    }
    for (const auto& f : layer.functionals) {
        if (f.kind != space.kind || f.weights.size() != space.dim()) {
            throw std::invalid_argument("toponet: functional does not belong to the space");
        }
    }
    if (layer.biases.size() != layer.width()) {
        throw std::invalid_argument("toponet: functional bias count mismatch");
    }
    Eigen::Index width = layer.width();
    for (std::size_t l = 0; l < hidden.size(); ++l) {
        if (hidden[l].weights.cols() != width) {
            throw std::invalid_argument("toponet: hidden layer " + std::to_string(l) +
                                        " expects input width " +
                                        std::to_string(hidden[l].weights.cols()) + ", got " +
                                        std::to_string(width));
        }
        if (hidden[l].biases.size() != hidden[l].weights.rows()) {
            throw std::invalid_argument("toponet: hidden layer bias count mismatch");
        }
        width = hidden[l].weights.rows();
    }
    if (output.cols() != width) {
        throw std::invalid_argument("toponet: output matrix expects input width " +
                                    std::to_string(output.cols()) + ", got " +
                                    std::to_string(width));
    }
}

}  // namespace

TopoNetwork make_toponet(const MeasurementSpace& space, FunctionalLayer layer,
                         std::vector<HiddenLayer> hidden, Eigen::MatrixXd output_matrix,
                         Activation activation) {
    validate_chain(space, layer, hidden, output_matrix);
    TopoNetwork net;
    net.space_kind = space.kind;
    net.functional_layer = std::move(layer);
    net.hidden = std::move(hidden);
    net.output_matrix = std::move(output_matrix);
    net.activation = activation;
    return net;
}

TopoNetwork random_toponet(const MeasurementSpace& space, int functional_width,
                           const std::vector<int>& hidden_widths, int output_dim,
                           Activation activation, std::uint64_t seed) {
    if (functional_width < 1 || output_dim < 1) {
        throw std::invalid_argument("random_toponet: widths must be >= 1");
    }
    Rng rng(seed);
    const auto init = [&rng](Eigen::Index rows, Eigen::Index cols, double fan_in) {
        const double s = 1.0 / std::sqrt(fan_in);
        Eigen::MatrixXd m(rows, cols);
        for (Eigen::Index i = 0; i < rows; ++i)
            for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.uniform(-s, s);
        return m;
    };

    FunctionalLayer layer;
    layer.functionals.reserve(static_cast<std::size_t>(functional_width));
    const Eigen::MatrixXd fw = init(functional_width, space.dim(), space.dim());
    for (int i = 0; i < functional_width; ++i) {
        layer.functionals.push_back(DualFunctional{space.kind, fw.row(i).transpose()});
    }
    layer.biases = init(functional_width, 1, space.dim()).col(0);

    std::vector<HiddenLayer> hidden;
    int width = functional_width;
    for (int hw : hidden_widths) {
        if (hw < 1) throw std::invalid_argument("random_toponet: widths must be >= 1");
        HiddenLayer h;
        h.weights = init(hw, width, width);
        h.biases = init(hw, 1, width).col(0);
        hidden.push_back(std::move(h));
        width = hw;
    }
    Eigen::MatrixXd output = init(output_dim, width, width);
    return make_toponet(space, std::move(layer), std::move(hidden), std::move(output), activation);
}

Eigen::VectorXd forward(const MeasurementSpace& space, const TopoNetwork& net,
                        const SpaceElement& u) {
    if (u.kind != net.space_kind || u.kind != space.kind || u.coeffs.size() != space.dim()) {
        throw std::invalid_argument("toponet forward: element does not belong to the space");
    }
    const Eigen::VectorXd pv = space.pairing_vector(u.coeffs);
    const int r = net.functional_layer.width();
    Eigen::VectorXd z(r);
    for (int i = 0; i < r; ++i) {
        const double pre =
            net.functional_layer.functionals[static_cast<std::size_t>(i)].weights.dot(pv) -
            net.functional_layer.biases(i);
        z(i) = activate(net.activation, pre);
    }
    for (const auto& layer : net.hidden) {
        Eigen::VectorXd pre = layer.weights * z - layer.biases;
        z.resize(pre.size());
        for (Eigen::Index i = 0; i < pre.size(); ++i) z(i) = activate(net.activation, pre(i));
    }
    return net.output_matrix * z;
}

Eigen::MatrixXd forward_batch(const MeasurementSpace& space, const TopoNetwork& net,
                              const std::vector<SpaceElement>& elements) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(elements.size()), net.output_dim());
    for (std::size_t i = 0; i < elements.size(); ++i) {
        out.row(static_cast<Eigen::Index>(i)) = forward(space, net, elements[i]).transpose();
    }
    return out;
}

int parameter_count(const TopoNetwork& net) {
    int n = 0;
    for (const auto& f : net.functional_layer.functionals) {
        n += static_cast<int>(f.weights.size());
    }
    n += static_cast<int>(net.functional_layer.biases.size());
    for (const auto& h : net.hidden) {
        n += static_cast<int>(h.weights.size() + h.biases.size());
    }
    n += static_cast<int>(net.output_matrix.size());
    return n;
}

Eigen::VectorXd parameter_vector(const TopoNetwork& net) {
    Eigen::VectorXd v(parameter_count(net));
    Eigen::Index at = 0;
    const auto put_matrix_rowmajor = [&](const Eigen::MatrixXd& m) {
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            for (Eigen::Index j = 0; j < m.cols(); ++j) v(at++) = m(i, j);
    };
    for (const auto& f : net.functional_layer.functionals) {
        v.segment(at, f.weights.size()) = f.weights;
        at += f.weights.size();
    }
    v.segment(at, net.functional_layer.biases.size()) = net.functional_layer.biases;
    at += net.functional_layer.biases.size();
    for (const auto& h : net.hidden) {
        put_matrix_rowmajor(h.weights);
        v.segment(at, h.biases.size()) = h.biases;
        at += h.biases.size();
    }
    put_matrix_rowmajor(net.output_matrix);
    return v;
}

TopoNetwork with_parameters(const TopoNetwork& net, const Eigen::VectorXd& params) {
    if (params.size() != parameter_count(net)) {
        throw std::invalid_argument("with_parameters: expected " +
                                    std::to_string(parameter_count(net)) + " parameters, got " +
                                    std::to_string(params.size()));
    }
    TopoNetwork out = net;
    Eigen::Index at = 0;
    const auto take_matrix_rowmajor = [&](Eigen::MatrixXd& m) {
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = params(at++);
    };
    for (auto& f : out.functional_layer.functionals) {
        f.weights = params.segment(at, f.weights.size());
        at += f.weights.size();
    }
    out.functional_layer.biases = params.segment(at, out.functional_layer.biases.size());
    at += out.functional_layer.biases.size();
    for (auto& h : out.hidden) {
        take_matrix_rowmajor(h.weights);
        h.biases = params.segment(at, h.biases.size());
        at += h.biases.size();
    }
    take_matrix_rowmajor(out.output_matrix);
    return out;
}

}  // namespace tdon
