#include "tdon/model_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace tdon {

using nlohmann::json;

std::string to_hex(double x) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%a", x);
    return buf;
}

double from_hex(const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str()) throw std::invalid_argument("from_hex: unparsable float: " + s);
    return v;
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open for writing: " + tmp);
        out << content;
        if (!out.good()) throw std::runtime_error("write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        throw std::runtime_error("rename failed: " + tmp + " -> " + path);
    }
}

namespace {

constexpr int kFormatVersion = 1;

json vector_to_json(const Eigen::VectorXd& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(to_hex(v(i)));
    return arr;
}

Eigen::VectorXd vector_from_json(const json& arr) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(arr.size()));
    for (std::size_t i = 0; i < arr.size(); ++i) {
        v(static_cast<Eigen::Index>(i)) = from_hex(arr[i].get<std::string>());
    }
    return v;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        rows.push_back(vector_to_json(m.row(i).transpose()));
    }
    return rows;
}

Eigen::MatrixXd matrix_from_json(const json& rows) {
    if (rows.empty()) return Eigen::MatrixXd(0, 0);
    const auto r = static_cast<Eigen::Index>(rows.size());
    const auto c = static_cast<Eigen::Index>(rows[0].size());
    Eigen::MatrixXd m(r, c);
    for (Eigen::Index i = 0; i < r; ++i) {
        m.row(i) = vector_from_json(rows[static_cast<std::size_t>(i)]).transpose();
    }
    return m;
}

json space_to_json(const MeasurementSpace& space) {
    json j;
    j["kind"] = space_kind_name(space.kind);
    switch (space.kind) {
        case SpaceKind::Matrix:
            j["rows"] = space.rows;
            j["cols"] = space.cols;
            break;
        case SpaceKind::SequenceLp:
            j["length"] = space.length;
            j["p"] = to_hex(space.p_exponent);
            break;
        case SpaceKind::SequenceC0:
            j["length"] = space.length;
            break;
        case SpaceKind::L2Interval:
            j["interval"] = {to_hex(space.interval_lo), to_hex(space.interval_hi)};
            j["quadrature_points"] = space.quadrature_points;
            break;
        case SpaceKind::SchwartzHermite:
            j["hermite_order"] = space.hermite_order;
            j["quadrature_points"] = space.quadrature_points;
            break;
    }
    return j;
}

MeasurementSpace space_from_json(const json& j) {
    const SpaceKind kind = space_kind_from_name(j.at("kind").get<std::string>());
    switch (kind) {
        case SpaceKind::Matrix:
            return make_matrix_space(j.at("rows").get<int>(), j.at("cols").get<int>());
        case SpaceKind::SequenceLp:
            return make_sequence_lp_space(j.at("length").get<int>(),
                                          from_hex(j.at("p").get<std::string>()));
        case SpaceKind::SequenceC0:
            return make_sequence_c0_space(j.at("length").get<int>());
        case SpaceKind::L2Interval:
            return make_l2_interval_space(j.at("quadrature_points").get<int>(),
                                          from_hex(j.at("interval")[0].get<std::string>()),
                                          from_hex(j.at("interval")[1].get<std::string>()));
        case SpaceKind::SchwartzHermite:
            return make_schwartz_hermite_space(j.at("hermite_order").get<int>(),
                                               j.at("quadrature_points").get<int>());
    }
    throw std::logic_error("unknown space kind");
}

json toponet_to_json(const TopoNetwork& net) {
    json j;
    j["activation"] = activation_name(net.activation);
    json functionals = json::array();
    for (const auto& f : net.functional_layer.functionals) {
        functionals.push_back(vector_to_json(f.weights));
    }
    j["functionals"] = functionals;
    j["biases"] = vector_to_json(net.functional_layer.biases);
    json hidden = json::array();
    for (const auto& h : net.hidden) {
        hidden.push_back({{"weights", matrix_to_json(h.weights)},
                          {"biases", vector_to_json(h.biases)}});
    }
    j["hidden"] = hidden;
    j["output"] = matrix_to_json(net.output_matrix);
    return j;
}

TopoNetwork toponet_from_json(const MeasurementSpace& space, const json& j) {
    FunctionalLayer layer;
    for (const auto& fw : j.at("functionals")) {
        layer.functionals.push_back(DualFunctional{space.kind, vector_from_json(fw)});
    }
    layer.biases = vector_from_json(j.at("biases"));
    std::vector<HiddenLayer> hidden;
    for (const auto& h : j.at("hidden")) {
        hidden.push_back(HiddenLayer{matrix_from_json(h.at("weights")),
                                     vector_from_json(h.at("biases"))});
    }
    return make_toponet(space, std::move(layer), std::move(hidden),
                        matrix_from_json(j.at("output")),
                        activation_from_name(j.at("activation").get<std::string>()));
}

json trunk_to_json(const TrunkNetwork& trunk) {
    json j;
    j["activation"] = activation_name(trunk.activation);
    json omegas = json::array();
    for (const auto& w : trunk.omegas) omegas.push_back(vector_to_json(w));
    j["omegas"] = omegas;
    j["zetas"] = vector_to_json(trunk.zetas);
    j["mixing"] = trunk.mixing ? matrix_to_json(*trunk.mixing) : json(nullptr);
    return j;
}

TrunkNetwork trunk_from_json(const json& j) {
    std::vector<Eigen::VectorXd> omegas;
    for (const auto& w : j.at("omegas")) omegas.push_back(vector_from_json(w));
    std::optional<Eigen::MatrixXd> mixing;
    if (!j.at("mixing").is_null()) mixing = matrix_from_json(j.at("mixing"));
    return make_trunk(std::move(omegas), vector_from_json(j.at("zetas")),
                      activation_from_name(j.at("activation").get<std::string>()),
                      std::move(mixing));
}

json load_document(const std::string& path, const std::string& expected_kind) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open model file: " + path);
    json j = json::parse(in);
    if (j.at("format_version").get<int>() != kFormatVersion) {
        throw std::runtime_error("unsupported model format version in " + path);
    }
    if (j.at("kind").get<std::string>() != expected_kind) {
        throw std::runtime_error("model file " + path + " holds a '" +
                                 j.at("kind").get<std::string>() + "' document, expected '" +
                                 expected_kind + "'");
    }
    return j;
}

}  // namespace

void save_deeponet(const TopologicalDeepONet& model, const std::string& path) {
    json j;
    j["format_version"] = kFormatVersion;
    j["kind"] = "topological_deeponet";
    j["space"] = space_to_json(model.space);
    j["domain"] = {{"lo", vector_to_json(model.domain.lo)},
                   {"hi", vector_to_json(model.domain.hi)}};
    j["output_dim"] = model.output_dim();
    j["latent_dim"] = model.latent_dim();
    json branch = json::array();
    for (const auto& col : model.branch.columns) branch.push_back(toponet_to_json(col));
    j["branch"] = branch;
    j["trunk"] = trunk_to_json(model.trunk);
    write_file_atomic(path, j.dump(1));
}

TopologicalDeepONet load_deeponet(const std::string& path) {
    const json j = load_document(path, "topological_deeponet");
    MeasurementSpace space = space_from_json(j.at("space"));
    BranchNetwork branch;
    for (const auto& col : j.at("branch")) {
        branch.columns.push_back(toponet_from_json(space, col));
    }
    Box domain = make_box(vector_from_json(j.at("domain").at("lo")),
                          vector_from_json(j.at("domain").at("hi")));
    return make_deeponet(std::move(space), std::move(branch), trunk_from_json(j.at("trunk")),
                         std::move(domain));
}

void save_toponet(const MeasurementSpace& space, const TopoNetwork& net, const std::string& path) {
    json j;
    j["format_version"] = kFormatVersion;
    j["kind"] = "toponet";
    j["space"] = space_to_json(space);
    j["network"] = toponet_to_json(net);
    write_file_atomic(path, j.dump(1));
}

std::pair<MeasurementSpace, TopoNetwork> load_toponet(const std::string& path) {
    const json j = load_document(path, "toponet");
    MeasurementSpace space = space_from_json(j.at("space"));
    TopoNetwork net = toponet_from_json(space, j.at("network"));
    return {std::move(space), std::move(net)};
}

void save_ridge_expansion(const Ridge1DExpansion& exp, const std::string& path) {
    json j;
    j["format_version"] = kFormatVersion;
    j["kind"] = "ridge_expansion";
    j["activation"] = activation_name(exp.activation);
    j["interval"] = {to_hex(exp.interval_lo), to_hex(exp.interval_hi)};
    json terms = json::array();
    for (const auto& t : exp.terms) {
        terms.push_back({to_hex(t.coefficient), to_hex(t.weight), to_hex(t.shift)});
    }
    j["terms"] = terms;
    write_file_atomic(path, j.dump(1));
}

Ridge1DExpansion load_ridge_expansion(const std::string& path) {
    const json j = load_document(path, "ridge_expansion");
    Ridge1DExpansion exp;
    exp.activation = activation_from_name(j.at("activation").get<std::string>());
    exp.interval_lo = from_hex(j.at("interval")[0].get<std::string>());
    exp.interval_hi = from_hex(j.at("interval")[1].get<std::string>());
    for (const auto& t : j.at("terms")) {
        exp.terms.push_back(RidgeTerm{from_hex(t[0].get<std::string>()),
                                      from_hex(t[1].get<std::string>()),
                                      from_hex(t[2].get<std::string>())});
    }
    return exp;
}

}  // namespace tdon
