#include "tdon/spaces.hpp"

#include <cmath>
#include <stdexcept>

#include "tdon/hermite.hpp"
#include "tdon/rng.hpp"

namespace tdon {

std::string space_kind_name(SpaceKind k) {
    switch (k) {
        case SpaceKind::Matrix: return "matrix";
        case SpaceKind::SequenceLp: return "sequence_lp";
        case SpaceKind::SequenceC0: return "sequence_c0";
        case SpaceKind::L2Interval: return "l2_interval";
        case SpaceKind::SchwartzHermite: return "schwartz_hermite";
    }
    throw std::logic_error("unknown space kind");
}

SpaceKind space_kind_from_name(const std::string& s) {
    if (s == "matrix") return SpaceKind::Matrix;
    if (s == "sequence_lp") return SpaceKind::SequenceLp;
    if (s == "sequence_c0") return SpaceKind::SequenceC0;
    if (s == "l2_interval") return SpaceKind::L2Interval;
    if (s == "schwartz_hermite") return SpaceKind::SchwartzHermite;
    throw std::invalid_argument("unknown space kind: " + s);
}

int MeasurementSpace::dim() const {
    switch (kind) {
        case SpaceKind::Matrix: return rows * cols;
        case SpaceKind::SequenceLp:
        case SpaceKind::SequenceC0: return length;
        case SpaceKind::L2Interval: return quadrature_points;
        case SpaceKind::SchwartzHermite: return hermite_order;
    }
    throw std::logic_error("unknown space kind");
}

Eigen::VectorXd MeasurementSpace::pairing_vector(const Eigen::VectorXd& coeffs) const {
    switch (kind) {
        case SpaceKind::Matrix:
        case SpaceKind::SequenceLp:
        case SpaceKind::SequenceC0:
            return coeffs;
        case SpaceKind::L2Interval:
            return quadrature.weights.cwiseProduct(coeffs);
        case SpaceKind::SchwartzHermite:
            return pairing_gram * coeffs;
    }
    throw std::logic_error("unknown space kind");
}

MeasurementSpace make_matrix_space(int rows, int cols) {
    if (rows < 1 || cols < 1) throw std::invalid_argument("matrix space: rows, cols >= 1");
    MeasurementSpace s;
    s.kind = SpaceKind::Matrix;
    s.rows = rows;
    s.cols = cols;
    return s;
}

MeasurementSpace make_sequence_lp_space(int length, double p) {
    if (length < 1) throw std::invalid_argument("sequence space: length >= 1");
    if (!(p >= 1.0)) throw std::invalid_argument("sequence space: p >= 1");
    MeasurementSpace s;
    s.kind = SpaceKind::SequenceLp;
    s.length = length;
    s.p_exponent = p;
    return s;
}

MeasurementSpace make_sequence_c0_space(int length) {
    if (length < 1) throw std::invalid_argument("sequence space: length >= 1");
    MeasurementSpace s;
    s.kind = SpaceKind::SequenceC0;
    s.length = length;
    return s;
}

MeasurementSpace make_l2_interval_space(int quadrature_points, double lo, double hi) {
    if (quadrature_points < 1) throw std::invalid_argument("l2 space: need >= 1 node");
    if (!(lo < hi)) throw std::invalid_argument("l2 space: need lo < hi");
    MeasurementSpace s;
    s.kind = SpaceKind::L2Interval;
    s.interval_lo = lo;
    s.interval_hi = hi;
    s.quadrature_points = quadrature_points;
    s.quadrature = gauss_legendre(quadrature_points, lo, hi);
    return s;
}

MeasurementSpace make_schwartz_hermite_space(int hermite_order, int quadrature_points) {
    if (hermite_order < 1) throw std::invalid_argument("hermite space: order >= 1");
    if (quadrature_points == 0) quadrature_points = hermite_order;
    if (quadrature_points < 1) throw std::invalid_argument("hermite space: need >= 1 node");
    MeasurementSpace s;
    s.kind = SpaceKind::SchwartzHermite;
    s.hermite_order = hermite_order;
    s.quadrature_points = quadrature_points;
    s.quadrature = gauss_hermite(quadrature_points);
    // <h_i, h_j>_{L^2} under the rule: Htilde^T diag(w) Htilde, identity to
    // machine precision when quadrature_points >= hermite_order.
    const Eigen::MatrixXd table = hermite_poly_table(s.quadrature.nodes, hermite_order);
    s.pairing_gram = table.transpose() * s.quadrature.weights.asDiagonal() * table;
    return s;
}

namespace {

void check_same_space(const MeasurementSpace& space, SpaceKind kind, Eigen::Index size,
                      const char* what) {
    if (kind != space.kind) {
        throw std::invalid_argument(std::string(what) + ": space kind mismatch (got " +
                                    space_kind_name(kind) + ", expected " +
                                    space_kind_name(space.kind) + ")");
    }
    if (size != space.dim()) {
        throw std::invalid_argument(std::string(what) + ": coefficient length " +
                                    std::to_string(size) + " does not match space dim " +
                                    std::to_string(space.dim()));
    }
}

}  // namespace

SpaceElement make_element(const MeasurementSpace& space, Eigen::VectorXd coeffs) {
    check_same_space(space, space.kind, coeffs.size(), "make_element");
    return SpaceElement{space.kind, std::move(coeffs)};
}

DualFunctional make_functional(const MeasurementSpace& space, Eigen::VectorXd weights) {
    check_same_space(space, space.kind, weights.size(), "make_functional");
    return DualFunctional{space.kind, std::move(weights)};
}

SpaceElement zero_element(const MeasurementSpace& space) {
    return SpaceElement{space.kind, Eigen::VectorXd::Zero(space.dim())};
}

DualFunctional zero_functional(const MeasurementSpace& space) {
    return DualFunctional{space.kind, Eigen::VectorXd::Zero(space.dim())};
}

double pair(const MeasurementSpace& space, const DualFunctional& f, const SpaceElement& u) {
    check_same_space(space, f.kind, f.weights.size(), "pair: functional");
    check_same_space(space, u.kind, u.coeffs.size(), "pair: element");
    return f.weights.dot(space.pairing_vector(u.coeffs));
}

double element_distance(const MeasurementSpace& space, const SpaceElement& u,
                        const SpaceElement& v, DistanceMetric metric) {
    check_same_space(space, u.kind, u.coeffs.size(), "element_distance");
    check_same_space(space, v.kind, v.coeffs.size(), "element_distance");
    switch (metric) {
        case DistanceMetric::Euclidean: return (u.coeffs - v.coeffs).norm();
        case DistanceMetric::Sup: return (u.coeffs - v.coeffs).lpNorm<Eigen::Infinity>();
    }
    throw std::logic_error("unknown metric");
}

double element_distance(const MeasurementSpace& space, const SpaceElement& u,
                        const SpaceElement& v) {
    return element_distance(space, u, v, space.default_metric());
}

CompactFamily make_family(const MeasurementSpace& space, std::vector<SpaceElement> basis,
                          Eigen::VectorXd box_lo, Eigen::VectorXd box_hi) {
    if (basis.empty()) throw std::invalid_argument("family: needs at least one basis element");
    for (const auto& b : basis) {
        check_same_space(space, b.kind, b.coeffs.size(), "family basis");
    }
    const auto B = static_cast<Eigen::Index>(basis.size());
    if (box_lo.size() != B || box_hi.size() != B) {
        throw std::invalid_argument("family: box bounds must match basis count");
    }
    for (Eigen::Index j = 0; j < B; ++j) {
        if (!(box_lo(j) <= box_hi(j))) {
            throw std::invalid_argument("family: box_lo <= box_hi required");
        }
    }
    return CompactFamily{space, std::move(basis), std::move(box_lo), std::move(box_hi)};
}

SpaceElement element_of(const CompactFamily& family, const Eigen::VectorXd& c) {
    const auto B = static_cast<Eigen::Index>(family.basis.size());
    if (c.size() != B) throw std::invalid_argument("element_of: coefficient count mismatch");
    for (Eigen::Index j = 0; j < B; ++j) {
        if (c(j) < family.box_lo(j) || c(j) > family.box_hi(j)) {
            throw std::out_of_range("element_of: coefficient " + std::to_string(j) +
                                    " outside the family box");
        }
    }
    Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(family.space.dim());
    for (Eigen::Index j = 0; j < B; ++j) {
        coeffs += c(j) * family.basis[static_cast<std::size_t>(j)].coeffs;
    }
    return SpaceElement{family.space.kind, std::move(coeffs)};
}

SampleScheme SampleScheme::grid(int k) {
    SampleScheme s;
    s.kind = Kind::Grid;
    s.grid_points = k;
    return s;
}

SampleScheme SampleScheme::uniform_random(int n, std::uint64_t seed) {
    SampleScheme s;
    s.kind = Kind::UniformRandom;
    s.count = n;
    s.seed = seed;
    return s;
}

std::vector<FamilySample> sample_family(const CompactFamily& family, const SampleScheme& scheme) {
    const int B = family.parameter_dim();
    std::vector<FamilySample> out;
    if (scheme.kind == SampleScheme::Kind::Grid) {
        if (scheme.grid_points < 2) throw std::invalid_argument("sample_family: grid needs k >= 2");
        const int k = scheme.grid_points;
        std::size_t total = 1;
        for (int j = 0; j < B; ++j) total *= static_cast<std::size_t>(k);
        out.reserve(total);
        std::vector<int> idx(B, 0);
        for (std::size_t n = 0; n < total; ++n) {
            Eigen::VectorXd c(B);
            for (int j = 0; j < B; ++j) {
                const double t = static_cast<double>(idx[j]) / (k - 1);
                c(j) = family.box_lo(j) + t * (family.box_hi(j) - family.box_lo(j));
            }
            out.push_back({c, element_of(family, c)});
            for (int j = B - 1; j >= 0; --j) {
                if (++idx[j] < k) break;
                idx[j] = 0;
            }
        }
    } else {
        if (scheme.count < 1) throw std::invalid_argument("sample_family: random needs n >= 1");
        Rng rng(scheme.seed);
        out.reserve(static_cast<std::size_t>(scheme.count));
        for (int n = 0; n < scheme.count; ++n) {
            Eigen::VectorXd c(B);
            for (int j = 0; j < B; ++j) {
                c(j) = rng.uniform(family.box_lo(j), family.box_hi(j));
            }
            out.push_back({c, element_of(family, c)});
        }
    }
    return out;
}

AnalyticFamily::AnalyticFamily(MeasurementSpace space, AnalyticBasis basis_forms,
                               Eigen::VectorXd box_lo, Eigen::VectorXd box_hi)
    : basis_forms_(std::move(basis_forms)) {
    if (space.kind != SpaceKind::L2Interval) {
        throw std::invalid_argument("AnalyticFamily currently requires an L2Interval space");
    }
    if (basis_forms_.empty()) throw std::invalid_argument("AnalyticFamily: empty basis");
    std::vector<SpaceElement> basis;
    basis.reserve(basis_forms_.size());
    Eigen::MatrixXd grid(space.dim(), static_cast<Eigen::Index>(basis_forms_.size()));
    for (std::size_t j = 0; j < basis_forms_.size(); ++j) {
        Eigen::VectorXd values(space.dim());
        for (int q = 0; q < space.dim(); ++q) {
            values(q) = basis_forms_[j].value(space.quadrature.nodes(q));
        }
        grid.col(static_cast<Eigen::Index>(j)) = values;
        basis.push_back(SpaceElement{space.kind, std::move(values)});
    }
    family_ = make_family(space, std::move(basis), std::move(box_lo), std::move(box_hi));
    recover_qr_.compute(grid);
}

Eigen::VectorXd AnalyticFamily::coefficients_of(const SpaceElement& u) const {
    if (u.kind != family_.space.kind || u.coeffs.size() != family_.space.dim()) {
        throw std::invalid_argument("coefficients_of: element does not belong to the space");
    }
    return recover_qr_.solve(u.coeffs);
}

double AnalyticFamily::value_at(const SpaceElement& u, double x) const {
    const Eigen::VectorXd c = coefficients_of(u);
    double v = 0.0;
    for (std::size_t j = 0; j < basis_forms_.size(); ++j) {
        v += c(static_cast<Eigen::Index>(j)) * basis_forms_[j].value(x);
    }
    return v;
}

}  // namespace tdon
