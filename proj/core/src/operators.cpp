#include "tdon/operators.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "tdon/hermite.hpp"
#include "tdon/rng.hpp"

namespace tdon {

std::string operator_kind_name(OperatorKind k) {
    switch (k) {
        case OperatorKind::Antiderivative: return "antiderivative";
        case OperatorKind::RankOneMatrix: return "rank_one_matrix";
        case OperatorKind::PowerSeries: return "power_series";
        case OperatorKind::GaussianConvolution: return "gaussian_convolution";
        case OperatorKind::NonlinearComposition: return "nonlinear_composition";
    }
    throw std::logic_error("unknown operator kind");
}

OperatorKind operator_kind_from_name(const std::string& s) {
    if (s == "antiderivative") return OperatorKind::Antiderivative;
    if (s == "rank_one_matrix") return OperatorKind::RankOneMatrix;
    if (s == "power_series") return OperatorKind::PowerSeries;
    if (s == "gaussian_convolution") return OperatorKind::GaussianConvolution;
    if (s == "nonlinear_composition") return OperatorKind::NonlinearComposition;
    throw std::invalid_argument("unknown operator kind: " + s);
}

namespace {

void check_input(const MeasurementSpace& space, const Box& domain, const SpaceElement& u,
                 const Eigen::VectorXd& y, const char* what) {
    if (u.kind != space.kind || u.coeffs.size() != space.dim()) {
        throw std::invalid_argument(std::string(what) + ": element is not from the oracle space");
    }
    if (!domain.contains(y, 1e-12)) {
        throw std::out_of_range(std::string(what) + ": point outside the output domain");
    }
}

class AntiderivativeOracle final : public OperatorOracle {
public:
    AntiderivativeOracle(std::shared_ptr<const AnalyticFamily> family, Box domain)
        : family_(std::move(family)), domain_(std::move(domain)) {
        if (domain_.dim() != 1) throw std::invalid_argument("antiderivative: domain must be 1-d");
        // |int_0^y (u - v)| <= int_a^b |u - v| <= sqrt(b-a) ||u-v||_L2, and the
        // quadrature L2 norm is bounded by sqrt(max w) * euclidean coeff norm.
        const auto& sp = family_->family().space;
        lipschitz_ = std::sqrt(sp.interval_hi - sp.interval_lo) *
                     std::sqrt(sp.quadrature.weights.maxCoeff());
    }

    OperatorKind kind() const override { return OperatorKind::Antiderivative; }
    const MeasurementSpace& space() const override { return family_->family().space; }
    const Box& domain() const override { return domain_; }
    int output_dim() const override { return 1; }

    Eigen::VectorXd apply(const SpaceElement& u, const Eigen::VectorXd& y) const override {
        check_input(space(), domain_, u, y, "antiderivative");
        const Eigen::VectorXd c = family_->coefficients_of(u);
        double acc = 0.0;
        const auto& forms = family_->basis_forms();
        for (std::size_t j = 0; j < forms.size(); ++j) {
            acc += c(static_cast<Eigen::Index>(j)) * forms[j].antiderivative(y(0));
        }
        return Eigen::VectorXd::Constant(1, acc);
    }

    double lipschitz_bound() const override { return lipschitz_; }

private:
    std::shared_ptr<const AnalyticFamily> family_;
    Box domain_;
    double lipschitz_;
};

class RankOneMatrixOracle final : public OperatorOracle {
public:
    RankOneMatrixOracle(MeasurementSpace space, Eigen::MatrixXd w0, Eigen::VectorXd v,
                        Eigen::VectorXd omega0, double zeta0, Box domain)
        : space_(std::move(space)),
          w0_(std::move(w0)),
          v_(std::move(v)),
          omega0_(std::move(omega0)),
          zeta0_(zeta0),
          domain_(std::move(domain)) {
        if (space_.kind != SpaceKind::Matrix) {
            throw std::invalid_argument("rank_one_matrix: needs a matrix space");
        }
        if (w0_.rows() != space_.rows || w0_.cols() != space_.cols) {
            throw std::invalid_argument("rank_one_matrix: W0 shape mismatch");
        }
        if (omega0_.size() != domain_.dim()) {
            throw std::invalid_argument("rank_one_matrix: omega0 dim mismatch");
        }
        // softplus is 1-Lipschitz; |trace(W0^T dA)| <= ||W0||_F ||dA||_F.
        lipschitz_ = w0_.norm() * v_.lpNorm<Eigen::Infinity>();
    }

    OperatorKind kind() const override { return OperatorKind::RankOneMatrix; }
    const MeasurementSpace& space() const override { return space_; }
    const Box& domain() const override { return domain_; }
    int output_dim() const override { return static_cast<int>(v_.size()); }

    Eigen::VectorXd apply(const SpaceElement& u, const Eigen::VectorXd& y) const override {
        check_input(space_, domain_, u, y, "rank_one_matrix");
        // coeffs are the row-major flattened matrix; trace(W0^T A) is the
        // entrywise dot product.
        double tr = 0.0;
        for (int i = 0; i < space_.rows; ++i)
            for (int j = 0; j < space_.cols; ++j) tr += w0_(i, j) * u.coeffs(i * space_.cols + j);
        const double softplus = tr > 30.0 ? tr : std::log1p(std::exp(tr));
        return softplus * std::sin(omega0_.dot(y) + zeta0_) * v_;
    }

    double lipschitz_bound() const override { return lipschitz_; }

private:
    MeasurementSpace space_;
    Eigen::MatrixXd w0_;
    Eigen::VectorXd v_;
    Eigen::VectorXd omega0_;
    double zeta0_;
    Box domain_;
    double lipschitz_;
};

class PowerSeriesOracle final : public OperatorOracle {
public:
    PowerSeriesOracle(MeasurementSpace space, Box domain)
        : space_(std::move(space)), domain_(std::move(domain)) {
        if (space_.kind != SpaceKind::SequenceLp && space_.kind != SpaceKind::SequenceC0) {
            throw std::invalid_argument("power_series: needs a sequence space");
        }
        if (domain_.dim() != 1) throw std::invalid_argument("power_series: domain must be 1-d");
        const double r = std::max(std::abs(domain_.lo(0)), std::abs(domain_.hi(0)));
        if (r >= 1.0) {
            throw std::invalid_argument("power_series: domain must stay inside (-1, 1)");
        }
        // |sum dx_n y^{n-1}| <= ||dx||_2 sqrt(sum r^{2(n-1)})
        double geom = 0.0;
        for (int n = 0; n < space_.length; ++n) geom += std::pow(r, 2 * n);
        lipschitz_ = std::sqrt(geom);
    }

    OperatorKind kind() const override { return OperatorKind::PowerSeries; }
    const MeasurementSpace& space() const override { return space_; }
    const Box& domain() const override { return domain_; }
    int output_dim() const override { return 1; }

    Eigen::VectorXd apply(const SpaceElement& u, const Eigen::VectorXd& y) const override {
        check_input(space_, domain_, u, y, "power_series");
        // Horner evaluation of sum_{n=1..N} x_n y^{n-1}
        double acc = 0.0;
        for (Eigen::Index n = u.coeffs.size(); n-- > 0;) acc = acc * y(0) + u.coeffs(n);
        return Eigen::VectorXd::Constant(1, acc);
    }

    double lipschitz_bound() const override { return lipschitz_; }

private:
    MeasurementSpace space_;
    Box domain_;
    double lipschitz_;
};

// "Gaussian convolution" acting diagonally on Hermite coefficients. A true
// difference-kernel convolution does not stay diagonal in this basis; the
// diagonal smoothing with factors exp(-rate * n) is the Mehler / Ornstein-
// Uhlenbeck semigroup, which is the Gaussian-kernel smoothing compatible
// with the truncated Hermite representation. Factors lie in (0, 1] and are
// non-increasing in the Hermite order.
class GaussianConvolutionOracle final : public OperatorOracle {
public:
    GaussianConvolutionOracle(MeasurementSpace space, double rate, Box domain)
        : space_(std::move(space)), rate_(rate), domain_(std::move(domain)) {
        if (space_.kind != SpaceKind::SchwartzHermite) {
            throw std::invalid_argument("gaussian_convolution: needs a Hermite space");
        }
        if (!(rate >= 0.0)) throw std::invalid_argument("gaussian_convolution: rate >= 0");
        if (domain_.dim() != 1) {
            throw std::invalid_argument("gaussian_convolution: domain must be 1-d");
        }
        damping_.resize(space_.hermite_order);
        for (int n = 0; n < space_.hermite_order; ++n) damping_(n) = std::exp(-rate_ * n);
        // sup_y sqrt(sum (rho_n h_n(y))^2), by Cauchy-Schwarz in the coeffs
        double sup = 0.0;
        for (int i = 0; i <= 400; ++i) {
            const double y = domain_.lo(0) + (domain_.hi(0) - domain_.lo(0)) * i / 400.0;
            const Eigen::VectorXd h = hermite_function_values(y, space_.hermite_order);
            sup = std::max(sup, damping_.cwiseProduct(h).norm());
        }
        lipschitz_ = sup;
    }

    OperatorKind kind() const override { return OperatorKind::GaussianConvolution; }
    const MeasurementSpace& space() const override { return space_; }
    const Box& domain() const override { return domain_; }
    int output_dim() const override { return 1; }

    const Eigen::VectorXd& damping_factors() const { return damping_; }

    Eigen::VectorXd apply(const SpaceElement& u, const Eigen::VectorXd& y) const override {
        check_input(space_, domain_, u, y, "gaussian_convolution");
        const Eigen::VectorXd h = hermite_function_values(y(0), space_.hermite_order);
        return Eigen::VectorXd::Constant(1, damping_.cwiseProduct(u.coeffs).dot(h));
    }

    double lipschitz_bound() const override { return lipschitz_; }

private:
    MeasurementSpace space_;
    double rate_;
    Box domain_;
    Eigen::VectorXd damping_;
    double lipschitz_;
};

class NonlinearCompositionOracle final : public OperatorOracle {
public:
    NonlinearCompositionOracle(std::shared_ptr<const AnalyticFamily> family, Box domain)
        : family_(std::move(family)), domain_(std::move(domain)) {
        if (domain_.dim() != 1) {
            throw std::invalid_argument("nonlinear_composition: domain must be 1-d");
        }
        // |sin(u(y)) - sin(v(y))| <= |u(y) - v(y)|
        //   <= sup_y sqrt(sum phi_j(y)^2) * ||recovery|| * dist(u, v)
        const auto& forms = family_->basis_forms();
        double sup_basis = 0.0;
        for (int i = 0; i <= 400; ++i) {
            const double y = domain_.lo(0) + (domain_.hi(0) - domain_.lo(0)) * i / 400.0;
            double s = 0.0;
            for (const auto& f : forms) s += f.value(y) * f.value(y);
            sup_basis = std::max(sup_basis, std::sqrt(s));
        }
        // operator norm of the coefficient-recovery map, estimated from the
        // basis grid matrix
        const auto& space = family_->family().space;
        Eigen::MatrixXd grid(space.dim(), static_cast<Eigen::Index>(forms.size()));
        for (std::size_t j = 0; j < forms.size(); ++j) {
            grid.col(static_cast<Eigen::Index>(j)) =
                family_->family().basis[j].coeffs;
        }
        const Eigen::JacobiSVD<Eigen::MatrixXd> svd(grid);
        lipschitz_ = sup_basis / svd.singularValues().minCoeff();
    }

    OperatorKind kind() const override { return OperatorKind::NonlinearComposition; }
    const MeasurementSpace& space() const override { return family_->family().space; }
    const Box& domain() const override { return domain_; }
    int output_dim() const override { return 1; }

    Eigen::VectorXd apply(const SpaceElement& u, const Eigen::VectorXd& y) const override {
        check_input(space(), domain_, u, y, "nonlinear_composition");
        return Eigen::VectorXd::Constant(1, std::sin(family_->value_at(u, y(0))));
    }

    double lipschitz_bound() const override { return lipschitz_; }

private:
    std::shared_ptr<const AnalyticFamily> family_;
    Box domain_;
    double lipschitz_;
};

}  // namespace

std::shared_ptr<OperatorOracle> make_antiderivative_oracle(
    std::shared_ptr<const AnalyticFamily> family, Box domain) {
    return std::make_shared<AntiderivativeOracle>(std::move(family), std::move(domain));
}

std::shared_ptr<OperatorOracle> make_rank_one_matrix_oracle(const MeasurementSpace& space,
                                                            Eigen::MatrixXd w0, Eigen::VectorXd v,
                                                            Eigen::VectorXd omega0, double zeta0,
                                                            Box domain) {
    return std::make_shared<RankOneMatrixOracle>(space, std::move(w0), std::move(v),
                                                 std::move(omega0), zeta0, std::move(domain));
}

std::shared_ptr<OperatorOracle> make_power_series_oracle(const MeasurementSpace& space,
                                                         Box domain) {
    return std::make_shared<PowerSeriesOracle>(space, std::move(domain));
}

std::shared_ptr<OperatorOracle> make_gaussian_convolution_oracle(const MeasurementSpace& space,
                                                                 double damping_rate, Box domain) {
    return std::make_shared<GaussianConvolutionOracle>(space, damping_rate, std::move(domain));
}

std::shared_ptr<OperatorOracle> make_nonlinear_composition_oracle(
    std::shared_ptr<const AnalyticFamily> family, Box domain) {
    return std::make_shared<NonlinearCompositionOracle>(std::move(family), std::move(domain));
}

double lipschitz_probe(const OperatorOracle& oracle, const CompactFamily& family, int n_pairs,
                       std::uint64_t seed, int y_points) {
    if (n_pairs < 1) throw std::invalid_argument("lipschitz_probe: n_pairs >= 1");
    const auto grid = tensor_grid(oracle.domain(), y_points);
    Rng rng(seed);
    const int B = family.parameter_dim();
    double estimate = 0.0;
    for (int n = 0; n < n_pairs; ++n) {
        Eigen::VectorXd c1(B), c2(B);
        for (int j = 0; j < B; ++j) {
            c1(j) = rng.uniform(family.box_lo(j), family.box_hi(j));
            c2(j) = rng.uniform(family.box_lo(j), family.box_hi(j));
        }
        const SpaceElement u = element_of(family, c1);
        const SpaceElement v = element_of(family, c2);
        const double dist = element_distance(family.space, u, v);
        if (dist == 0.0) continue;
        double sup = 0.0;
        for (const auto& y : grid) {
            sup = std::max(sup, (oracle.apply(u, y) - oracle.apply(v, y)).lpNorm<Eigen::Infinity>());
        }
        estimate = std::max(estimate, sup / dist);
    }
    return estimate;
}

}  // namespace tdon
