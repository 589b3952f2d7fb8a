#pragma once

#include <memory>
#include <string>

#include <Eigen/Dense>

#include "tdon/deeponet.hpp"
#include "tdon/spaces.hpp"

namespace tdon {

enum class OperatorKind {
    Antiderivative,
    RankOneMatrix,
    PowerSeries,
    GaussianConvolution,
    NonlinearComposition,
};

std::string operator_kind_name(OperatorKind k);
OperatorKind operator_kind_from_name(const std::string& s);

/// Synthetic ground-truth operator G : V -> C(K; R^m) with a closed-form
/// oracle. Each kind is Lipschitz on its family's box with the computable
/// constant returned by lipschitz_bound().
class OperatorOracle {
public:
    virtual ~OperatorOracle() = default;

    virtual OperatorKind kind() const = 0;
    virtual const MeasurementSpace& space() const = 0;
    virtual const Box& domain() const = 0;
    virtual int output_dim() const = 0;

    /// Throws if u is from a different space or y lies outside the domain.
    virtual Eigen::VectorXd apply(const SpaceElement& u, const Eigen::VectorXd& y) const = 0;

    /// Analytic constant L with sup_y ||G(u) - G(v)|| <= L * dist(u, v),
    /// distance taken in the space's default metric.
    virtual double lipschitz_bound() const = 0;

    OperatorFn as_fn() const {
        return [this](const SpaceElement& u, const Eigen::VectorXd& y) { return apply(u, y); };
    }
};

/// G(u)(y) = integral of u from 0 to y, evaluated analytically from the
/// family's closed-form basis coefficients. L2Interval, d = 1, m = 1.
std::shared_ptr<OperatorOracle> make_antiderivative_oracle(
    std::shared_ptr<const AnalyticFamily> family, Box domain);

/// G(A)(y) = softplus(trace(W0^T A)) * v * sin(omega0 . y + zeta0).
std::shared_ptr<OperatorOracle> make_rank_one_matrix_oracle(const MeasurementSpace& space,
                                                            Eigen::MatrixXd w0, Eigen::VectorXd v,
                                                            Eigen::VectorXd omega0, double zeta0,
                                                            Box domain);

/// G(x)(y) = sum_{n=1..N} x_n y^{n-1}; requires the domain inside (-1, 1).
std::shared_ptr<OperatorOracle> make_power_series_oracle(const MeasurementSpace& space,
                                                         Box domain);

/// Hermite-diagonal Gaussian smoothing: coefficient n is damped by
/// exp(-damping_rate * n). See the Mehler-kernel note in the implementation.
std::shared_ptr<OperatorOracle> make_gaussian_convolution_oracle(const MeasurementSpace& space,
                                                                 double damping_rate, Box domain);

/// G(u)(y) = sin(u(y)) with u reconstructed from basis coefficients.
std::shared_ptr<OperatorOracle> make_nonlinear_composition_oracle(
    std::shared_ptr<const AnalyticFamily> family, Box domain);

/// max over sampled pairs of sup_y ||G(u) - G(v)||_inf / dist(u, v), using a
/// fixed grid over the oracle's domain; seed-deterministic.
double lipschitz_probe(const OperatorOracle& oracle, const CompactFamily& family, int n_pairs,
                       std::uint64_t seed, int y_points = 65);

}  // namespace tdon
