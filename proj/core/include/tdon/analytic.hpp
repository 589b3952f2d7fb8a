#pragma once

#include <string>
#include <vector>

namespace tdon {

/// Closed-form scalar function on an interval, with an exact antiderivative.
/// Used for function-space family bases, integral densities, and ground-truth
/// operators that integrate or compose their input analytically.
struct AnalyticFunction {
    enum class Kind { Constant, Monomial, Sine, Cosine };

    Kind kind = Kind::Constant;
    double amplitude = 1.0;
    double omega = 0.0;  // angular frequency (Sine/Cosine)
    int degree = 0;      // Monomial

    double value(double x) const;
    /// Integral from 0 to y.
    double antiderivative(double y) const;

    static AnalyticFunction constant(double a);
    static AnalyticFunction monomial(int degree, double a = 1.0);
    static AnalyticFunction sine(double omega, double a = 1.0);
    static AnalyticFunction cosine(double omega, double a = 1.0);

    std::string describe() const;
};

using AnalyticBasis = std::vector<AnalyticFunction>;

}  // namespace tdon
