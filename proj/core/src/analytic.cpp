#include "tdon/analytic.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace tdon {

double AnalyticFunction::value(double x) const {
    switch (kind) {
        case Kind::Constant: return amplitude;
        case Kind::Monomial: return amplitude * std::pow(x, degree);
        case Kind::Sine: return amplitude * std::sin(omega * x);
        case Kind::Cosine: return amplitude * std::cos(omega * x);
    }
    throw std::logic_error("unknown analytic function kind");
}

double AnalyticFunction::antiderivative(double y) const {
    switch (kind) {
        case Kind::Constant: return amplitude * y;
        case Kind::Monomial: return amplitude * std::pow(y, degree + 1) / (degree + 1);
        case Kind::Sine: return amplitude * (1.0 - std::cos(omega * y)) / omega;
        case Kind::Cosine: return amplitude * std::sin(omega * y) / omega;
    }
    throw std::logic_error("unknown analytic function kind");
}

AnalyticFunction AnalyticFunction::constant(double a) {
    AnalyticFunction f;
    f.kind = Kind::Constant;
    f.amplitude = a;
    return f;
}

AnalyticFunction AnalyticFunction::monomial(int degree, double a) {
    if (degree < 0) throw std::invalid_argument("monomial degree must be >= 0");
    AnalyticFunction f;
    f.kind = Kind::Monomial;
    f.degree = degree;
    f.amplitude = a;
    return f;
}

AnalyticFunction AnalyticFunction::sine(double omega, double a) {
    if (omega == 0.0) throw std::invalid_argument("sine needs omega != 0");
    AnalyticFunction f;
    f.kind = Kind::Sine;
    f.omega = omega;
    f.amplitude = a;
    return f;
}

AnalyticFunction AnalyticFunction::cosine(double omega, double a) {
    if (omega == 0.0) throw std::invalid_argument("cosine needs omega != 0");
    AnalyticFunction f;
    f.kind = Kind::Cosine;
    f.omega = omega;
    f.amplitude = a;
    return f;
}

std::string AnalyticFunction::describe() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::Constant: os << amplitude; break;
        case Kind::Monomial: os << amplitude << "*x^" << degree; break;
        case Kind::Sine: os << amplitude << "*sin(" << omega << "x)"; break;
        case Kind::Cosine: os << amplitude << "*cos(" << omega << "x)"; break;
    }
    return os.str();
}

}  // namespace tdon
