#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace tdon {

/// Scalar activation used by ridge expansions, branch networks and trunks.
/// All three kinds are non-polynomial, hence usable wherever density of
/// dilated/shifted copies on closed intervals is required.
enum class Activation { Tanh, Relu, Sigmoid };

inline double activate(Activation a, double t) {
    switch (a) {
        case Activation::Tanh: return std::tanh(t);
        case Activation::Relu: return t > 0.0 ? t : 0.0;
        case Activation::Sigmoid: return 1.0 / (1.0 + std::exp(-t));
    }
    throw std::logic_error("unknown activation");
}

/// Derivative; the relu subgradient at 0 is taken as 0.
inline double activate_prime(Activation a, double t) {
    switch (a) {
        case Activation::Tanh: {
            const double y = std::tanh(t);
            return 1.0 - y * y;
        }
        case Activation::Relu: return t > 0.0 ? 1.0 : 0.0;
        case Activation::Sigmoid: {
            const double y = 1.0 / (1.0 + std::exp(-t));
            return y * (1.0 - y);
        }
    }
    throw std::logic_error("unknown activation");
}

inline std::string activation_name(Activation a) {
    switch (a) {
        case Activation::Tanh: return "tanh";
        case Activation::Relu: return "relu";
        case Activation::Sigmoid: return "sigmoid";
    }
    throw std::logic_error("unknown activation");
}

inline Activation activation_from_name(const std::string& s) {
    if (s == "tanh") return Activation::Tanh;
    if (s == "relu") return Activation::Relu;
    if (s == "sigmoid") return Activation::Sigmoid;
    throw std::invalid_argument("unknown activation name: " + s);
}

}  // namespace tdon
