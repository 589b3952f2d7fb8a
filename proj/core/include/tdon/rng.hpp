#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace tdon {

/// Seeded uniform generator with an explicit bit-to-double mapping, so that
/// streams are reproducible across standard library implementations
/// (std::uniform_real_distribution is not pinned by the standard).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform double in [0, 1).
    double unit() {
        return static_cast<double>(engine_() >> 11) * 0x1p-53;
    }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

    std::vector<double> uniform_vector(std::size_t n, double lo, double hi) {
        std::vector<double> out(n);
        for (auto& v : out) v = uniform(lo, hi);
        return out;
    }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        // rejection sampling keeps the draw unbiased
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

    /// Fisher-Yates shuffle of index vector, seed-deterministic.
    void shuffle(std::vector<std::size_t>& idx) {
        for (std::size_t i = idx.size(); i > 1; --i) {
            std::swap(idx[i - 1], idx[below(i)]);
        }
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace tdon
