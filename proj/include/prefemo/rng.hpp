#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>

namespace prefemo {

/// Seeded random stream. Draws are derived from the raw 64-bit engine output
/// so sequences are identical across standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform index in [0, n).
    std::size_t index(std::size_t n)
    {
        const auto i = static_cast<std::size_t>(uniform() * static_cast<double>(n));
        return i < n ? i : n - 1;
    }

    bool bernoulli(double p) { return uniform() < p; }

    /// Standard normal via Box-Muller (no cached second variate).
    double normal()
    {
        double u1 = uniform();
        while (u1 <= 0.0)
            u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

    /// Unit-rate exponential.
    double exponential()
    {
        double u = uniform();
        while (u <= 0.0)
            u = uniform();
        return -std::log(u);
    }

    template <class It>
    void shuffle(It first, It last)
    {
        const auto n = static_cast<std::size_t>(last - first);
        for (std::size_t i = n; i > 1; --i)
            std::swap(first[i - 1], first[index(i)]);
    }

    std::uint64_t next_u64() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

}  // namespace prefemo
