#pragma once

// Real-coded variation: simulated binary crossover and polynomial mutation.

#include <prefemo/core.hpp>
#include <prefemo/rng.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace prefemo {

struct VariationParams {
    double eta_c = 20.0;
    double p_c = 0.9;
    double eta_m = 20.0;
    double p_m = -1.0;  // negative means 1/n

    double mutation_rate(std::size_t n) const { return p_m < 0.0 ? 1.0 / static_cast<double>(n) : p_m; }
    bool operator==(const VariationParams&) const = default;
};

/// SBX spread factor for a uniform draw u; u = 0.5 gives beta = 1.
inline double sbx_beta(double u, double eta_c)
{
    if (u <= 0.5)
        return std::pow(2.0 * u, 1.0 / (eta_c + 1.0));
    return std::pow(1.0 / (2.0 * (1.0 - u)), 1.0 / (eta_c + 1.0));
}

/// Bounds-aware spread factor: the part of the SBX distribution that would
/// land beyond a bound is folded back. `beta_bound` is 1 + 2 (distance from
/// the nearer parent to the bound) / (parent gap); infinity recovers sbx_beta.
inline double sbx_beta_bounded(double u, double eta_c, double beta_bound)
{
    const double alpha = 2.0 - std::pow(beta_bound, -(eta_c + 1.0));
    if (u <= 1.0 / alpha)
        return std::pow(u * alpha, 1.0 / (eta_c + 1.0));
    return std::pow(1.0 / (2.0 - u * alpha), 1.0 / (eta_c + 1.0));
}

/// One SBX gene pair. Children keep the parents' order (c1 sits on p1's
/// side); with infinite bounds and u = 0.5 the children equal the parents.
inline std::pair<double, double> sbx_gene(double p1, double p2, double u, double eta_c,
                                          double lower = -std::numeric_limits<double>::infinity(),
                                          double upper = std::numeric_limits<double>::infinity())
{
    const double y1 = std::min(p1, p2);
    const double y2 = std::max(p1, p2);
    const double gap = y2 - y1;
    if (!(gap > 0.0))
        return {p1, p2};
    const double mid = 0.5 * (y1 + y2);
    const double low = mid - 0.5 * gap * sbx_beta_bounded(u, eta_c, 1.0 + 2.0 * (y1 - lower) / gap);
    const double high = mid + 0.5 * gap * sbx_beta_bounded(u, eta_c, 1.0 + 2.0 * (upper - y2) / gap);
    return p1 <= p2 ? std::pair{low, high} : std::pair{high, low};
}

/// Each gene crosses with probability 1/2 once the pair is selected for
/// crossover (probability p_c), and a crossed gene lands in either child
/// with equal probability. Children are clamped to the bounds.
inline std::pair<Vec, Vec> sbx_crossover(std::span<const double> p1, std::span<const double> p2, double eta_c,
                                         double p_c, const BoxBounds& bounds, Rng& rng)
{
    require(p1.size() == p2.size() && p1.size() == bounds.size(), "sbx_crossover: dimension mismatch");
    Vec c1(p1.begin(), p1.end());
    Vec c2(p2.begin(), p2.end());
    if (!rng.bernoulli(p_c))
        return {std::move(c1), std::move(c2)};
    for (std::size_t i = 0; i < c1.size(); ++i) {
        if (!rng.bernoulli(0.5) || std::abs(p1[i] - p2[i]) < 1e-14)
            continue;
        auto [a, b] = sbx_gene(p1[i], p2[i], rng.uniform(), eta_c, bounds.lower[i], bounds.upper[i]);
        if (rng.bernoulli(0.5))
            std::swap(a, b);
        c1[i] = bounds.clamp(i, a);
        c2[i] = bounds.clamp(i, b);
    }
    return {std::move(c1), std::move(c2)};
}

/// Polynomial perturbation as a fraction of the variable range; u = 0.5
/// gives 0. `below` and `above` are the gene's distances to its bounds as
/// fractions of the range (1 leaves the distribution unfolded).
inline double polynomial_delta(double u, double eta_m, double below = 1.0, double above = 1.0)
{
    const double power = 1.0 / (eta_m + 1.0);
    if (u < 0.5) {
        const double val = 2.0 * u + (1.0 - 2.0 * u) * std::pow(1.0 - below, eta_m + 1.0);
        return std::pow(val, power) - 1.0;
    }
    const double val = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * std::pow(1.0 - above, eta_m + 1.0);
    return 1.0 - std::pow(val, power);
}

inline Vec polynomial_mutation(std::span<const double> x, double eta_m, double p_m, const BoxBounds& bounds, Rng& rng)
{
    require(x.size() == bounds.size(), "polynomial_mutation: dimension mismatch");
    Vec y(x.begin(), x.end());
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (!rng.bernoulli(p_m))
            continue;
        const double range = bounds.upper[i] - bounds.lower[i];
        const double below = (y[i] - bounds.lower[i]) / range;
        const double above = (bounds.upper[i] - y[i]) / range;
        const double delta = polynomial_delta(rng.uniform(), eta_m, below, above);
        y[i] = bounds.clamp(i, y[i] + delta * range);
    }
    return y;
}

}  // namespace prefemo
