#pragma once

// Scalarizing functions, preference predicates and weight-vector machinery.

#include <prefemo/core.hpp>
#include <prefemo/rng.hpp>

#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace prefemo {

/// Aspiration level per objective plus per-objective importance weights.
struct ReferencePoint {
    Vec z;
    Vec weights;

    ReferencePoint() = default;
    explicit ReferencePoint(Vec aspiration) : z(std::move(aspiration)), weights(z.size(), 1.0 / z.size()) {}
    ReferencePoint(Vec aspiration, Vec w) : z(std::move(aspiration)), weights(std::move(w))
    {
        require(z.size() == weights.size(), "reference point: weight count must match aspiration count");
    }

    std::size_t size() const { return z.size(); }
    bool operator==(const ReferencePoint&) const = default;
};

struct WeightSet {
    enum class Structure { Uniform, Biased };

    std::vector<Vec> vectors;
    Structure structure = Structure::Uniform;

    std::size_t size() const { return vectors.size(); }
    bool operator==(const WeightSet&) const = default;
};

inline constexpr double kZeroWeightSubstitute = 1e-6;

/// Inverted Tchebycheff: max_i |f_i - z*_i| / w_i with zero weights replaced
/// by 1e-6.
inline double tchebycheff(std::span<const double> f, std::span<const double> w, std::span<const double> z_star)
{
    require(f.size() == w.size() && f.size() == z_star.size(), "tchebycheff: dimension mismatch");
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double wi = w[i] == 0.0 ? kZeroWeightSubstitute : w[i];
        worst = std::max(worst, std::abs(f[i] - z_star[i]) / wi);
    }
    return worst;
}

/// Weighted Euclidean distance to the aspiration, each objective scaled by
/// its population range. Degenerate ranges contribute nothing.
inline double weighted_distance(std::span<const double> f, const ReferencePoint& zr, std::span<const double> fmin,
                                std::span<const double> fmax)
{
    require(f.size() == zr.size() && fmin.size() == f.size() && fmax.size() == f.size(),
            "weighted_distance: dimension mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double range = fmax[i] - fmin[i];
        if (!(range > 0.0))
            continue;
        const double d = (f[i] - zr.z[i]) / range;
        sum += zr.weights[i] * d * d;
    }
    return std::sqrt(sum);
}

enum class RDominance { ARDominates, BRDominates, Neither };

/// r-dominance: Pareto dominance first, then the normalized distance
/// difference against the threshold delta. A flat distance range yields
/// Neither for incomparable pairs.
inline RDominance r_compare(std::span<const double> a, std::span<const double> b, const ReferencePoint& zr,
                            double delta, std::span<const double> fmin, std::span<const double> fmax,
                            double dist_min, double dist_max)
{
    switch (pareto_compare(a, b)) {
    case Dominance::ADominates:
        return RDominance::ARDominates;
    case Dominance::BDominates:
        return RDominance::BRDominates;
    case Dominance::Equal:
        return RDominance::Neither;
    case Dominance::Incomparable:
        break;
    }
    const double span = dist_max - dist_min;
    if (!(span > 0.0))
        return RDominance::Neither;
    const double diff = (weighted_distance(a, zr, fmin, fmax) - weighted_distance(b, zr, fmin, fmax)) / span;
    if (diff < -delta)
        return RDominance::ARDominates;
    if (diff > delta)
        return RDominance::BRDominates;
    return RDominance::Neither;
}

/// 1 when f satisfies all aspiration levels or none of them.
inline int g_flag(std::span<const double> f, std::span<const double> z)
{
    require(f.size() == z.size(), "g_flag: dimension mismatch");
    bool all_below = true;
    bool all_above = true;
    for (std::size_t i = 0; i < f.size(); ++i) {
        all_below = all_below && f[i] <= z[i];
        all_above = all_above && f[i] >= z[i];
    }
    return (all_below || all_above) ? 1 : 0;
}

/// Augmented Tchebycheff achievement scalarizing function.
inline double augmented_asf(std::span<const double> f, std::span<const double> z, std::span<const double> w,
                            double rho_aug)
{
    require(f.size() == z.size() && f.size() == w.size(), "augmented_asf: dimension mismatch");
    require(rho_aug >= 0.0, "augmented_asf: rho_aug must be nonnegative");
    double worst = -std::numeric_limits<double>::infinity();
    double sum = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double d = f[i] - z[i];
        worst = std::max(worst, w[i] * d);
        sum += d;
    }
    return worst + rho_aug * sum;
}

inline double augmented_asf(std::span<const double> f, const ReferencePoint& zr, double rho_aug)
{
    return augmented_asf(f, zr.z, zr.weights, rho_aug);
}

// ---------------------------------------------------------------- weights

inline constexpr std::size_t kMaxLatticeSize = 10'000'000;

/// C(H+m-1, m-1), saturating at SIZE_MAX.
inline std::size_t das_dennis_count(std::size_t m, std::size_t H)
{
    require(m >= 1, "das_dennis_count: m must be positive");
    const std::size_t k = std::min(m - 1, H);
    const std::size_t top = H + m - 1;
    unsigned __int128 c = 1;
    for (std::size_t i = 1; i <= k; ++i) {
        c = c * (top - k + i) / i;
        if (c > std::numeric_limits<std::size_t>::max())
            return std::numeric_limits<std::size_t>::max();
    }
    return static_cast<std::size_t>(c);
}

/// Simplex lattice with step 1/H, in lexicographic order of components.
inline WeightSet das_dennis(std::size_t m, std::size_t H)
{
    require(m >= 2, "das_dennis: m must be at least 2");
    require(H >= 1, "das_dennis: H must be at least 1");
    const std::size_t count = das_dennis_count(m, H);
    require(count <= kMaxLatticeSize, "das_dennis: lattice too large (" + std::to_string(count) + " vectors)");

    WeightSet ws;
    ws.vectors.reserve(count);
    std::vector<std::size_t> parts(m, 0);
    const double h = static_cast<double>(H);
    // recursive fill: parts[pos] takes 0..left, last component gets the remainder
    auto fill = [&](auto&& self, std::size_t pos, std::size_t left) -> void {
        if (pos + 1 == m) {
            parts[pos] = left;
            Vec w(m);
            for (std::size_t i = 0; i < m; ++i)
                w[i] = static_cast<double>(parts[i]) / h;
            ws.vectors.push_back(std::move(w));
            return;
        }
        for (std::size_t v = 0; v <= left; ++v) {
            parts[pos] = v;
            self(self, pos + 1, left - v);
        }
    };
    fill(fill, 0, H);
    return ws;
}

/// Uniform random points on the simplex via normalized exponentials.
inline WeightSet random_simplex(std::size_t m, std::size_t count, Rng& rng)
{
    require(m >= 2 && count >= 1, "random_simplex: need m >= 2 and count >= 1");
    WeightSet ws;
    for (std::size_t k = 0; k < count; ++k) {
        Vec w(m);
        double sum = 0.0;
        for (double& v : w) {
            v = rng.exponential();
            sum += v;
        }
        for (double& v : w)
            v /= sum;
        ws.vectors.push_back(std::move(w));
    }
    return ws;
}

/// Weight set sized for a population of about `target` members: H = N-1 for
/// two objectives, the largest lattice not exceeding N for 3 <= m < 25, and
/// uniform random simplex samples beyond that.
inline WeightSet weights_for_population(std::size_t m, std::size_t target, Rng& rng)
{
    require(target >= 2, "weights_for_population: need at least 2 vectors");
    if (m == 2)
        return das_dennis(2, target - 1);
    if (m >= 25)
        return random_simplex(m, target, rng);
    std::size_t H = 1;
    while (das_dennis_count(m, H + 1) <= target)
        ++H;
    return das_dennis(m, H);
}

inline double euclidean(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

/// Projects an aspiration vector onto the unit simplex: scale by the
/// ideal-nadir box, clamp negatives, renormalize. All-zero falls back to the
/// simplex centre.
inline Vec simplex_projection(std::span<const double> z, std::span<const double> ideal,
                              std::span<const double> nadir)
{
    Vec p = normalize(z, ideal, nadir);
    double sum = 0.0;
    for (double& v : p) {
        v = std::max(0.0, v);
        sum += v;
    }
    if (!(sum > 0.0) || !std::isfinite(sum)) {
        std::fill(p.begin(), p.end(), 1.0 / static_cast<double>(p.size()));
        return p;
    }
    for (double& v : p)
        v /= sum;
    return p;
}

/// Non-uniform mapping of a uniform weight set toward a pivot on the simplex.
///
/// Every vector is pulled radially toward the pivot: w' = c + s(d)(w - c)
/// with s(d) = tau (d/d_max)^(kappa-1). Near vectors collapse onto the pivot
/// while the farthest keep a fraction tau of their offset, which leaves a
/// sparse tail toward the far side of the simplex. The lattice vector nearest
/// the pivot is replaced by the pivot itself.
inline WeightSet nums_transform(const WeightSet& ws, std::span<const double> pivot, double tau, double kappa)
{
    require(tau > 0.0 && tau <= 1.0, "nums_transform: tau must be in (0, 1]");
    require(kappa >= 1.0, "nums_transform: kappa must be >= 1");
    require(!ws.vectors.empty(), "nums_transform: empty weight set");

    std::vector<double> dist(ws.size());
    double d_max = 0.0;
    std::size_t nearest = 0;
    for (std::size_t k = 0; k < ws.size(); ++k) {
        dist[k] = euclidean(ws.vectors[k], pivot);
        d_max = std::max(d_max, dist[k]);
        if (dist[k] < dist[nearest])
            nearest = k;
    }
    if (!(d_max > 0.0))
        return ws;

    WeightSet out;
    out.structure = WeightSet::Structure::Biased;
    out.vectors.reserve(ws.size());
    for (std::size_t k = 0; k < ws.size(); ++k) {
        const double scale = tau * std::pow(dist[k] / d_max, kappa - 1.0);
        Vec w(pivot.size());
        double sum = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) {
            w[i] = std::max(0.0, pivot[i] + scale * (ws.vectors[k][i] - pivot[i]));
            sum += w[i];
        }
        for (double& v : w)
            v /= sum;
        out.vectors.push_back(std::move(w));
    }
    out.vectors[nearest].assign(pivot.begin(), pivot.end());
    return out;
}

/// Redraws a weight set around best_w: each new vector is uniform in the
/// L-infinity ball of the given radius, clamped and renormalized. The first
/// entry is best_w itself.
inline WeightSet rmead2_resample(std::size_t count, std::span<const double> best_w, double radius, Rng& rng)
{
    require(radius >= 0.0, "rmead2_resample: radius must be nonnegative");
    require(count >= 1, "rmead2_resample: count must be positive");
    WeightSet out;
    out.structure = WeightSet::Structure::Biased;
    out.vectors.emplace_back(best_w.begin(), best_w.end());
    while (out.vectors.size() < count) {
        Vec w(best_w.size());
        if (radius == 0.0) {
            out.vectors.emplace_back(best_w.begin(), best_w.end());
            continue;
        }
        double sum = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) {
            w[i] = std::max(0.0, best_w[i] + rng.uniform(-radius, radius));
            sum += w[i];
        }
        if (!(sum > 0.0))
            w.assign(best_w.begin(), best_w.end());
        else
            for (double& v : w)
                v /= sum;
        out.vectors.push_back(std::move(w));
    }
    return out;
}

inline WeightSet rmead2_resample(const WeightSet& ws, std::span<const double> best_w, double radius, Rng& rng)
{
    return rmead2_resample(ws.size(), best_w, radius, rng);
}

}  // namespace prefemo
