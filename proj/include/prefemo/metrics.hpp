#pragma once

// Quality indicators (E(P), IGD, hypervolume, R-IGD/R-HV), the Wilcoxon
// signed-rank test and rank aggregation.

#include <prefemo/core.hpp>
#include <prefemo/rng.hpp>
#include <prefemo/scalarize.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace prefemo {

enum class MetricId { EP, IGD, HV, R_IGD, R_HV };

inline std::string_view to_string(MetricId id)
{
    switch (id) {
    case MetricId::EP: return "EP";
    case MetricId::IGD: return "IGD";
    case MetricId::HV: return "HV";
    case MetricId::R_IGD: return "R_IGD";
    case MetricId::R_HV: return "R_HV";
    }
    return "?";
}

inline std::optional<MetricId> metric_from_string(std::string_view s)
{
    for (auto id : {MetricId::EP, MetricId::IGD, MetricId::HV, MetricId::R_IGD, MetricId::R_HV})
        if (to_string(id) == s)
            return id;
    return std::nullopt;
}

enum class Orientation { Minimize, Maximize };

inline Orientation orientation(MetricId id)
{
    return (id == MetricId::HV || id == MetricId::R_HV) ? Orientation::Maximize : Orientation::Minimize;
}

/// Best weighted-Tchebycheff accuracy of a set relative to the aspiration.
/// Negative when some member dominates the reference point.
/// Achievement term for a single vector: max_i (f_i - z_i) / w_i.
inline double ep_value(std::span<const double> f, const ReferencePoint& zr)
{
    require(f.size() == zr.size(), "ep_accuracy: dimension mismatch");
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < f.size(); ++i)
        worst = std::max(worst, (f[i] - zr.z[i]) / zr.weights[i]);
    return worst;
}

inline double ep_accuracy(std::span<const ObjectiveVector> P, const ReferencePoint& zr)
{
    require(!P.empty(), "ep_accuracy: empty solution set");
    double best = std::numeric_limits<double>::infinity();
    for (const auto& f : P)
        best = std::min(best, ep_value(f, zr));
    return best;
}

/// Mean distance from each front sample to its nearest member of P.
inline double igd(std::span<const ObjectiveVector> P, std::span<const ObjectiveVector> front_samples)
{
    require(!P.empty() && !front_samples.empty(), "igd: empty input set");
    double total = 0.0;
    for (const auto& s : front_samples) {
        double nearest = std::numeric_limits<double>::infinity();
        for (const auto& p : P)
            nearest = std::min(nearest, euclidean(s, p));
        total += nearest;
    }
    return total / static_cast<double>(front_samples.size());
}

namespace detail {

inline std::vector<ObjectiveVector> strictly_inside(std::span<const ObjectiveVector> P, std::span<const double> ref)
{
    std::vector<ObjectiveVector> kept;
    for (const auto& f : P) {
        require(f.size() == ref.size(), "hypervolume: dimension mismatch");
        bool inside = true;
        for (std::size_t i = 0; i < f.size(); ++i)
            inside = inside && f[i] < ref[i];
        if (inside)
            kept.push_back(f);
    }
    return kept;
}

inline double hv_2d(std::vector<ObjectiveVector> pts, std::span<const double> ref)
{
    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
        return a[0] < b[0] || (a[0] == b[0] && a[1] < b[1]);
    });
    double area = 0.0;
    double floor_y = ref[1];
    for (const auto& p : pts) {
        if (p[1] < floor_y) {
            area += (ref[0] - p[0]) * (floor_y - p[1]);
            floor_y = p[1];
        }
    }
    return area;
}

inline std::vector<ObjectiveVector> nondominated_only(std::vector<ObjectiveVector> pts)
{
    std::vector<ObjectiveVector> out;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < pts.size() && !dominated; ++j) {
            if (i == j)
                continue;
            const auto c = pareto_compare(pts[j], pts[i]);
            dominated = c == Dominance::ADominates || (c == Dominance::Equal && j < i);
        }
        if (!dominated)
            out.push_back(pts[i]);
    }
    return out;
}

// Dimension sweep: slice along the last objective, recurse on the prefix.
inline double hv_recursive(std::vector<ObjectiveVector> pts, std::span<const double> ref)
{
    const std::size_t d = ref.size();
    if (pts.empty())
        return 0.0;
    if (d == 1) {
        double lo = ref[0];
        for (const auto& p : pts)
            lo = std::min(lo, p[0]);
        return ref[0] - lo;
    }
    if (d == 2)
        return hv_2d(std::move(pts), ref);

    std::stable_sort(pts.begin(), pts.end(), [d](const auto& a, const auto& b) { return a[d - 1] < b[d - 1]; });
    double volume = 0.0;
    std::vector<ObjectiveVector> prefix;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        prefix.emplace_back(pts[i].begin(), pts[i].end() - 1);
        const double next = i + 1 < pts.size() ? pts[i + 1][d - 1] : ref[d - 1];
        const double height = next - pts[i][d - 1];
        if (height <= 0.0)
            continue;
        prefix = nondominated_only(std::move(prefix));
        volume += height * hv_recursive(prefix, ref.first(d - 1));
    }
    return volume;
}

}  // namespace detail

/// Exact hypervolume by dimension sweep; members not strictly better than
/// ref in every objective are ignored.
inline double hypervolume_exact(std::span<const ObjectiveVector> P, std::span<const double> ref)
{
    // the value depends only on the nondominated set, never on input order
    auto pts = detail::nondominated_only(detail::strictly_inside(P, ref));
    std::sort(pts.begin(), pts.end());
    return detail::hv_recursive(std::move(pts), ref);
}

/// Monte Carlo hypervolume over the box between the members' componentwise
/// minimum and ref.
inline double hypervolume_monte_carlo(std::span<const ObjectiveVector> P, std::span<const double> ref,
                                      std::size_t samples, std::uint64_t seed)
{
    const auto pts = detail::strictly_inside(P, ref);
    if (pts.empty())
        return 0.0;
    const std::size_t m = ref.size();
    Vec lo(ref.begin(), ref.end());
    for (const auto& p : pts)
        for (std::size_t i = 0; i < m; ++i)
            lo[i] = std::min(lo[i], p[i]);
    double box = 1.0;
    for (std::size_t i = 0; i < m; ++i)
        box *= ref[i] - lo[i];

    Rng rng(seed);
    Vec s(m);
    std::size_t hits = 0;
    for (std::size_t k = 0; k < samples; ++k) {
        for (std::size_t i = 0; i < m; ++i)
            s[i] = rng.uniform(lo[i], ref[i]);
        for (const auto& p : pts) {
            bool covers = true;
            for (std::size_t i = 0; i < m && covers; ++i)
                covers = p[i] <= s[i];
            if (covers) {
                ++hits;
                break;
            }
        }
    }
    return box * static_cast<double>(hits) / static_cast<double>(samples);
}

struct HypervolumeOptions {
    std::size_t exact_max_objectives = 4;
    std::size_t mc_samples = 100'000;
    std::uint64_t mc_seed = 20190101;
};

inline double hypervolume(std::span<const ObjectiveVector> P, std::span<const double> ref,
                          const HypervolumeOptions& opt = {})
{
    if (ref.size() <= opt.exact_max_objectives)
        return hypervolume_exact(P, ref);
    return hypervolume_monte_carlo(P, ref, opt.mc_samples, opt.mc_seed);
}

// ---------------------------------------------------------------- R-metrics

/// Frame shared by every algorithm on one instance: the aspiration, the
/// worst point that anchors the translation direction (also the R-HV
/// reference) and the per-objective ranges that define "normalized".
struct RMetricFrame {
    ReferencePoint zr;
    ObjectiveVector worst;
    Vec range;
    double delta_extent = 0.2;
};

struct RPreprocessed {
    std::vector<ObjectiveVector> points;
    std::vector<ObjectiveVector> front_samples;
    ObjectiveVector pivot;
    ObjectiveVector shift;
    bool degenerate = false;
};

namespace detail {

inline constexpr double kRMetricRho = 1e-6;

inline double normalized_asf(std::span<const double> f, const RMetricFrame& frame, double rho)
{
    double worst = -std::numeric_limits<double>::infinity();
    double sum = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double r = frame.range[i] > 0.0 ? frame.range[i] : 1.0;
        const double d = (f[i] - frame.zr.z[i]) / r;
        worst = std::max(worst, frame.zr.weights[i] * d);
        sum += d;
    }
    return worst + rho * sum;
}

inline bool within_box(std::span<const double> f, std::span<const double> centre, const RMetricFrame& frame)
{
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double half = 0.5 * frame.delta_extent * (frame.range[i] > 0.0 ? frame.range[i] : 1.0);
        if (std::abs(f[i] - centre[i]) > half)
            return false;
    }
    return true;
}

inline std::size_t argmin_asf(std::span<const ObjectiveVector> P, const RMetricFrame& frame)
{
    std::size_t best = 0;
    double best_value = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < P.size(); ++k) {
        const double v = normalized_asf(P[k], frame, kRMetricRho);
        if (v < best_value) {
            best_value = v;
            best = k;
        }
    }
    return best;
}

}  // namespace detail

/// Pivot, trim and translate a solution set before IGD/HV scoring.
///
/// The pivot is the member with the smallest (normalized, augmented) ASF to
/// the aspiration. Members outside the L-infinity box of half-width
/// delta_extent/2 around the pivot are dropped, and the survivors are shifted
/// rigidly so the pivot lands on the line from the aspiration through the
/// worst point at the position with the same ASF value. Front samples are
/// restricted to the same-sized box around the sample with the smallest ASF.
inline RPreprocessed r_preprocess(std::span<const ObjectiveVector> P, const RMetricFrame& frame,
                                  std::span<const ObjectiveVector> front_samples = {})
{
    RPreprocessed out;
    if (P.empty()) {
        out.degenerate = true;
        return out;
    }
    const std::size_t m = frame.zr.size();
    require(frame.worst.size() == m && frame.range.size() == m, "r_preprocess: frame dimension mismatch");

    out.pivot = P[detail::argmin_asf(P, frame)];
    for (const auto& f : P)
        if (detail::within_box(f, out.pivot, frame))
            out.points.push_back(f);
    if (out.points.empty()) {
        out.degenerate = true;
        return out;
    }

    double slope = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
        const double r = frame.range[i] > 0.0 ? frame.range[i] : 1.0;
        slope = std::max(slope, frame.zr.weights[i] * (frame.worst[i] - frame.zr.z[i]) / r);
    }
    out.shift.assign(m, 0.0);
    if (slope > 0.0) {
        const double k = detail::normalized_asf(out.pivot, frame, 0.0) / slope;
        for (std::size_t i = 0; i < m; ++i)
            out.shift[i] = frame.zr.z[i] + k * (frame.worst[i] - frame.zr.z[i]) - out.pivot[i];
    }
    for (auto& f : out.points)
        for (std::size_t i = 0; i < m; ++i)
            f[i] += out.shift[i];

    if (!front_samples.empty()) {
        const auto& centre = front_samples[detail::argmin_asf(front_samples, frame)];
        for (const auto& s : front_samples)
            if (detail::within_box(s, centre, frame))
                out.front_samples.push_back(s);
    }
    return out;
}

inline double r_igd(std::span<const ObjectiveVector> P, const RMetricFrame& frame,
                    std::span<const ObjectiveVector> front_samples)
{
    require(!front_samples.empty(), "r_igd: no front samples");
    const auto pre = r_preprocess(P, frame, front_samples);
    if (pre.degenerate)
        return std::numeric_limits<double>::infinity();
    return igd(pre.points, pre.front_samples);
}

inline double r_hv(std::span<const ObjectiveVector> P, const RMetricFrame& frame, const HypervolumeOptions& opt = {})
{
    const auto pre = r_preprocess(P, frame);
    if (pre.degenerate)
        return 0.0;
    return hypervolume(pre.points, frame.worst, opt);
}

// ----------------------------------------------------------------- Wilcoxon

struct TestOutcome {
    double statistic = 0.0;  // W+, the positive-difference rank sum
    double p_value = 1.0;
    bool significant = false;
    std::size_t n_effective = 0;
    bool exact = true;
};

inline constexpr std::size_t kWilcoxonExactLimit = 25;

namespace detail {

// Midranks of |d|, returned doubled so ties stay integral.
inline std::vector<long> doubled_midranks(const Vec& abs_diff)
{
    const std::size_t n = abs_diff.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return abs_diff[a] < abs_diff[b]; });
    std::vector<long> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && abs_diff[order[j + 1]] == abs_diff[order[i]])
            ++j;
        const long doubled = static_cast<long>(i + 1 + j + 1);  // 2 * mean of ranks i+1..j+1
        for (std::size_t k = i; k <= j; ++k)
            ranks[order[k]] = doubled;
        i = j + 1;
    }
    return ranks;
}

}  // namespace detail

/// Two-sided paired Wilcoxon signed-rank test. Zero differences are dropped.
/// Exact null distribution (midranks, by subset-sum counting) for n <= 25,
/// tie-corrected normal approximation with continuity correction above.
inline TestOutcome wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b, double alpha = 0.05)
{
    require(a.size() == b.size(), "wilcoxon_signed_rank: samples must be paired");
    Vec abs_diff;
    std::vector<bool> positive;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        if (d == 0.0)
            continue;
        abs_diff.push_back(std::abs(d));
        positive.push_back(d > 0.0);
    }
    TestOutcome out;
    out.n_effective = abs_diff.size();
    if (abs_diff.empty())
        return out;
    require(abs_diff.size() >= 5, "wilcoxon_signed_rank: need at least 5 non-zero differences");

    const auto ranks = detail::doubled_midranks(abs_diff);
    long w2 = 0;
    long total = 0;
    for (std::size_t i = 0; i < ranks.size(); ++i) {
        total += ranks[i];
        if (positive[i])
            w2 += ranks[i];
    }
    out.statistic = static_cast<double>(w2) / 2.0;
    const std::size_t n = ranks.size();

    if (n <= kWilcoxonExactLimit) {
        std::vector<double> count(static_cast<std::size_t>(total) + 1, 0.0);
        count[0] = 1.0;
        long reach = 0;
        for (long r : ranks) {
            for (long s = reach; s >= 0; --s)
                if (count[s] != 0.0)
                    count[s + r] += count[s];
            reach += r;
        }
        double lower = 0.0, upper = 0.0, all = 0.0;
        for (long s = 0; s <= total; ++s) {
            all += count[s];
            if (s <= w2)
                lower += count[s];
            if (s >= w2)
                upper += count[s];
        }
        out.p_value = std::min(1.0, 2.0 * std::min(lower, upper) / all);
    } else {
        out.exact = false;
        const double nn = static_cast<double>(n);
        const double mean = nn * (nn + 1.0) / 4.0;
        double var = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0;
        Vec sorted_ranks(ranks.begin(), ranks.end());
        std::sort(sorted_ranks.begin(), sorted_ranks.end());
        for (std::size_t i = 0; i < sorted_ranks.size();) {
            std::size_t j = i;
            while (j < sorted_ranks.size() && sorted_ranks[j] == sorted_ranks[i])
                ++j;
            const double t = static_cast<double>(j - i);
            var -= (t * t * t - t) / 48.0;
            i = j;
        }
        const double diff = out.statistic - mean;
        const double corrected = std::max(0.0, std::abs(diff) - 0.5);
        const double z = var > 0.0 ? corrected / std::sqrt(var) : 0.0;
        out.p_value = std::min(1.0, std::erfc(z / std::sqrt(2.0)));
    }
    out.significant = out.p_value < alpha;
    return out;
}

// -------------------------------------------------------------------- ranks

/// Competition ranking per instance (row): 1 is best, ties share the lower
/// rank and the next distinct value skips ahead.
inline std::vector<std::vector<int>> rank_table(const std::vector<Vec>& values, Orientation orient)
{
    std::vector<std::vector<int>> ranks;
    ranks.reserve(values.size());
    for (const auto& row : values) {
        std::vector<int> r(row.size(), 1);
        for (std::size_t i = 0; i < row.size(); ++i)
            for (std::size_t j = 0; j < row.size(); ++j) {
                const bool better = orient == Orientation::Minimize ? row[j] < row[i] : row[j] > row[i];
                if (better)
                    ++r[i];
            }
        ranks.push_back(std::move(r));
    }
    return ranks;
}

/// Linear-interpolation quantile on the (n+1)p plotting position, clamped to
/// the sample range.
inline double quantile(Vec values, double p)
{
    require(!values.empty(), "quantile: empty sample");
    std::sort(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    const double h = std::clamp((n + 1.0) * p, 1.0, n);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const double frac = h - static_cast<double>(lo);
    if (lo >= values.size())
        return values.back();
    return values[lo - 1] + frac * (values[lo] - values[lo - 1]);
}

inline double median(const Vec& values) { return quantile(values, 0.5); }

inline double interquartile_range(const Vec& values) { return quantile(values, 0.75) - quantile(values, 0.25); }

}  // namespace prefemo
