#pragma once

// Domain types and Pareto machinery shared by every algorithm and metric.
// All objectives are minimized; maximized objectives are negated by the
// problem layer before they reach anything in this header.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace prefemo {

/// Raised when a caller breaks a documented precondition.
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

inline void require(bool condition, const std::string& message)
{
    if (!condition)
        throw ContractViolation(message);
}

using Vec = std::vector<double>;
using ObjectiveVector = Vec;

struct Solution {
    Vec x;
    ObjectiveVector f;
    std::uint64_t id = 0;

    bool operator==(const Solution&) const = default;
};

struct BoxBounds {
    Vec lower;
    Vec upper;

    BoxBounds() = default;
    BoxBounds(Vec lo, Vec hi) : lower(std::move(lo)), upper(std::move(hi))
    {
        require(lower.size() == upper.size(), "bounds: lower/upper size mismatch");
        for (std::size_t i = 0; i < lower.size(); ++i)
            require(lower[i] < upper[i], "bounds: lower must be < upper at index " + std::to_string(i));
    }

    static BoxBounds uniform(std::size_t n, double lo, double hi)
    {
        return BoxBounds(Vec(n, lo), Vec(n, hi));
    }

    std::size_t size() const { return lower.size(); }

    bool contains(std::span<const double> x) const
    {
        if (x.size() != lower.size())
            return false;
        for (std::size_t i = 0; i < x.size(); ++i)
            if (!(x[i] >= lower[i] && x[i] <= upper[i]))
                return false;
        return true;
    }

    double clamp(std::size_t i, double v) const { return std::clamp(v, lower[i], upper[i]); }

    bool operator==(const BoxBounds&) const = default;
};

enum class Dominance { ADominates, BDominates, Incomparable, Equal };

inline Dominance pareto_compare(std::span<const double> a, std::span<const double> b)
{
    require(a.size() == b.size(), "pareto_compare: dimension mismatch");
    bool a_better = false;
    bool b_better = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] < b[i])
            a_better = true;
        else if (b[i] < a[i])
            b_better = true;
        if (a_better && b_better)
            return Dominance::Incomparable;
    }
    if (a_better)
        return Dominance::ADominates;
    if (b_better)
        return Dominance::BDominates;
    return Dominance::Equal;
}

inline bool dominates(std::span<const double> a, std::span<const double> b)
{
    return pareto_compare(a, b) == Dominance::ADominates;
}

using Fronts = std::vector<std::vector<std::size_t>>;

/// Front peeling for an arbitrary strict "better than" relation over n items.
/// `better(i, j)` must return true when item i beats item j. Each front lists
/// indices in ascending (insertion) order. Relations that are not transitive
/// may contain cycles; when nothing is left undominated the members with the
/// fewest remaining dominators form the next front.
template <class Better>
Fronts sort_fronts(std::size_t n, Better&& better)
{
    Fronts fronts;
    if (n == 0)
        return fronts;

    std::vector<std::vector<std::size_t>> beats(n);
    std::vector<std::size_t> beaten_by(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (better(i, j)) {
                beats[i].push_back(j);
                ++beaten_by[j];
            } else if (better(j, i)) {
                beats[j].push_back(i);
                ++beaten_by[i];
            }
        }
    }

    std::vector<bool> assigned(n, false);
    std::size_t remaining = n;
    while (remaining > 0) {
        std::vector<std::size_t> front;
        for (std::size_t i = 0; i < n; ++i)
            if (!assigned[i] && beaten_by[i] == 0)
                front.push_back(i);
        if (front.empty()) {
            std::size_t least = std::numeric_limits<std::size_t>::max();
            for (std::size_t i = 0; i < n; ++i)
                if (!assigned[i])
                    least = std::min(least, beaten_by[i]);
            for (std::size_t i = 0; i < n; ++i)
                if (!assigned[i] && beaten_by[i] == least)
                    front.push_back(i);
        }
        for (std::size_t i : front) {
            assigned[i] = true;
            --remaining;
        }
        for (std::size_t i : front)
            for (std::size_t j : beats[i])
                if (!assigned[j] && beaten_by[j] > 0)
                    --beaten_by[j];
        fronts.push_back(std::move(front));
    }
    return fronts;
}

/// Deb's fast non-dominated sort over objective vectors. Front 0 is the
/// non-dominated set; indices refer to positions in `objectives`.
inline Fronts fast_nondominated_sort(std::span<const ObjectiveVector> objectives)
{
    return sort_fronts(objectives.size(), [&](std::size_t i, std::size_t j) {
        return dominates(objectives[i], objectives[j]);
    });
}

/// NSGA-II crowding distance. Extremes of each objective get +inf; an
/// objective with zero range contributes nothing to any member.
inline Vec crowding_distance(std::span<const ObjectiveVector> front)
{
    constexpr double inf = std::numeric_limits<double>::infinity();
    const std::size_t n = front.size();
    Vec distance(n, 0.0);
    if (n <= 2) {
        std::fill(distance.begin(), distance.end(), inf);
        return distance;
    }
    const std::size_t m = front[0].size();
    std::vector<std::size_t> order(n);
    for (std::size_t obj = 0; obj < m; ++obj) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (front[a][obj] != front[b][obj])
                return front[a][obj] < front[b][obj];
            return front[a] < front[b];
        });
        const double lo = front[order.front()][obj];
        const double hi = front[order.back()][obj];
        const double range = hi - lo;
        if (!(range > 0.0))
            continue;
        for (std::size_t k = 0; k < n; ++k) {
            const double v = front[order[k]][obj];
            if (v == lo || v == hi) {
                distance[order[k]] = inf;
                continue;
            }
            distance[order[k]] += (front[order[k + 1]][obj] - front[order[k - 1]][obj]) / range;
        }
    }
    // identical members sit next to each other in every ordering; they share
    // their group's total so the result does not depend on input order
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return front[a] < front[b]; });
    for (std::size_t begin = 0; begin < n;) {
        std::size_t end = begin + 1;
        double total = distance[order[begin]];
        while (end < n && front[order[end]] == front[order[begin]])
            total += distance[order[end++]];
        for (std::size_t k = begin; k < end; ++k)
            distance[order[k]] = total / static_cast<double>(end - begin);
        begin = end;
    }
    return distance;
}

/// Affine map of f into the box spanned by ideal and nadir; a dimension whose
/// range is not positive maps to 0.
inline ObjectiveVector normalize(std::span<const double> f, std::span<const double> ideal,
                                 std::span<const double> nadir)
{
    require(f.size() == ideal.size() && f.size() == nadir.size(), "normalize: dimension mismatch");
    ObjectiveVector out(f.size(), 0.0);
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double range = nadir[i] - ideal[i];
        out[i] = range > 0.0 ? (f[i] - ideal[i]) / range : 0.0;
    }
    return out;
}

inline bool all_finite(std::span<const double> v)
{
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

/// Ordered multiset of solutions plus running ideal/nadir estimates.
///
/// The ideal point is the componentwise minimum over every solution ever
/// passed to observe(); the nadir estimate is the componentwise maximum over
/// the current non-dominated set, floored at the ideal.
class Population {
public:
    std::vector<Solution> members;
    Vec ideal;
    Vec nadir_est;

    std::size_t size() const { return members.size(); }
    bool empty() const { return members.empty(); }

    std::vector<ObjectiveVector> objectives() const
    {
        std::vector<ObjectiveVector> out;
        out.reserve(members.size());
        for (const auto& s : members)
            out.push_back(s.f);
        return out;
    }

    void observe(std::span<const double> f)
    {
        if (ideal.empty())
            ideal.assign(f.begin(), f.end());
        for (std::size_t i = 0; i < f.size(); ++i)
            ideal[i] = std::min(ideal[i], f[i]);
    }

    void refresh_nadir()
    {
        if (members.empty())
            return;
        for (const auto& s : members)
            observe(s.f);
        const auto objs = objectives();
        const auto fronts = fast_nondominated_sort(objs);
        const std::size_t m = objs.front().size();
        nadir_est.assign(m, -std::numeric_limits<double>::infinity());
        for (std::size_t idx : fronts.front())
            for (std::size_t i = 0; i < m; ++i)
                nadir_est[i] = std::max(nadir_est[i], objs[idx][i]);
        for (std::size_t i = 0; i < m; ++i)
            nadir_est[i] = std::max(nadir_est[i], ideal[i]);
    }

    bool operator==(const Population&) const = default;
};

}  // namespace prefemo
