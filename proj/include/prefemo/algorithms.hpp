#pragma once

// Nine generational EMO configurations behind one stepwise engine.
//
//   dominance  : NSGA-III, R-NSGA-II, r-NSGA-II, g-NSGA-II
//   indicator  : IBEA, PBEA
//   decomposition : MOEA/D, RMEAD2, MOEA/D-NUMS
//
// An Engine owns its RNG stream and population and advances one generation
// per step(); run() drives it to a budget. The steering service uses the
// same Engine so interactive and batch runs share one code path.

#include <prefemo/core.hpp>
#include <prefemo/metrics.hpp>
#include <prefemo/problems.hpp>
#include <prefemo/rng.hpp>
#include <prefemo/scalarize.hpp>
#include <prefemo/variation.hpp>

#include <array>
#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace prefemo {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class AlgorithmKind { NSGA3, IBEA, MOEAD, RNSGA2, rNSGA2, gNSGA2, PBEA, RMEAD2, MOEAD_NUMS };

inline constexpr std::array<std::pair<AlgorithmKind, std::string_view>, 9> kAlgorithmNames{{
    {AlgorithmKind::NSGA3, "NSGA-III"},
    {AlgorithmKind::IBEA, "IBEA"},
    {AlgorithmKind::MOEAD, "MOEA/D"},
    {AlgorithmKind::RNSGA2, "R-NSGA-II"},
    {AlgorithmKind::rNSGA2, "r-NSGA-II"},
    {AlgorithmKind::gNSGA2, "g-NSGA-II"},
    {AlgorithmKind::PBEA, "PBEA"},
    {AlgorithmKind::RMEAD2, "RMEAD2"},
    {AlgorithmKind::MOEAD_NUMS, "MOEA/D-NUMS"},
}};

inline std::string_view to_string(AlgorithmKind k)
{
    for (const auto& [kind, name] : kAlgorithmNames)
        if (kind == k)
            return name;
    return "?";
}

inline std::optional<AlgorithmKind> algorithm_from_string(std::string_view s)
{
    for (const auto& [kind, name] : kAlgorithmNames)
        if (name == s)
            return kind;
    return std::nullopt;
}

inline bool is_preference_kind(AlgorithmKind k)
{
    return !(k == AlgorithmKind::NSGA3 || k == AlgorithmKind::IBEA || k == AlgorithmKind::MOEAD);
}

inline bool is_decomposition_kind(AlgorithmKind k)
{
    return k == AlgorithmKind::MOEAD || k == AlgorithmKind::RMEAD2 || k == AlgorithmKind::MOEAD_NUMS;
}

inline bool accepts_many_references(AlgorithmKind k)
{
    return k == AlgorithmKind::RNSGA2 || k == AlgorithmKind::PBEA;
}

struct AlgorithmSpec {
    AlgorithmKind kind = AlgorithmKind::NSGA3;
    std::size_t population_size = 100;
    VariationParams variation;

    double ibea_kappa = 0.05;
    double pbea_sigma = 0.05;
    double pbea_rho_aug = 1e-4;
    double epsilon_clear = 0.01;
    double r_delta = 0.3;
    std::size_t neighborhood_size = 20;
    std::size_t replacement_cap = 2;
    double nums_tau = 0.3;  // roi_extent
    double nums_kappa = 2.0;
    double rmead2_initial_radius = 0.2;
    double rmead2_min_radius = 1e-3;
    std::size_t rmead2_stagnation = 10;
    std::size_t rmead2_period = 10;

    std::vector<ReferencePoint> reference_points;

    /// Throws ConfigError naming the first broken rule.
    void validate(std::size_t m) const
    {
        if (population_size < 4)
            throw ConfigError("population_size must be at least 4");
        if (is_preference_kind(kind) && reference_points.empty())
            throw ConfigError(std::string(to_string(kind)) + " needs at least one reference point");
        if (!accepts_many_references(kind) && reference_points.size() > 1)
            throw ConfigError(std::string(to_string(kind)) + " takes a single reference point");
        for (const auto& r : reference_points) {
            if (r.size() != m)
                throw ConfigError("reference point has " + std::to_string(r.size()) + " components, problem has " +
                                  std::to_string(m) + " objectives");
            if (!all_finite(r.z) || !all_finite(r.weights))
                throw ConfigError("reference point must be finite");
        }
        if (!(ibea_kappa > 0.0) || !(pbea_sigma > 0.0) || pbea_rho_aug < 0.0)
            throw ConfigError("kappa and sigma must be positive, rho_aug nonnegative");
        if (r_delta < 0.0 || r_delta > 1.0)
            throw ConfigError("r-dominance delta must be in [0, 1]");
        if (!(nums_tau > 0.0 && nums_tau <= 1.0) || nums_kappa < 1.0)
            throw ConfigError("NUMS tau must be in (0, 1] and kappa >= 1");
        if (neighborhood_size < 2 || replacement_cap < 1)
            throw ConfigError("neighborhood_size must be >= 2 and replacement_cap >= 1");
        if (!(rmead2_initial_radius > 0.0) || !(rmead2_min_radius > 0.0) || rmead2_period == 0)
            throw ConfigError("RMEAD2 radius schedule must be positive");
    }

    bool operator==(const AlgorithmSpec&) const = default;
};

/// Variation defaults used for portfolio problems (SBX eta 30).
inline AlgorithmSpec with_portfolio_variation(AlgorithmSpec spec)
{
    spec.variation.eta_c = 30.0;
    return spec;
}

struct GenerationRecord {
    std::size_t generation = 0;
    std::size_t evaluations = 0;
    std::map<std::string, double> metrics;

    bool operator==(const GenerationRecord&) const = default;
};

struct RunResult {
    Population final_population;
    std::vector<GenerationRecord> records;
    std::uint64_t seed = 0;
    double wall_clock_seconds = 0.0;

    /// Equality of everything except wall-clock time.
    bool same_outcome(const RunResult& other) const
    {
        return final_population == other.final_population && records == other.records && seed == other.seed;
    }
};

struct GenerationView {
    std::size_t generation;
    std::size_t evaluations;
    const Population& population;
};

using Observer = std::function<void(const GenerationView&)>;

// ------------------------------------------------------------------ pieces

/// IBEA fitness: F(x) = sum over x' != x of -exp(-I(x', x) / kappa), with
/// the additive epsilon indicator I(a, b) = max_i (a_i - b_i).
inline Vec ibea_fitness(std::span<const ObjectiveVector> pop, double kappa)
{
    require(kappa > 0.0, "ibea_fitness: kappa must be positive");
    Vec F(pop.size(), 0.0);
    for (std::size_t x = 0; x < pop.size(); ++x)
        for (std::size_t other = 0; other < pop.size(); ++other) {
            if (other == x)
                continue;
            double I = -std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < pop[x].size(); ++i)
                I = std::max(I, pop[other][i] - pop[x][i]);
            F[x] -= std::exp(-I / kappa);
        }
    return F;
}

inline double epsilon_indicator(std::span<const double> a, std::span<const double> b)
{
    double I = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < a.size(); ++i)
        I = std::max(I, a[i] - b[i]);
    return I;
}

/// Preference-weighted epsilon indicator: I(a, b) / (s(a) + sigma - min s),
/// s being the augmented ASF over the population.
inline double pbea_indicator(std::span<const double> a, std::span<const double> b,
                             std::span<const ObjectiveVector> pop, const ReferencePoint& zr, double sigma,
                             double rho_aug)
{
    require(sigma > 0.0, "pbea_indicator: sigma must be positive");
    double s_min = std::numeric_limits<double>::infinity();
    for (const auto& f : pop)
        s_min = std::min(s_min, augmented_asf(f, zr, rho_aug));
    return epsilon_indicator(a, b) / (augmented_asf(a, zr, rho_aug) + sigma - s_min);
}

namespace detail {

inline void objective_extrema(std::span<const ObjectiveVector> objs, Vec& fmin, Vec& fmax)
{
    const std::size_t m = objs.front().size();
    fmin.assign(m, std::numeric_limits<double>::infinity());
    fmax.assign(m, -std::numeric_limits<double>::infinity());
    for (const auto& f : objs)
        for (std::size_t i = 0; i < m; ++i) {
            fmin[i] = std::min(fmin[i], f[i]);
            fmax[i] = std::max(fmax[i], f[i]);
        }
}

inline double normalized_distance(std::span<const double> a, std::span<const double> b, const Vec& fmin,
                                  const Vec& fmax)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double r = fmax[i] - fmin[i];
        const double d = r > 0.0 ? (a[i] - b[i]) / r : 0.0;
        s += d * d;
    }
    return std::sqrt(s);
}

// Preference order of `members` (indices into objs): each member's rank is
// its best position in any reference point's distance ordering; ties go to
// the smaller minimum distance, then to the lower index.
inline std::vector<std::size_t> preference_order(std::span<const ObjectiveVector> objs,
                                                 const std::vector<std::size_t>& members,
                                                 const std::vector<ReferencePoint>& refs, const Vec& fmin,
                                                 const Vec& fmax)
{
    const std::size_t n = members.size();
    std::vector<std::size_t> best_rank(n, std::numeric_limits<std::size_t>::max());
    Vec best_dist(n, std::numeric_limits<double>::infinity());
    std::vector<std::size_t> order(n);
    Vec dist(n);
    for (const auto& ref : refs) {
        for (std::size_t k = 0; k < n; ++k) {
            dist[k] = weighted_distance(objs[members[k]], ref, fmin, fmax);
            best_dist[k] = std::min(best_dist[k], dist[k]);
        }
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return dist[a] < dist[b]; });
        for (std::size_t pos = 0; pos < n; ++pos)
            best_rank[order[pos]] = std::min(best_rank[order[pos]], pos);
    }
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (best_rank[a] != best_rank[b])
            return best_rank[a] < best_rank[b];
        return best_dist[a] < best_dist[b];
    });
    std::vector<std::size_t> out(n);
    for (std::size_t k = 0; k < n; ++k)
        out[k] = members[order[k]];
    return out;
}

}  // namespace detail

/// R-NSGA-II environmental selection over a merged population.
///
/// Whole fronts are admitted while they fit. The front that overflows is
/// ordered by preference (distance to the closest reference point, see
/// detail::preference_order), then an epsilon-clearing pass keeps only the
/// best-ranked member of any group closer than epsilon_clear in normalized
/// objective space. Cleared members fill leftover capacity in rank order.
/// Returns selected indices, in selection order.
inline std::vector<std::size_t> rnsga2_select(std::span<const ObjectiveVector> mixed,
                                              const std::vector<ReferencePoint>& refs, double epsilon_clear,
                                              std::size_t N)
{
    require(mixed.size() >= N, "rnsga2_select: fewer candidates than slots");
    require(!refs.empty(), "rnsga2_select: no reference points");
    Vec fmin, fmax;
    detail::objective_extrema(mixed, fmin, fmax);
    std::vector<std::size_t> selected;
    selected.reserve(N);
    for (const auto& front : fast_nondominated_sort(mixed)) {
        if (selected.size() == N)
            break;
        if (selected.size() + front.size() <= N) {
            selected.insert(selected.end(), front.begin(), front.end());
            continue;
        }
        const auto ranked = detail::preference_order(mixed, front, refs, fmin, fmax);
        std::vector<std::size_t> kept, cleared;
        for (std::size_t idx : ranked) {
            bool crowded = false;
            for (std::size_t k : kept)
                if (detail::normalized_distance(mixed[idx], mixed[k], fmin, fmax) < epsilon_clear) {
                    crowded = true;
                    break;
                }
            (crowded ? cleared : kept).push_back(idx);
        }
        kept.insert(kept.end(), cleared.begin(), cleared.end());
        for (std::size_t idx : kept) {
            if (selected.size() == N)
                break;
            selected.push_back(idx);
        }
    }
    return selected;
}

inline Population rnsga2_select(const Population& mixed, const std::vector<ReferencePoint>& refs,
                                double epsilon_clear, std::size_t N)
{
    const auto objs = mixed.objectives();
    Population out;
    for (std::size_t idx : rnsga2_select(objs, refs, epsilon_clear, N))
        out.members.push_back(mixed.members[idx]);
    out.ideal = mixed.ideal;
    out.refresh_nadir();
    return out;
}

// ------------------------------------------------------------------ engine

class Engine {
public:
    Engine(AlgorithmSpec spec, std::shared_ptr<const Problem> problem, std::uint64_t seed)
        : spec_(std::move(spec)), problem_(std::move(problem)), rng_(seed), seed_(seed)
    {
        require(problem_ != nullptr, "Engine: null problem");
        spec_.validate(problem_->m());
        const std::size_t m = problem_->m();
        if (is_decomposition_kind(spec_.kind)) {
            base_weights_ = weights_for_population(m, spec_.population_size, rng_);
            weights_ = base_weights_;
            N_ = weights_.size();
        } else {
            N_ = spec_.population_size + (spec_.population_size % 2);
            if (spec_.kind == AlgorithmKind::NSGA3)
                nsga3_refs_ = weights_for_population(m, spec_.population_size, rng_);
        }
        radius_ = spec_.rmead2_initial_radius;
    }

    const AlgorithmSpec& spec() const { return spec_; }
    const Problem& problem() const { return *problem_; }
    const Population& population() const { return pop_; }
    std::size_t generation() const { return generation_; }
    std::size_t evaluations() const { return evaluations_; }
    std::size_t population_size() const { return N_; }
    std::size_t offspring_per_generation() const { return N_; }
    const WeightSet& weights() const { return weights_; }
    const std::vector<ReferencePoint>& reference_points() const { return spec_.reference_points; }
    bool initialized() const { return initialized_; }

    /// Replaces the reference points used from the next generation on.
    void set_reference_points(std::vector<ReferencePoint> refs)
    {
        AlgorithmSpec next = spec_;
        next.reference_points = std::move(refs);
        next.validate(problem_->m());
        spec_ = std::move(next);
        best_asf_ = std::numeric_limits<double>::infinity();
        stagnant_ = 0;
        radius_ = spec_.rmead2_initial_radius;
    }

    /// Samples and evaluates the initial population (generation 0).
    void initialize()
    {
        require(!initialized_, "Engine: already initialized");
        const auto& b = problem_->bounds();
        pop_.members.reserve(N_);
        for (std::size_t k = 0; k < N_; ++k) {
            Vec x(problem_->n());
            for (std::size_t i = 0; i < x.size(); ++i)
                x[i] = rng_.uniform(b.lower[i], b.upper[i]);
            pop_.members.push_back(make_solution(std::move(x)));
        }
        pop_.refresh_nadir();
        if (is_decomposition_kind(spec_.kind)) {
            update_decomposition_weights();
        } else if (spec_.kind == AlgorithmKind::IBEA || spec_.kind == AlgorithmKind::PBEA) {
            fitness_ = indicator_fitness(pop_.objectives());
        } else if (spec_.kind != AlgorithmKind::NSGA3) {
            assign_tournament_keys();
        }
        initialized_ = true;
    }

    bool can_step(std::size_t budget) const { return initialized_ && evaluations_ + N_ <= budget; }

    void step()
    {
        require(initialized_, "Engine: step before initialize");
        switch (spec_.kind) {
        case AlgorithmKind::NSGA3:
        case AlgorithmKind::RNSGA2:
        case AlgorithmKind::rNSGA2:
        case AlgorithmKind::gNSGA2:
            dominance_generation();
            break;
        case AlgorithmKind::IBEA:
        case AlgorithmKind::PBEA:
            indicator_generation();
            break;
        case AlgorithmKind::MOEAD:
        case AlgorithmKind::RMEAD2:
        case AlgorithmKind::MOEAD_NUMS:
            decomposition_generation();
            break;
        }
        pop_.refresh_nadir();
        ++generation_;
    }

    GenerationRecord record() const
    {
        GenerationRecord r;
        r.generation = generation_;
        r.evaluations = evaluations_;
        if (spec_.reference_points.size() == 1)
            r.metrics["EP"] = ep_accuracy(pop_.objectives(), spec_.reference_points.front());
        return r;
    }

private:
    Solution make_solution(Vec x)
    {
        require(problem_->bounds().contains(x), "Engine: variation produced an out-of-bounds vector");
        Solution s;
        s.f = problem_->evaluate(x);
        s.x = std::move(x);
        s.id = next_id_++;
        ++evaluations_;
        pop_.observe(s.f);
        return s;
    }

    std::pair<Vec, Vec> breed(const Vec& a, const Vec& b)
    {
        const auto& v = spec_.variation;
        const auto& bounds = problem_->bounds();
        auto [c1, c2] = sbx_crossover(a, b, v.eta_c, v.p_c, bounds, rng_);
        const double pm = v.mutation_rate(problem_->n());
        return {polynomial_mutation(c1, v.eta_m, pm, bounds, rng_), polynomial_mutation(c2, v.eta_m, pm, bounds, rng_)};
    }

    // The single-reference preference kinds never lose the member closest to
    // z^r by the achievement measure.
    bool guards_anchor() const
    {
        return spec_.reference_points.size() == 1 &&
               (spec_.kind == AlgorithmKind::RNSGA2 || spec_.kind == AlgorithmKind::PBEA ||
                spec_.kind == AlgorithmKind::MOEAD_NUMS);
    }

    std::size_t anchor_index(std::span<const ObjectiveVector> objs) const
    {
        const auto& zr = spec_.reference_points.front();
        std::size_t best = 0;
        double best_value = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < objs.size(); ++k) {
            const double v = ep_value(objs[k], zr);
            if (v < best_value) {
                best_value = v;
                best = k;
            }
        }
        return best;
    }

    // ----- dominance family

    std::size_t tournament()
    {
        const std::size_t a = rng_.index(pop_.size());
        const std::size_t b = rng_.index(pop_.size());
        if (rank_[a] != rank_[b])
            return rank_[a] < rank_[b] ? a : b;
        if (key_[a] != key_[b])
            return key_[a] < key_[b] ? a : b;
        return rng_.bernoulli(0.5) ? a : b;
    }

    std::vector<Solution> make_offspring(bool random_mating)
    {
        std::vector<Solution> children;
        children.reserve(N_);
        while (children.size() < N_) {
            const std::size_t i = random_mating ? rng_.index(pop_.size()) : tournament();
            const std::size_t j = random_mating ? rng_.index(pop_.size()) : tournament();
            auto [c1, c2] = breed(pop_.members[i].x, pop_.members[j].x);
            children.push_back(make_solution(std::move(c1)));
            if (children.size() < N_)
                children.push_back(make_solution(std::move(c2)));
        }
        return children;
    }

    void dominance_generation()
    {
        auto children = make_offspring(spec_.kind == AlgorithmKind::NSGA3);
        std::vector<Solution> merged = std::move(pop_.members);
        merged.insert(merged.end(), std::make_move_iterator(children.begin()), std::make_move_iterator(children.end()));
        std::vector<ObjectiveVector> objs;
        objs.reserve(merged.size());
        for (const auto& s : merged)
            objs.push_back(s.f);

        std::vector<std::size_t> chosen;
        switch (spec_.kind) {
        case AlgorithmKind::NSGA3:
            chosen = nsga3_select(objs);
            break;
        case AlgorithmKind::RNSGA2:
            chosen = rnsga2_select(objs, spec_.reference_points, spec_.epsilon_clear, N_);
            break;
        default:
            chosen = crowded_select(objs, preference_fronts(objs));
            break;
        }
        if (guards_anchor()) {
            const std::size_t anchor = anchor_index(objs);
            if (std::find(chosen.begin(), chosen.end(), anchor) == chosen.end())
                chosen.back() = anchor;
        }
        std::sort(chosen.begin(), chosen.end());
        pop_.members.clear();
        for (std::size_t idx : chosen)
            pop_.members.push_back(std::move(merged[idx]));
        if (spec_.kind != AlgorithmKind::NSGA3)
            assign_tournament_keys();
    }

    Fronts preference_fronts(std::span<const ObjectiveVector> objs) const
    {
        const auto& zr = spec_.reference_points.front();
        if (spec_.kind == AlgorithmKind::gNSGA2) {
            std::vector<int> flag(objs.size());
            for (std::size_t k = 0; k < objs.size(); ++k)
                flag[k] = g_flag(objs[k], zr.z);
            return sort_fronts(objs.size(), [&](std::size_t a, std::size_t b) {
                if (flag[a] != flag[b])
                    return flag[a] > flag[b];
                return dominates(objs[a], objs[b]);
            });
        }
        if (spec_.kind == AlgorithmKind::rNSGA2) {
            Vec fmin, fmax;
            detail::objective_extrema(objs, fmin, fmax);
            Vec dist(objs.size());
            for (std::size_t k = 0; k < objs.size(); ++k)
                dist[k] = weighted_distance(objs[k], zr, fmin, fmax);
            const double dmin = *std::min_element(dist.begin(), dist.end());
            const double dmax = *std::max_element(dist.begin(), dist.end());
            return sort_fronts(objs.size(), [&](std::size_t a, std::size_t b) {
                return r_compare(objs[a], objs[b], zr, spec_.r_delta, fmin, fmax, dmin, dmax) ==
                       RDominance::ARDominates;
            });
        }
        return fast_nondominated_sort(objs);
    }

    std::vector<std::size_t> crowded_select(std::span<const ObjectiveVector> objs, const Fronts& fronts) const
    {
        std::vector<std::size_t> chosen;
        for (const auto& front : fronts) {
            if (chosen.size() + front.size() <= N_) {
                chosen.insert(chosen.end(), front.begin(), front.end());
                if (chosen.size() == N_)
                    break;
                continue;
            }
            std::vector<ObjectiveVector> fo;
            for (std::size_t idx : front)
                fo.push_back(objs[idx]);
            const auto cd = crowding_distance(fo);
            std::vector<std::size_t> order(front.size());
            std::iota(order.begin(), order.end(), std::size_t{0});
            std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return cd[a] > cd[b]; });
            // copies of an objective vector already admitted go last
            std::set<ObjectiveVector> seen;
            for (std::size_t idx : chosen)
                seen.insert(objs[idx]);
            std::vector<std::size_t> deferred;
            for (std::size_t k : order) {
                if (chosen.size() == N_)
                    break;
                if (seen.insert(objs[front[k]]).second)
                    chosen.push_back(front[k]);
                else
                    deferred.push_back(front[k]);
            }
            for (std::size_t k = 0; chosen.size() < N_; ++k)
                chosen.push_back(deferred[k]);
            break;
        }
        return chosen;
    }

    // Front index and a secondary key (lower is better) for mating selection.
    void assign_tournament_keys()
    {
        const auto objs = pop_.objectives();
        rank_.assign(objs.size(), 0);
        key_.assign(objs.size(), 0.0);
        const Fronts fronts = spec_.kind == AlgorithmKind::RNSGA2 ? fast_nondominated_sort(objs) : preference_fronts(objs);
        Vec fmin, fmax;
        detail::objective_extrema(objs, fmin, fmax);
        for (std::size_t r = 0; r < fronts.size(); ++r) {
            const auto& front = fronts[r];
            for (std::size_t idx : front)
                rank_[idx] = r;
            if (spec_.kind == AlgorithmKind::RNSGA2) {
                const auto ordered = detail::preference_order(objs, front, spec_.reference_points, fmin, fmax);
                for (std::size_t pos = 0; pos < ordered.size(); ++pos)
                    key_[ordered[pos]] = static_cast<double>(pos);
            } else {
                std::vector<ObjectiveVector> fo;
                for (std::size_t idx : front)
                    fo.push_back(objs[idx]);
                const auto cd = crowding_distance(fo);
                for (std::size_t k = 0; k < front.size(); ++k)
                    key_[front[k]] = -cd[k];
            }
        }
    }

    std::vector<std::size_t> nsga3_select(std::span<const ObjectiveVector> objs)
    {
        const auto fronts = fast_nondominated_sort(objs);
        std::vector<std::size_t> chosen;
        std::vector<std::size_t> last;
        for (const auto& front : fronts) {
            if (chosen.size() + front.size() <= N_) {
                chosen.insert(chosen.end(), front.begin(), front.end());
                if (chosen.size() == N_)
                    return chosen;
                continue;
            }
            last = front;
            break;
        }

        const std::size_t m = problem_->m();
        std::vector<std::size_t> considered = chosen;
        considered.insert(considered.end(), last.begin(), last.end());

        // translate by the ideal point, then find intercepts of the extreme hyperplane
        const Vec& ideal = pop_.ideal;
        std::vector<Vec> translated(objs.size());
        for (std::size_t idx : considered) {
            translated[idx].resize(m);
            for (std::size_t i = 0; i < m; ++i)
                translated[idx][i] = objs[idx][i] - ideal[i];
        }
        std::vector<Vec> extremes;
        for (std::size_t axis = 0; axis < m; ++axis) {
            double best = std::numeric_limits<double>::infinity();
            std::size_t arg = considered.front();
            for (std::size_t idx : considered) {
                double v = -std::numeric_limits<double>::infinity();
                for (std::size_t i = 0; i < m; ++i)
                    v = std::max(v, translated[idx][i] / (i == axis ? 1.0 : 1e-6));
                if (v < best) {
                    best = v;
                    arg = idx;
                }
            }
            extremes.push_back(translated[arg]);
        }
        Vec intercepts = hyperplane_intercepts(extremes);
        bool usable = intercepts.size() == m;
        for (std::size_t i = 0; usable && i < m; ++i)
            usable = std::isfinite(intercepts[i]) && intercepts[i] > 1e-10;
        if (!usable) {
            intercepts.assign(m, 0.0);
            for (std::size_t idx : fronts.front())
                for (std::size_t i = 0; i < m; ++i)
                    intercepts[i] = std::max(intercepts[i], objs[idx][i] - ideal[i]);
            for (double& a : intercepts)
                if (!(a > 1e-10))
                    a = 1.0;
        }

        const auto& refs = nsga3_refs_.vectors;
        std::vector<std::size_t> assoc(objs.size(), 0);
        Vec perp(objs.size(), 0.0);
        for (std::size_t idx : considered) {
            Vec fn(m);
            for (std::size_t i = 0; i < m; ++i)
                fn[i] = translated[idx][i] / intercepts[i];
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t r = 0; r < refs.size(); ++r) {
                double dot = 0.0, norm2 = 0.0;
                for (std::size_t i = 0; i < m; ++i) {
                    dot += fn[i] * refs[r][i];
                    norm2 += refs[r][i] * refs[r][i];
                }
                const double t = dot / norm2;
                double d2 = 0.0;
                for (std::size_t i = 0; i < m; ++i) {
                    const double e = fn[i] - t * refs[r][i];
                    d2 += e * e;
                }
                if (d2 < best) {
                    best = d2;
                    assoc[idx] = r;
                }
            }
            perp[idx] = std::sqrt(best);
        }

        std::vector<std::size_t> niche(refs.size(), 0);
        for (std::size_t idx : chosen)
            ++niche[assoc[idx]];
        std::vector<std::vector<std::size_t>> pending(refs.size());
        for (std::size_t idx : last)
            pending[assoc[idx]].push_back(idx);
        std::vector<bool> active(refs.size(), true);

        while (chosen.size() < N_) {
            std::size_t least = std::numeric_limits<std::size_t>::max();
            for (std::size_t r = 0; r < refs.size(); ++r)
                if (active[r])
                    least = std::min(least, niche[r]);
            std::vector<std::size_t> candidates;
            for (std::size_t r = 0; r < refs.size(); ++r)
                if (active[r] && niche[r] == least)
                    candidates.push_back(r);
            const std::size_t r = candidates[rng_.index(candidates.size())];
            auto& pool = pending[r];
            if (pool.empty()) {
                active[r] = false;
                continue;
            }
            std::size_t pick = 0;
            if (niche[r] == 0) {
                for (std::size_t k = 1; k < pool.size(); ++k)
                    if (perp[pool[k]] < perp[pool[pick]])
                        pick = k;
            } else {
                pick = rng_.index(pool.size());
            }
            chosen.push_back(pool[pick]);
            pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
            ++niche[r];
        }
        return chosen;
    }

    // Solves E b = 1 by Gaussian elimination; intercepts are 1/b. Empty on
    // a singular system.
    static Vec hyperplane_intercepts(const std::vector<Vec>& E)
    {
        const std::size_t m = E.size();
        std::vector<Vec> A(E);
        Vec rhs(m, 1.0);
        for (std::size_t col = 0; col < m; ++col) {
            std::size_t pivot = col;
            for (std::size_t r = col + 1; r < m; ++r)
                if (std::abs(A[r][col]) > std::abs(A[pivot][col]))
                    pivot = r;
            if (std::abs(A[pivot][col]) < 1e-12)
                return {};
            std::swap(A[col], A[pivot]);
            std::swap(rhs[col], rhs[pivot]);
            for (std::size_t r = 0; r < m; ++r) {
                if (r == col)
                    continue;
                const double factor = A[r][col] / A[col][col];
                for (std::size_t c = col; c < m; ++c)
                    A[r][c] -= factor * A[col][c];
                rhs[r] -= factor * rhs[col];
            }
        }
        Vec out(m);
        for (std::size_t i = 0; i < m; ++i) {
            const double b = rhs[i] / A[i][i];
            out[i] = 1.0 / b;
        }
        return out;
    }

    // ----- indicator family

    // Fitness on objectives normalized to the population's bounding box.
    Vec indicator_fitness(const std::vector<ObjectiveVector>& objs)
    {
        const std::size_t n = objs.size();
        indicator_ = indicator_matrix(objs);
        Vec F(n, 0.0);
        for (std::size_t x = 0; x < n; ++x)
            for (std::size_t other = 0; other < n; ++other)
                if (other != x)
                    F[x] -= contribution(indicator_[other][x]);
        return F;
    }

    std::vector<Vec> indicator_matrix(const std::vector<ObjectiveVector>& objs)
    {
        const std::size_t n = objs.size();
        Vec fmin, fmax;
        detail::objective_extrema(objs, fmin, fmax);
        std::vector<ObjectiveVector> fn(n);
        for (std::size_t k = 0; k < n; ++k)
            fn[k] = normalize(objs[k], fmin, fmax);

        Vec denom(n, 1.0);
        if (spec_.kind == AlgorithmKind::PBEA) {
            std::vector<ReferencePoint> refs;
            for (const auto& r : spec_.reference_points)
                refs.emplace_back(normalize(r.z, fmin, fmax), r.weights);
            Vec s(n, std::numeric_limits<double>::infinity());
            for (std::size_t k = 0; k < n; ++k)
                for (const auto& r : refs)
                    s[k] = std::min(s[k], augmented_asf(fn[k], r, spec_.pbea_rho_aug));
            const double s_min = *std::min_element(s.begin(), s.end());
            for (std::size_t k = 0; k < n; ++k)
                denom[k] = s[k] + spec_.pbea_sigma - s_min;
        }

        std::vector<Vec> I(n, Vec(n, 0.0));
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                if (a != b)
                    I[a][b] = epsilon_indicator(fn[a], fn[b]) / denom[a];
        return I;
    }

    // exp(-I / kappa), with the exponent capped so tiny sigma cannot overflow
    double contribution(double I) const { return std::exp(std::min(-I / spec_.ibea_kappa, 700.0)); }

    std::size_t fitness_tournament()
    {
        const std::size_t a = rng_.index(pop_.size());
        const std::size_t b = rng_.index(pop_.size());
        return fitness_[a] >= fitness_[b] ? a : b;
    }

    void indicator_generation()
    {
        std::vector<Solution> children;
        children.reserve(N_);
        while (children.size() < N_) {
            const std::size_t i = fitness_tournament();
            const std::size_t j = fitness_tournament();
            auto [c1, c2] = breed(pop_.members[i].x, pop_.members[j].x);
            children.push_back(make_solution(std::move(c1)));
            if (children.size() < N_)
                children.push_back(make_solution(std::move(c2)));
        }
        std::vector<Solution> merged = std::move(pop_.members);
        merged.insert(merged.end(), std::make_move_iterator(children.begin()), std::make_move_iterator(children.end()));
        std::vector<ObjectiveVector> objs;
        for (const auto& s : merged)
            objs.push_back(s.f);

        Vec F = indicator_fitness(objs);
        const std::size_t anchor = guards_anchor() ? anchor_index(objs) : merged.size();
        std::vector<bool> alive(merged.size(), true);
        for (std::size_t removed = 0; removed < merged.size() - N_; ++removed) {
            std::size_t worst = merged.size();
            for (std::size_t k = 0; k < merged.size(); ++k)
                if (alive[k] && k != anchor && (worst == merged.size() || F[k] < F[worst]))
                    worst = k;
            alive[worst] = false;
            for (std::size_t k = 0; k < merged.size(); ++k)
                if (alive[k])
                    F[k] += contribution(indicator_[worst][k]);
        }
        pop_.members.clear();
        fitness_.clear();
        for (std::size_t k = 0; k < merged.size(); ++k)
            if (alive[k]) {
                pop_.members.push_back(std::move(merged[k]));
                fitness_.push_back(F[k]);
            }
    }

    // ----- decomposition family

    double subproblem_value(std::span<const double> f, std::size_t k) const
    {
        if (spec_.kind == AlgorithmKind::MOEAD_NUMS) {
            const Vec fn = normalize(f, frame_ideal_, frame_nadir_);
            const Vec zero(fn.size(), 0.0);
            return tchebycheff(fn, weights_.vectors[k], zero);
        }
        return tchebycheff(f, weights_.vectors[k], pop_.ideal);
    }

    void update_neighbors()
    {
        const std::size_t T = std::min(spec_.neighborhood_size, N_);
        neighbors_.assign(N_, {});
        std::vector<std::size_t> order(N_);
        Vec d(N_);
        for (std::size_t i = 0; i < N_; ++i) {
            for (std::size_t j = 0; j < N_; ++j)
                d[j] = euclidean(weights_.vectors[i], weights_.vectors[j]);
            std::iota(order.begin(), order.end(), std::size_t{0});
            std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
            neighbors_[i].assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(T));
        }
    }

    void update_decomposition_weights()
    {
        frame_ideal_ = pop_.ideal;
        frame_nadir_ = pop_.nadir_est;
        if (spec_.kind == AlgorithmKind::MOEAD_NUMS) {
            const auto pivot = simplex_projection(spec_.reference_points.front().z, frame_ideal_, frame_nadir_);
            WeightSet next = nums_transform(base_weights_, pivot, spec_.nums_tau, spec_.nums_kappa);
            if (next == weights_ && !neighbors_.empty())
                return;
            weights_ = std::move(next);
        } else if (!neighbors_.empty()) {
            return;
        }
        update_neighbors();
    }

    void rmead2_adapt()
    {
        const auto& zr = spec_.reference_points.front();
        std::size_t best = 0;
        double best_value = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < pop_.size(); ++k) {
            const double v = augmented_asf(pop_.members[k].f, zr, 1e-4);
            if (v < best_value) {
                best_value = v;
                best = k;
            }
        }
        if (best_value < best_asf_ - 1e-12) {
            best_asf_ = best_value;
            stagnant_ = 0;
        } else if (++stagnant_ >= spec_.rmead2_stagnation) {
            radius_ = std::max(spec_.rmead2_min_radius, radius_ / 2.0);
            stagnant_ = 0;
        }
        if ((generation_ + 1) % spec_.rmead2_period != 0)
            return;
        const Vec centre = weights_.vectors[best];
        weights_ = rmead2_resample(N_, centre, radius_, rng_);
        std::swap(pop_.members[0], pop_.members[best]);
        update_neighbors();
    }

    void decomposition_generation()
    {
        update_decomposition_weights();
        const bool guarded = guards_anchor();
        std::size_t anchor = guarded ? anchor_index(pop_.objectives()) : N_;
        for (std::size_t i = 0; i < N_; ++i) {
            const auto& hood = neighbors_[i];
            const std::size_t a = hood[rng_.index(hood.size())];
            std::size_t b = hood[rng_.index(hood.size())];
            if (hood.size() > 1)
                while (b == a)
                    b = hood[rng_.index(hood.size())];
            auto [c1, c2] = breed(pop_.members[a].x, pop_.members[b].x);
            Solution child = make_solution(rng_.bernoulli(0.5) ? std::move(c1) : std::move(c2));

            std::vector<std::size_t> order(hood);
            rng_.shuffle(order.begin(), order.end());
            std::size_t replaced = 0;
            const double child_ep = guarded ? ep_value(child.f, spec_.reference_points.front()) : 0.0;
            for (std::size_t j : order) {
                if (subproblem_value(child.f, j) < subproblem_value(pop_.members[j].f, j)) {
                    if (j == anchor) {
                        if (child_ep > ep_value(pop_.members[j].f, spec_.reference_points.front()))
                            continue;
                    } else if (guarded && child_ep < ep_value(pop_.members[anchor].f, spec_.reference_points.front())) {
                        anchor = j;
                    }
                    pop_.members[j] = child;
                    if (++replaced >= spec_.replacement_cap)
                        break;
                }
            }
        }
        if (spec_.kind == AlgorithmKind::RMEAD2)
            rmead2_adapt();
    }

    AlgorithmSpec spec_;
    std::shared_ptr<const Problem> problem_;
    Rng rng_;
    std::uint64_t seed_;
    Population pop_;
    std::size_t N_ = 0;
    std::size_t generation_ = 0;
    std::size_t evaluations_ = 0;
    std::uint64_t next_id_ = 0;
    bool initialized_ = false;

    std::vector<std::size_t> rank_;
    Vec key_;
    WeightSet nsga3_refs_;

    Vec fitness_;
    std::vector<Vec> indicator_;

    WeightSet base_weights_;
    WeightSet weights_;
    std::vector<std::vector<std::size_t>> neighbors_;
    Vec frame_ideal_;
    Vec frame_nadir_;
    double radius_ = 0.2;
    double best_asf_ = std::numeric_limits<double>::infinity();
    std::size_t stagnant_ = 0;
};

/// Runs one algorithm on one problem until the next generation would exceed
/// the evaluation budget. Same seed, same result.
inline RunResult run(const AlgorithmSpec& spec, std::shared_ptr<const Problem> problem, std::size_t budget,
                     std::uint64_t seed, const Observer& observer = {})
{
    const auto start = std::chrono::steady_clock::now();
    Engine engine(spec, std::move(problem), seed);
    if (budget < engine.population_size())
        throw ConfigError("budget " + std::to_string(budget) + " is smaller than the population size " +
                          std::to_string(engine.population_size()));
    RunResult result;
    result.seed = seed;
    engine.initialize();
    result.records.push_back(engine.record());
    if (observer)
        observer({engine.generation(), engine.evaluations(), engine.population()});
    while (engine.can_step(budget)) {
        engine.step();
        result.records.push_back(engine.record());
        if (observer)
            observer({engine.generation(), engine.evaluations(), engine.population()});
    }
    result.final_population = engine.population();
    result.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

}  // namespace prefemo
