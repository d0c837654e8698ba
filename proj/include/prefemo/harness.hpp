#pragma once

// Batch experiments: config parsing, reference scenarios, replicated runs,
// the on-disk result store, summaries and rank heatmaps.
//
// Store layout (one directory per experiment):
//   config.json    the validated config, embedded verbatim
//   records.jsonl  append-only journal, one run record per line
//   metrics.json   every record sorted by key, without timing fields

#include <prefemo/algorithms.hpp>
#include <prefemo/metrics.hpp>
#include <prefemo/problems.hpp>

#include <json.hpp>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#ifndef PREFEMO_PRESET_DIR
#define PREFEMO_PRESET_DIR "data/presets"
#endif

namespace prefemo {

using json = nlohmann::json;
namespace fs = std::filesystem;

inline constexpr int kSchemaVersion = 1;
inline constexpr double kHvMargin = 0.1;
inline constexpr std::uint64_t kFrameSeed = 20190101;
inline constexpr std::size_t kPortfolioCloud = 1000;
inline constexpr const char* kQuantileConvention = "linear interpolation at position (n+1)p, clamped to [1, n]";

class ValidationError : public ConfigError {
public:
    explicit ValidationError(std::vector<std::string> items) : ConfigError(joined(items)), items_(std::move(items)) {}
    const std::vector<std::string>& items() const { return items_; }

private:
    static std::string joined(const std::vector<std::string>& items)
    {
        std::string out = "invalid config:";
        for (const auto& s : items)
            out += "\n  - " + s;
        return out;
    }
    std::vector<std::string> items_;
};

class IncompleteStore : public std::runtime_error {
public:
    explicit IncompleteStore(std::vector<std::string> gaps)
        : std::runtime_error("store is incomplete (" + std::to_string(gaps.size()) + " gaps)"), gaps_(std::move(gaps))
    {
    }
    const std::vector<std::string>& gaps() const { return gaps_; }

private:
    std::vector<std::string> gaps_;
};

// ------------------------------------------------------------ json helpers

/// True for a JSON integer that is not negative, signed or not.
inline bool is_count(const json& j)
{
    return j.is_number_unsigned() || (j.is_number_integer() && j.get<std::int64_t>() >= 0);
}

namespace detail {

// Non-finite doubles are written as the strings "inf", "-inf" and "nan".
inline json number_to_json(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    return v;
}

inline double number_from_json(const json& j)
{
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf")
            return std::numeric_limits<double>::infinity();
        if (s == "-inf")
            return -std::numeric_limits<double>::infinity();
        if (s == "nan")
            return std::numeric_limits<double>::quiet_NaN();
        throw std::invalid_argument("not a number: " + s);
    }
    return j.get<double>();
}

inline Vec vec_from_json(const json& j)
{
    Vec v;
    for (const auto& e : j)
        v.push_back(number_from_json(e));
    return v;
}

inline json vec_to_json(std::span<const double> v)
{
    json out = json::array();
    for (double d : v)
        out.push_back(number_to_json(d));
    return out;
}

}  // namespace detail

inline json algorithm_to_json(const AlgorithmSpec& a)
{
    return {
        {"kind", std::string(to_string(a.kind))},
        {"population_size", a.population_size},
        {"eta_c", a.variation.eta_c},
        {"p_c", a.variation.p_c},
        {"eta_m", a.variation.eta_m},
        {"p_m", a.variation.p_m},
        {"ibea_kappa", a.ibea_kappa},
        {"pbea_sigma", a.pbea_sigma},
        {"pbea_rho_aug", a.pbea_rho_aug},
        {"epsilon_clear", a.epsilon_clear},
        {"r_delta", a.r_delta},
        {"neighborhood_size", a.neighborhood_size},
        {"replacement_cap", a.replacement_cap},
        {"nums_tau", a.nums_tau},
        {"nums_kappa", a.nums_kappa},
        {"rmead2_initial_radius", a.rmead2_initial_radius},
        {"rmead2_min_radius", a.rmead2_min_radius},
        {"rmead2_stagnation", a.rmead2_stagnation},
        {"rmead2_period", a.rmead2_period},
    };
}

/// Reads an algorithm entry; unknown keys and bad values are appended to
/// `errors` (prefixed with `where`).
inline AlgorithmSpec algorithm_from_json(const json& j, const std::string& where, std::vector<std::string>& errors)
{
    AlgorithmSpec a;
    if (!j.is_object()) {
        errors.push_back(where + ": expected an object");
        return a;
    }
    static const std::set<std::string> known{
        "kind",          "label",        "population_size",      "eta_c",             "p_c",
        "eta_m",         "p_m",          "ibea_kappa",           "pbea_sigma",        "pbea_rho_aug",
        "epsilon_clear", "r_delta",      "neighborhood_size",    "replacement_cap",   "nums_tau",
        "roi_extent",    "nums_kappa",   "rmead2_initial_radius", "rmead2_min_radius", "rmead2_stagnation",
        "rmead2_period"};
    for (const auto& [key, value] : j.items())
        if (!known.contains(key))
            errors.push_back(where + ": unknown field '" + key + "'");
    if (!j.contains("kind") || !j["kind"].is_string()) {
        errors.push_back(where + ": 'kind' is required");
        return a;
    }
    const auto kind = algorithm_from_string(j["kind"].get<std::string>());
    if (!kind) {
        errors.push_back(where + ": unknown algorithm kind '" + j["kind"].get<std::string>() + "'");
        return a;
    }
    a.kind = *kind;
    auto real = [&](const char* key, double& out) {
        if (!j.contains(key))
            return;
        if (!j[key].is_number())
            errors.push_back(where + ": '" + key + "' must be a number");
        else
            out = j[key].get<double>();
    };
    auto count = [&](const char* key, std::size_t& out) {
        if (!j.contains(key))
            return;
        if (!is_count(j[key]))
            errors.push_back(where + ": '" + key + "' must be a nonnegative integer");
        else
            out = j[key].get<std::size_t>();
    };
    count("population_size", a.population_size);
    real("eta_c", a.variation.eta_c);
    real("p_c", a.variation.p_c);
    real("eta_m", a.variation.eta_m);
    real("p_m", a.variation.p_m);
    real("ibea_kappa", a.ibea_kappa);
    real("pbea_sigma", a.pbea_sigma);
    real("pbea_rho_aug", a.pbea_rho_aug);
    real("epsilon_clear", a.epsilon_clear);
    real("r_delta", a.r_delta);
    count("neighborhood_size", a.neighborhood_size);
    count("replacement_cap", a.replacement_cap);
    real("nums_tau", a.nums_tau);
    real("roi_extent", a.nums_tau);
    real("nums_kappa", a.nums_kappa);
    real("rmead2_initial_radius", a.rmead2_initial_radius);
    real("rmead2_min_radius", a.rmead2_min_radius);
    count("rmead2_stagnation", a.rmead2_stagnation);
    count("rmead2_period", a.rmead2_period);
    return a;
}

// ------------------------------------------------------------------ config

struct ProblemEntry {
    std::string label;
    ProblemSpec spec;
    std::shared_ptr<const AssetHistory> history;

    std::shared_ptr<const Problem> make_problem() const
    {
        if (is_portfolio(spec.family))
            return std::make_shared<const Problem>(spec, history);
        return std::make_shared<const Problem>(spec);
    }
    bool analytic() const { return !is_portfolio(spec.family); }
};

struct AlgorithmEntry {
    std::string label;
    AlgorithmSpec spec;
    bool eta_c_given = false;

    /// The AlgorithmSpec used on a given problem: portfolio problems default to SBX eta 30.
    AlgorithmSpec for_problem(const ProblemSpec& p) const
    {
        if (is_portfolio(p.family) && !eta_c_given)
            return with_portfolio_variation(spec);
        return spec;
    }
};

struct Scenario {
    enum class Kind { Explicit, Ray, WholeFront };

    std::string label;
    Kind kind = Kind::Explicit;
    Vec z;                        // Explicit
    Vec weights;                  // Explicit, optional
    Vec ray;                      // Ray: direction in normalized objective space
    double offset = 0.0;          // Ray: shift along every axis, in units of the objective range
    std::size_t points = 0;       // WholeFront: target number of reference points
    std::optional<Family> family; // restricts the scenario to one problem family
    std::optional<std::size_t> m; // restricts the scenario to one objective count

    bool single_reference() const { return kind != Kind::WholeFront; }
};

struct MetricOptions {
    std::vector<MetricId> metrics{MetricId::EP, MetricId::IGD, MetricId::HV, MetricId::R_IGD, MetricId::R_HV};
    std::size_t front_samples = 1000;
    HypervolumeOptions hv;
    double delta_extent = 0.2;

    bool wants(MetricId id) const { return std::find(metrics.begin(), metrics.end(), id) != metrics.end(); }
};

struct ExperimentConfig {
    std::string name;
    std::vector<ProblemEntry> problems;
    std::vector<AlgorithmEntry> algorithms;
    std::vector<Scenario> scenarios;
    std::size_t replications = 31;
    std::size_t budget = 25000;
    std::uint64_t base_seed = 1;
    MetricOptions metric_options;
    std::string output;
    json source;  // as read, embedded into the store
};

namespace detail {

inline std::shared_ptr<const AssetHistory> read_assets(const json& p, const fs::path& base, const std::string& where,
                                                       std::vector<std::string>& errors)
{
    try {
        if (p.contains("synthetic")) {
            const auto& s = p["synthetic"];
            return std::make_shared<const AssetHistory>(synthetic_asset_history(
                s.value("assets", std::size_t{20}), s.value("periods", std::size_t{250}), s.value("seed", std::uint64_t{1})));
        }
        if (!p.contains("returns")) {
            errors.push_back(where + ": portfolio problems need 'returns' or 'synthetic'");
            return nullptr;
        }
        auto resolve = [&](const std::string& s) { return (fs::path(s).is_absolute() ? fs::path(s) : base / s).string(); };
        const std::string returns = resolve(p["returns"].get<std::string>());
        const std::string turnovers = p.contains("turnovers") ? resolve(p["turnovers"].get<std::string>()) : "";
        return std::make_shared<const AssetHistory>(load_asset_history(returns, turnovers));
    } catch (const std::exception& e) {
        errors.push_back(where + ": " + e.what());
        return nullptr;
    }
}

inline std::string default_problem_label(const ProblemSpec& spec)
{
    std::string label(to_string(spec.family));
    if (is_dtlz(spec.family))
        label += "-m" + std::to_string(spec.m);
    if (is_portfolio(spec.family))
        label += "-n" + std::to_string(spec.n);
    return label;
}

}  // namespace detail

/// Parses and validates a config. Every problem found is reported at once
/// through ValidationError::items(). Relative data paths resolve against
/// `base_dir`.
inline ExperimentConfig parse_config(const json& j, const fs::path& base_dir = ".")
{
    std::vector<std::string> errors;
    ExperimentConfig cfg;
    cfg.source = j;
    if (!j.is_object())
        throw ValidationError({"config must be a JSON object"});
    if (j.value("schema_version", -1) != kSchemaVersion)
        errors.push_back("schema_version must be " + std::to_string(kSchemaVersion));
    cfg.name = j.value("name", std::string{});

    auto count = [&](const char* key, auto& out) {
        if (!j.contains(key))
            return;
        if (!is_count(j[key]))
            errors.push_back(std::string("'") + key + "' must be a nonnegative integer");
        else
            out = j[key].get<std::remove_reference_t<decltype(out)>>();
    };
    count("replications", cfg.replications);
    count("budget", cfg.budget);
    count("base_seed", cfg.base_seed);
    count("front_samples", cfg.metric_options.front_samples);
    count("hv_samples", cfg.metric_options.hv.mc_samples);
    count("hv_seed", cfg.metric_options.hv.mc_seed);
    if (cfg.replications < 1)
        errors.push_back("replications must be at least 1");
    if (j.contains("delta_extent")) {
        cfg.metric_options.delta_extent = j["delta_extent"].is_number() ? j["delta_extent"].get<double>() : -1.0;
        if (!(cfg.metric_options.delta_extent > 0.0))
            errors.push_back("delta_extent must be a positive number");
    }
    cfg.output = j.value("output", std::string{});
    if (j.contains("metrics")) {
        cfg.metric_options.metrics.clear();
        for (const auto& m : j["metrics"]) {
            const auto id = m.is_string() ? metric_from_string(m.get<std::string>()) : std::nullopt;
            if (!id)
                errors.push_back("unknown metric " + m.dump());
            else
                cfg.metric_options.metrics.push_back(*id);
        }
    }

    // problems
    if (!j.contains("problems") || !j["problems"].is_array() || j["problems"].empty())
        errors.push_back("'problems' must be a non-empty array");
    else
        for (std::size_t k = 0; k < j["problems"].size(); ++k) {
            const auto& p = j["problems"][k];
            const std::string where = "problems[" + std::to_string(k) + "]";
            const auto family = p.contains("family") && p["family"].is_string()
                                    ? family_from_string(p["family"].get<std::string>())
                                    : std::nullopt;
            if (!family) {
                errors.push_back(where + ": unknown or missing 'family'" +
                                 (p.contains("family") ? " " + p["family"].dump() : std::string{}));
                continue;
            }
            ProblemEntry entry;
            try {
                std::size_t n = p.value("n", std::size_t{0});
                if (is_portfolio(*family)) {
                    entry.history = detail::read_assets(p, base_dir, where, errors);
                    if (!entry.history)
                        continue;
                    n = entry.history->assets();
                }
                entry.spec = make_spec(*family, p.value("m", std::size_t{0}), n);
            } catch (const std::exception& e) {
                errors.push_back(where + ": " + e.what());
                continue;
            }
            entry.label = p.value("label", detail::default_problem_label(entry.spec));
            cfg.problems.push_back(std::move(entry));
        }

    // algorithms
    if (!j.contains("algorithms") || !j["algorithms"].is_array() || j["algorithms"].empty())
        errors.push_back("'algorithms' must be a non-empty array");
    else
        for (std::size_t k = 0; k < j["algorithms"].size(); ++k) {
            const auto& a = j["algorithms"][k];
            const std::string where = "algorithms[" + std::to_string(k) + "]";
            AlgorithmEntry entry;
            entry.spec = algorithm_from_json(a, where, errors);
            entry.eta_c_given = a.is_object() && a.contains("eta_c");
            entry.label = a.is_object() ? a.value("label", std::string(to_string(entry.spec.kind))) : "";
            cfg.algorithms.push_back(std::move(entry));
        }

    // scenarios
    if (!j.contains("scenarios") || !j["scenarios"].is_array() || j["scenarios"].empty())
        errors.push_back("'scenarios' must be a non-empty array");
    else
        for (std::size_t k = 0; k < j["scenarios"].size(); ++k) {
            const auto& s = j["scenarios"][k];
            const std::string where = "scenarios[" + std::to_string(k) + "]";
            Scenario sc;
            sc.label = s.value("label", std::string{});
            if (sc.label.empty())
                errors.push_back(where + ": 'label' is required");
            if (s.contains("family")) {
                sc.family = family_from_string(s["family"].get<std::string>());
                if (!sc.family)
                    errors.push_back(where + ": unknown family filter");
            }
            if (s.contains("m"))
                sc.m = s["m"].get<std::size_t>();
            if (s.contains("z")) {
                sc.kind = Scenario::Kind::Explicit;
                sc.z = detail::vec_from_json(s["z"]);
                if (s.contains("weights"))
                    sc.weights = detail::vec_from_json(s["weights"]);
                if (!all_finite(sc.z) || sc.z.empty())
                    errors.push_back(where + ": 'z' must be a non-empty list of finite numbers");
            } else if (s.contains("ray")) {
                sc.kind = Scenario::Kind::Ray;
                sc.ray = detail::vec_from_json(s["ray"]);
                sc.offset = s.value("offset", 0.0);
                bool positive = !sc.ray.empty();
                for (double r : sc.ray)
                    positive = positive && r > 0.0;
                if (!positive)
                    errors.push_back(where + ": 'ray' components must be positive");
            } else if (s.contains("whole_front")) {
                sc.kind = Scenario::Kind::WholeFront;
                sc.points = s["whole_front"].get<std::size_t>();
                if (sc.points < 2)
                    errors.push_back(where + ": 'whole_front' needs at least 2 points");
            } else {
                errors.push_back(where + ": one of 'z', 'ray' or 'whole_front' is required");
            }
            cfg.scenarios.push_back(std::move(sc));
        }

    // cross checks
    std::set<std::string> seen;
    for (const auto& p : cfg.problems)
        if (!seen.insert("p:" + p.label).second)
            errors.push_back("duplicate problem label '" + p.label + "'");
    for (const auto& a : cfg.algorithms)
        if (!seen.insert("a:" + a.label).second)
            errors.push_back("duplicate algorithm label '" + a.label + "' (give one a 'label')");
    for (const auto& s : cfg.scenarios)
        if (!seen.insert("s:" + s.label).second)
            errors.push_back("duplicate scenario label '" + s.label + "'");
    for (const auto& s : cfg.scenarios) {
        bool used = false;
        for (const auto& p : cfg.problems) {
            if ((s.family && *s.family != p.spec.family) || (s.m && *s.m != p.spec.m))
                continue;
            used = true;
            const std::size_t dim = s.kind == Scenario::Kind::Explicit ? s.z.size()
                                    : s.kind == Scenario::Kind::Ray ? s.ray.size()
                                                                    : p.spec.m;
            if (dim != p.spec.m)
                errors.push_back("scenario '" + s.label + "' has " + std::to_string(dim) + " components but problem '" +
                                 p.label + "' has " + std::to_string(p.spec.m) + " objectives");
            if (s.kind == Scenario::Kind::Explicit && !s.weights.empty() && s.weights.size() != s.z.size())
                errors.push_back("scenario '" + s.label + "': weights and z differ in length");
            if (s.kind == Scenario::Kind::Ray && !p.analytic())
                errors.push_back("scenario '" + s.label + "' needs an analytic front but problem '" + p.label +
                                 "' has none");
        }
        if (!used)
            errors.push_back("scenario '" + s.label + "' matches no problem");
    }
    for (const auto& a : cfg.algorithms)
        for (const auto& p : cfg.problems) {
            AlgorithmSpec probe = a.for_problem(p.spec);
            if (is_preference_kind(probe.kind))
                probe.reference_points = {ReferencePoint(Vec(p.spec.m, 0.0))};
            try {
                probe.validate(p.spec.m);
                Rng rng(0);
                const std::size_t N = is_decomposition_kind(probe.kind)
                                          ? weights_for_population(p.spec.m, probe.population_size, rng).size()
                                          : probe.population_size + probe.population_size % 2;
                if (cfg.budget < N)
                    errors.push_back("budget " + std::to_string(cfg.budget) + " is below the population size of '" +
                                     a.label + "' on '" + p.label + "'");
            } catch (const std::exception& e) {
                errors.push_back("algorithm '" + a.label + "' on '" + p.label + "': " + e.what());
            }
        }

    if (!errors.empty())
        throw ValidationError(std::move(errors));
    return cfg;
}

inline ExperimentConfig load_config(const fs::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ValidationError({"cannot open config " + path.string()});
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ValidationError({path.string() + ": " + e.what()});
    }
    return parse_config(j, path.parent_path());
}

// ---------------------------------------------------------------- instances

/// Per-problem quantities shared by every algorithm: ideal/nadir used for
/// normalization, the worst point anchoring HV and the R-metrics, and
/// analytic front samples when the front is known.
struct InstanceFrame {
    ObjectiveVector ideal;
    ObjectiveVector nadir;
    Vec range;
    ObjectiveVector worst;
    std::vector<ObjectiveVector> front;
};

inline InstanceFrame make_frame(const ProblemEntry& p, std::size_t front_samples)
{
    InstanceFrame f;
    const std::size_t m = p.spec.m;
    if (p.analytic()) {
        f.ideal = true_ideal(p.spec);
        f.nadir = true_nadir(p.spec);
        f.front = sample_true_front(p.spec, front_samples);
    } else {
        // single-asset portfolios plus a fixed Dirichlet cloud
        const auto problem = p.make_problem();
        Rng rng(kFrameSeed);
        std::vector<ObjectiveVector> cloud;
        for (std::size_t a = 0; a < p.spec.n; ++a) {
            Vec x(p.spec.n, 0.0);
            x[a] = 1.0;
            cloud.push_back(problem->evaluate(x));
        }
        for (std::size_t k = 0; k < kPortfolioCloud; ++k) {
            Vec x(p.spec.n);
            double sum = 0.0;
            for (double& v : x)
                sum += (v = rng.exponential());
            for (double& v : x)
                v /= sum;
            cloud.push_back(problem->evaluate(x));
        }
        f.ideal.assign(m, std::numeric_limits<double>::infinity());
        f.nadir.assign(m, -std::numeric_limits<double>::infinity());
        const auto fronts = fast_nondominated_sort(cloud);
        for (std::size_t idx : fronts.front())
            for (std::size_t i = 0; i < m; ++i) {
                f.ideal[i] = std::min(f.ideal[i], cloud[idx][i]);
                f.nadir[i] = std::max(f.nadir[i], cloud[idx][i]);
            }
    }
    f.range.resize(m);
    f.worst.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        f.range[i] = f.nadir[i] - f.ideal[i];
        if (!(f.range[i] > 0.0))
            f.range[i] = 1.0;
        f.worst[i] = f.nadir[i] + kHvMargin * f.range[i];
    }
    return f;
}

/// The analytic front point on the ray ideal + t * (ray ⊙ range).
inline ObjectiveVector front_ray_point(const ProblemSpec& spec, const InstanceFrame& frame, std::span<const double> ray)
{
    const std::size_t m = spec.m;
    require(ray.size() == m, "front_ray_point: dimension mismatch");
    if (is_dtlz(spec.family)) {
        ObjectiveVector f(ray.begin(), ray.end());
        double scale = 0.0;
        for (double r : ray)
            scale += spec.family == Family::DTLZ1 ? r : r * r;
        scale = spec.family == Family::DTLZ1 ? 0.5 / scale : 1.0 / std::sqrt(scale);
        for (double& v : f)
            v *= scale;
        return f;
    }
    const auto dense = sample_true_front(spec, 20001);
    double best = std::numeric_limits<double>::infinity();
    ObjectiveVector arg;
    for (const auto& f : dense) {
        double v = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < m; ++i)
            v = std::max(v, (f[i] - frame.ideal[i]) / (frame.range[i] * ray[i]));
        if (v < best) {
            best = v;
            arg = f;
        }
    }
    return arg;
}

/// Whether a scenario yields reference points on a problem.
inline bool scenario_applies(const Scenario& s, const ProblemEntry& p)
{
    if ((s.family && *s.family != p.spec.family) || (s.m && *s.m != p.spec.m))
        return false;
    switch (s.kind) {
    case Scenario::Kind::Explicit:
        return s.z.size() == p.spec.m;
    case Scenario::Kind::Ray:
        return s.ray.size() == p.spec.m && p.analytic();
    case Scenario::Kind::WholeFront:
        return true;
    }
    return false;
}

/// Reference points a scenario yields on a problem; nullopt when the
/// scenario does not apply to it.
inline std::optional<std::vector<ReferencePoint>> scenario_references(const Scenario& s, const ProblemEntry& p,
                                                                      const InstanceFrame& frame)
{
    if (!scenario_applies(s, p))
        return std::nullopt;
    const std::size_t m = p.spec.m;
    switch (s.kind) {
    case Scenario::Kind::Explicit:
        if (s.weights.empty())
            return std::vector<ReferencePoint>{ReferencePoint(s.z)};
        return std::vector<ReferencePoint>{ReferencePoint(s.z, s.weights)};
    case Scenario::Kind::Ray: {
        auto z = front_ray_point(p.spec, frame, s.ray);
        for (std::size_t i = 0; i < m; ++i)
            z[i] += s.offset * frame.range[i];
        return std::vector<ReferencePoint>{ReferencePoint(z)};
    }
    case Scenario::Kind::WholeFront: {
        Rng rng(kFrameSeed);
        std::vector<ReferencePoint> refs;
        for (const auto& w : weights_for_population(m, s.points, rng).vectors) {
            Vec z(m);
            for (std::size_t i = 0; i < m; ++i)
                z[i] = frame.ideal[i] + w[i] * frame.range[i];
            refs.emplace_back(std::move(z));
        }
        return refs;
    }
    }
    return std::nullopt;
}

/// Whether an algorithm takes part in a scenario: single-reference kinds
/// skip multi-reference scenarios.
inline bool algorithm_applies(const AlgorithmSpec& a, const Scenario& s)
{
    return s.single_reference() || !is_preference_kind(a.kind) || accepts_many_references(a.kind);
}

/// Scores a final population. Single-reference scenarios get EP and the
/// R-metrics; IGD and HV need an analytic front.
inline std::map<std::string, double> score_population(std::span<const ObjectiveVector> population,
                                                      const std::vector<ReferencePoint>& refs, bool single,
                                                      const InstanceFrame& frame, const MetricOptions& opt)
{
    std::vector<ObjectiveVector> nd;
    const auto fronts = fast_nondominated_sort(population);
    for (std::size_t idx : fronts.front())
        nd.push_back(population[idx]);
    std::map<std::string, double> out;
    auto put = [&](MetricId id, double v) { out[std::string(to_string(id))] = v; };
    const bool analytic = !frame.front.empty();
    if (single && opt.wants(MetricId::EP))
        put(MetricId::EP, ep_accuracy(nd, refs.front()));
    if (analytic && opt.wants(MetricId::IGD))
        put(MetricId::IGD, igd(nd, frame.front));
    if (analytic && opt.wants(MetricId::HV))
        put(MetricId::HV, hypervolume(nd, frame.worst, opt.hv));
    if (single) {
        const RMetricFrame rf{refs.front(), frame.worst, frame.range, opt.delta_extent};
        if (analytic && opt.wants(MetricId::R_IGD))
            put(MetricId::R_IGD, r_igd(nd, rf, frame.front));
        if (opt.wants(MetricId::R_HV))
            put(MetricId::R_HV, r_hv(nd, rf, opt.hv));
    }
    return out;
}

// ------------------------------------------------------------------ records

inline std::string run_key(const std::string& problem, const std::string& algorithm, const std::string& scenario,
                           std::uint64_t seed)
{
    return problem + "|" + algorithm + "|" + scenario + "|" + std::to_string(seed);
}

struct RunRecord {
    std::string problem;
    std::string algorithm;
    std::string scenario;
    std::uint64_t seed = 0;
    bool ok = true;
    std::string error;
    std::size_t evaluations = 0;
    std::size_t generations = 0;
    std::map<std::string, double> metrics;
    std::vector<ObjectiveVector> objectives;
    double wall_clock_seconds = 0.0;

    std::string key() const { return run_key(problem, algorithm, scenario, seed); }
    bool operator==(const RunRecord&) const = default;
};

inline json record_to_json(const RunRecord& r, bool with_timing = true)
{
    json metrics = json::object();
    for (const auto& [name, v] : r.metrics)
        metrics[name] = detail::number_to_json(v);
    json objs = json::array();
    for (const auto& f : r.objectives)
        objs.push_back(detail::vec_to_json(f));
    json j = {{"schema_version", kSchemaVersion},
              {"key", r.key()},
              {"problem", r.problem},
              {"algorithm", r.algorithm},
              {"scenario", r.scenario},
              {"seed", r.seed},
              {"status", r.ok ? "ok" : "failed"},
              {"error", r.error},
              {"evaluations", r.evaluations},
              {"generations", r.generations},
              {"metrics", metrics},
              {"objectives", objs}};
    if (with_timing)
        j["wall_clock_seconds"] = r.wall_clock_seconds;
    return j;
}

inline RunRecord record_from_json(const json& j)
{
    RunRecord r;
    r.problem = j.at("problem").get<std::string>();
    r.algorithm = j.at("algorithm").get<std::string>();
    r.scenario = j.at("scenario").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.ok = j.at("status").get<std::string>() == "ok";
    r.error = j.value("error", std::string{});
    r.evaluations = j.value("evaluations", std::size_t{0});
    r.generations = j.value("generations", std::size_t{0});
    for (const auto& [name, v] : j.at("metrics").items())
        r.metrics[name] = detail::number_from_json(v);
    for (const auto& f : j.value("objectives", json::array()))
        r.objectives.push_back(detail::vec_from_json(f));
    r.wall_clock_seconds = j.value("wall_clock_seconds", 0.0);
    return r;
}

// -------------------------------------------------------------------- store

/// Labels and replication plan of a stored experiment.
struct StoreIndex {
    std::vector<std::string> problems, algorithms, scenarios;
    std::set<std::string> planned;  // "problem|algorithm|scenario" cells that take part
    std::size_t replications = 1;
    std::uint64_t base_seed = 1;

    explicit StoreIndex(const ExperimentConfig& cfg) : replications(cfg.replications), base_seed(cfg.base_seed)
    {
        for (const auto& p : cfg.problems)
            problems.push_back(p.label);
        for (const auto& a : cfg.algorithms)
            algorithms.push_back(a.label);
        for (const auto& s : cfg.scenarios)
            scenarios.push_back(s.label);
        for (const auto& p : cfg.problems)
            for (const auto& a : cfg.algorithms)
                for (const auto& s : cfg.scenarios)
                    if (scenario_applies(s, p) && algorithm_applies(a.spec, s))
                        planned.insert(p.label + "|" + a.label + "|" + s.label);
    }
    explicit StoreIndex(const json& j)
        : problems(j.at("problems")), algorithms(j.at("algorithms")), scenarios(j.at("scenarios")),
          planned(j.at("planned")), replications(j.at("replications")), base_seed(j.at("base_seed"))
    {
    }
    json to_json() const
    {
        return {{"problems", problems},         {"algorithms", algorithms}, {"scenarios", scenarios},
                {"planned", planned},           {"replications", replications}, {"base_seed", base_seed}};
    }
    bool takes_part(const std::string& p, const std::string& a, const std::string& s) const
    {
        return planned.contains(p + "|" + a + "|" + s);
    }
};

/// Append-only run journal plus a deterministic metrics snapshot. append()
/// is safe to call from several threads; lines are written whole.
class ResultStore {
public:
    /// Opens `dir`, creating it with the config embedded. An existing store
    /// must carry the same config; its records are loaded so runs can resume.
    ResultStore(fs::path dir, const ExperimentConfig& cfg)
        : dir_(std::move(dir)), config_(cfg.source), index_(cfg)
    {
        fs::create_directories(dir_);
        const auto cfg_path = dir_ / "config.json";
        const json wrapped = {{"schema_version", kSchemaVersion}, {"config", config_}, {"index", index_.to_json()}};
        if (fs::exists(cfg_path)) {
            json existing;
            std::ifstream(cfg_path) >> existing;
            if (existing != wrapped)
                throw ValidationError({"store " + dir_.string() + " was created with a different config"});
        } else {
            std::ofstream(cfg_path) << wrapped.dump(2) << '\n';
        }
        load_journal();
    }

    /// Opens an existing store for reading.
    static ResultStore open(const fs::path& dir)
    {
        std::ifstream in(dir / "config.json");
        if (!in)
            throw std::runtime_error("no store at " + dir.string());
        json wrapped;
        in >> wrapped;
        return ResultStore(dir, wrapped.at("config"), StoreIndex(wrapped.at("index")));
    }

    bool empty() const { return records_.empty(); }
    const StoreIndex& index() const { return index_; }
    const fs::path& dir() const { return dir_; }
    const json& config() const { return config_; }
    const std::map<std::string, RunRecord>& records() const { return records_; }

    bool completed(const std::string& key) const
    {
        std::lock_guard lock(mutex_);
        const auto it = records_.find(key);
        return it != records_.end() && it->second.ok;
    }

    void append(const RunRecord& r)
    {
        const std::string line = record_to_json(r).dump();
        std::lock_guard lock(mutex_);
        std::ofstream out(dir_ / "records.jsonl", std::ios::app);
        if (torn_tail_)
            out << '\n';
        torn_tail_ = false;
        out << line << '\n';
        out.flush();
        records_[r.key()] = r;
    }

    /// Rewrites metrics.json from the journal: sorted by key, no timing.
    void write_metrics() const
    {
        std::lock_guard lock(mutex_);
        json arr = json::array();
        for (const auto& [key, r] : records_) {
            json j = record_to_json(r, false);
            j.erase("objectives");
            arr.push_back(std::move(j));
        }
        const json doc = {{"schema_version", kSchemaVersion}, {"records", arr}};
        std::ofstream(dir_ / "metrics.json") << doc.dump(2) << '\n';
    }

private:
    ResultStore(fs::path dir, json config, StoreIndex index)
        : dir_(std::move(dir)), config_(std::move(config)), index_(std::move(index))
    {
        load_journal();
    }

    void load_journal()
    {
        std::ifstream in(dir_ / "records.jsonl");
        std::string line;
        while (std::getline(in, line)) {
            torn_tail_ = in.eof();
            if (line.empty())
                continue;
            try {
                const RunRecord r = record_from_json(json::parse(line));
                records_[r.key()] = r;
            } catch (const std::exception&) {
                // a torn final line from an interrupted run is ignored
            }
        }
    }

    fs::path dir_;
    json config_;
    StoreIndex index_;
    std::map<std::string, RunRecord> records_;
    bool torn_tail_ = false;
    mutable std::mutex mutex_;
};

// -------------------------------------------------------------- execution

struct RunOptions {
    std::size_t jobs = 1;
    std::function<void(const RunRecord&)> on_record;
};

struct ExperimentOutcome {
    std::size_t planned = 0;
    std::size_t executed = 0;
    std::size_t skipped = 0;
    std::size_t failed = 0;
};

/// Executes every (problem, algorithm, scenario, seed) cell not already
/// completed in `store`. Baselines ignore the reference point, so one run
/// per seed is scored against every scenario it takes part in.
inline ExperimentOutcome run_experiment(const ExperimentConfig& cfg, ResultStore& store, const RunOptions& opt = {})
{
    struct Task {
        std::size_t problem;
        std::size_t algorithm;
        std::uint64_t seed;
        std::vector<std::size_t> scenarios;
    };
    std::vector<InstanceFrame> frames;
    std::vector<std::vector<std::optional<std::vector<ReferencePoint>>>> refs(cfg.problems.size());
    for (std::size_t p = 0; p < cfg.problems.size(); ++p) {
        frames.push_back(make_frame(cfg.problems[p], cfg.metric_options.front_samples));
        for (const auto& s : cfg.scenarios)
            refs[p].push_back(scenario_references(s, cfg.problems[p], frames[p]));
    }

    ExperimentOutcome outcome;
    std::vector<Task> tasks;
    for (std::size_t p = 0; p < cfg.problems.size(); ++p)
        for (std::size_t a = 0; a < cfg.algorithms.size(); ++a)
            for (std::size_t k = 0; k < cfg.replications; ++k) {
                const std::uint64_t seed = cfg.base_seed + k;
                const bool baseline = !is_preference_kind(cfg.algorithms[a].spec.kind);
                Task shared{p, a, seed, {}};
                for (std::size_t s = 0; s < cfg.scenarios.size(); ++s) {
                    if (!refs[p][s] || !algorithm_applies(cfg.algorithms[a].spec, cfg.scenarios[s]))
                        continue;
                    ++outcome.planned;
                    if (store.completed(run_key(cfg.problems[p].label, cfg.algorithms[a].label,
                                                cfg.scenarios[s].label, seed))) {
                        ++outcome.skipped;
                        continue;
                    }
                    if (baseline)
                        shared.scenarios.push_back(s);
                    else
                        tasks.push_back({p, a, seed, {s}});
                }
                if (!shared.scenarios.empty())
                    tasks.push_back(std::move(shared));
            }

    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> executed{0}, failed{0};
    auto worker = [&] {
        for (std::size_t t = next++; t < tasks.size(); t = next++) {
            const Task& task = tasks[t];
            const auto& pe = cfg.problems[task.problem];
            const auto& ae = cfg.algorithms[task.algorithm];
            AlgorithmSpec spec = ae.for_problem(pe.spec);
            if (is_preference_kind(spec.kind))
                spec.reference_points = *refs[task.problem][task.scenarios.front()];
            RunResult result;
            std::string error;
            try {
                result = run(spec, pe.make_problem(), cfg.budget, task.seed);
            } catch (const std::exception& e) {
                error = e.what();
            }
            for (std::size_t s : task.scenarios) {
                RunRecord r;
                r.problem = pe.label;
                r.algorithm = ae.label;
                r.scenario = cfg.scenarios[s].label;
                r.seed = task.seed;
                r.ok = error.empty();
                r.error = error;
                if (r.ok) {
                    r.evaluations = result.records.back().evaluations;
                    r.generations = result.records.back().generation;
                    r.objectives = result.final_population.objectives();
                    r.wall_clock_seconds = result.wall_clock_seconds;
                    try {
                        r.metrics = score_population(r.objectives, *refs[task.problem][s],
                                                     cfg.scenarios[s].single_reference(), frames[task.problem],
                                                     cfg.metric_options);
                    } catch (const std::exception& e) {
                        r.ok = false;
                        r.error = std::string("scoring failed: ") + e.what();
                    }
                }
                ++executed;
                if (!r.ok)
                    ++failed;
                store.append(r);
                if (opt.on_record)
                    opt.on_record(r);
            }
        }
    };
    const std::size_t jobs = std::max<std::size_t>(1, std::min(opt.jobs, tasks.size()));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t k = 0; k < jobs; ++k)
            pool.emplace_back(worker);
        for (auto& th : pool)
            th.join();
    }
    store.write_metrics();
    outcome.executed = executed;
    outcome.failed = failed;
    return outcome;
}

// ------------------------------------------------------------------ summary

struct RowSummary {
    std::string algorithm;
    std::size_t ok = 0;
    std::size_t failed = 0;
    std::size_t missing = 0;
    std::optional<double> median;
    std::optional<double> iqr;
    bool best = false;
    std::optional<TestOutcome> vs_best;  // absent for the best row or when untestable
    std::string note;
};

struct CellSummary {
    std::string problem;
    std::string scenario;
    std::vector<RowSummary> rows;
    bool complete = true;
};

struct Summary {
    MetricId metric = MetricId::EP;
    std::vector<CellSummary> cells;
    std::vector<std::string> incomplete;
};

/// Per (problem, scenario) cell: median and IQR per algorithm over its ok
/// replications, the best median flagged, and a paired Wilcoxon test of
/// every other algorithm against the best (paired by seed).
inline Summary summarize(const ResultStore& store, MetricId metric, double alpha = 0.05)
{
    const auto& ix = store.index();
    const std::string name(to_string(metric));
    const auto orient = orientation(metric);
    Summary out;
    out.metric = metric;
    for (const auto& p : ix.problems)
        for (const auto& s : ix.scenarios) {
            CellSummary cell{p, s, {}, true};
            std::vector<std::map<std::uint64_t, double>> by_seed;
            for (const auto& a : ix.algorithms) {
                RowSummary row;
                row.algorithm = a;
                std::map<std::uint64_t, double> values;
                if (!ix.takes_part(p, a, s))
                    continue;
                std::size_t absent = 0;
                for (std::size_t k = 0; k < ix.replications; ++k) {
                    const std::uint64_t seed = ix.base_seed + k;
                    const auto it = store.records().find(run_key(p, a, s, seed));
                    if (it == store.records().end()) {
                        ++row.missing;
                        continue;
                    }
                    if (!it->second.ok) {
                        ++row.failed;
                        continue;
                    }
                    const auto mv = it->second.metrics.find(name);
                    if (mv == it->second.metrics.end()) {
                        ++absent;
                        continue;
                    }
                    ++row.ok;
                    values[seed] = mv->second;
                }
                if (absent > 0 && row.ok == 0)
                    continue;  // metric not defined for this cell
                if (row.missing > 0) {
                    cell.complete = false;
                    out.incomplete.push_back(p + " / " + s + " / " + a + ": " + std::to_string(row.missing) +
                                             " of " + std::to_string(ix.replications) + " runs missing");
                } else if (!values.empty()) {
                    Vec v;
                    for (const auto& [seed, x] : values)
                        v.push_back(x);
                    row.median = median(v);
                    row.iqr = interquartile_range(v);
                }
                cell.rows.push_back(std::move(row));
                by_seed.push_back(std::move(values));
            }
            if (cell.rows.empty())
                continue;
            std::optional<std::size_t> best;
            for (std::size_t r = 0; r < cell.rows.size(); ++r) {
                if (!cell.rows[r].median)
                    continue;
                const double v = *cell.rows[r].median;
                if (!best || (orient == Orientation::Minimize ? v < *cell.rows[*best].median
                                                              : v > *cell.rows[*best].median))
                    best = r;
            }
            if (best && cell.complete) {
                cell.rows[*best].best = true;
                for (std::size_t r = 0; r < cell.rows.size(); ++r) {
                    if (r == *best || !cell.rows[r].median)
                        continue;
                    Vec a, b;
                    for (const auto& [seed, x] : by_seed[*best]) {
                        const auto it = by_seed[r].find(seed);
                        if (it == by_seed[r].end())
                            continue;
                        a.push_back(x);
                        b.push_back(it->second);
                    }
                    try {
                        cell.rows[r].vs_best = wilcoxon_signed_rank(a, b, alpha);
                    } catch (const ContractViolation&) {
                        cell.rows[r].note = "not testable: fewer than 5 non-zero paired differences";
                    }
                }
            }
            out.cells.push_back(std::move(cell));
        }
    return out;
}

inline json summary_to_json(const Summary& s)
{
    json cells = json::array();
    for (const auto& c : s.cells) {
        json rows = json::array();
        for (const auto& r : c.rows) {
            json row = {{"algorithm", r.algorithm}, {"ok", r.ok}, {"failed", r.failed}, {"missing", r.missing},
                        {"best", r.best}};
            row["median"] = r.median ? detail::number_to_json(*r.median) : json(nullptr);
            row["iqr"] = r.iqr ? detail::number_to_json(*r.iqr) : json(nullptr);
            if (r.vs_best)
                row["wilcoxon_vs_best"] = {{"statistic", r.vs_best->statistic},
                                           {"p_value", r.vs_best->p_value},
                                           {"significant", r.vs_best->significant},
                                           {"n", r.vs_best->n_effective},
                                           {"exact", r.vs_best->exact}};
            if (!r.note.empty())
                row["note"] = r.note;
            rows.push_back(std::move(row));
        }
        cells.push_back({{"problem", c.problem}, {"scenario", c.scenario}, {"complete", c.complete}, {"rows", rows}});
    }
    return {{"schema_version", kSchemaVersion},
            {"metric", std::string(to_string(s.metric))},
            {"quantile_convention", kQuantileConvention},
            {"cells", cells},
            {"incomplete", s.incomplete}};
}

inline std::string summary_to_text(const Summary& s)
{
    std::ostringstream out;
    out << "metric " << to_string(s.metric) << "  (quantiles: " << kQuantileConvention << ")\n";
    char buf[256];
    for (const auto& c : s.cells) {
        out << "\n" << c.problem << " / " << c.scenario << (c.complete ? "" : "  [incomplete]") << "\n";
        for (const auto& r : c.rows) {
            std::string test = r.best ? "best" : "";
            if (r.vs_best) {
                std::snprintf(buf, sizeof buf, "p=%.4g%s", r.vs_best->p_value, r.vs_best->significant ? " *" : "");
                test = buf;
            } else if (!r.note.empty()) {
                test = "n/a";
            }
            const std::string med = r.median ? (std::snprintf(buf, sizeof buf, "%.6g", *r.median), std::string(buf)) : "-";
            const std::string iqr = r.iqr ? (std::snprintf(buf, sizeof buf, "%.3g", *r.iqr), std::string(buf)) : "-";
            std::snprintf(buf, sizeof buf, "  %-14s median %-12s iqr %-10s ok %-3zu failed %-3zu %s\n",
                          r.algorithm.c_str(), med.c_str(), iqr.c_str(), r.ok, r.failed, test.c_str());
            out << buf;
        }
    }
    for (const auto& gap : s.incomplete)
        out << "incomplete: " << gap << "\n";
    return out.str();
}

// ------------------------------------------------------------------ heatmap

struct Heatmap {
    MetricId metric = MetricId::EP;
    std::vector<std::string> algorithms;
    std::vector<std::string> instances;          // "problem / scenario"
    std::vector<std::vector<int>> ranks;         // instance x algorithm, 0 = did not take part
    std::vector<std::vector<std::size_t>> frequency;  // algorithm x rank position (index 0 = rank 1)
};

/// Ranks algorithms by median per instance; throws IncompleteStore listing
/// every cell that lacks a median.
inline Heatmap build_heatmap(const ResultStore& store, MetricId metric)
{
    const Summary s = summarize(store, metric);
    const auto& ix = store.index();
    std::vector<std::string> gaps = s.incomplete;
    for (const auto& c : s.cells)
        for (const auto& r : c.rows)
            if (!r.median && r.missing == 0)
                gaps.push_back(c.problem + " / " + c.scenario + " / " + r.algorithm + ": no successful runs");
    if (!gaps.empty())
        throw IncompleteStore(std::move(gaps));

    Heatmap h;
    h.metric = metric;
    h.algorithms = ix.algorithms;
    h.frequency.assign(h.algorithms.size(), std::vector<std::size_t>(h.algorithms.size(), 0));
    for (const auto& c : s.cells) {
        std::vector<std::size_t> cols;
        Vec values;
        for (const auto& r : c.rows) {
            cols.push_back(static_cast<std::size_t>(
                std::find(h.algorithms.begin(), h.algorithms.end(), r.algorithm) - h.algorithms.begin()));
            values.push_back(*r.median);
        }
        const auto ranked = rank_table({values}, orientation(metric)).front();
        std::vector<int> row(h.algorithms.size(), 0);
        for (std::size_t k = 0; k < cols.size(); ++k) {
            row[cols[k]] = ranked[k];
            ++h.frequency[cols[k]][static_cast<std::size_t>(ranked[k] - 1)];
        }
        h.instances.push_back(c.problem + " / " + c.scenario);
        h.ranks.push_back(std::move(row));
    }
    return h;
}

inline json heatmap_to_json(const Heatmap& h)
{
    return {{"schema_version", kSchemaVersion},
            {"metric", std::string(to_string(h.metric))},
            {"algorithms", h.algorithms},
            {"instances", h.instances},
            {"rank_matrix", h.ranks},
            {"rank_frequency", h.frequency}};
}

namespace detail {

inline std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s)
        out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
}

}  // namespace detail

/// Writes <base>_ranks.csv, <base>_frequency.csv and <base>.json, where base
/// is `out` without a .csv/.json extension. Returns the files written.
inline std::vector<fs::path> export_heatmap(const ResultStore& store, MetricId metric, const fs::path& out)
{
    const Heatmap h = build_heatmap(store, metric);
    fs::path base = out;
    if (base.extension() == ".csv" || base.extension() == ".json")
        base.replace_extension();
    if (base.has_parent_path())
        fs::create_directories(base.parent_path());
    const fs::path ranks = base.string() + "_ranks.csv";
    const fs::path freq = base.string() + "_frequency.csv";
    const fs::path js = base.string() + ".json";
    {
        std::ofstream f(ranks);
        f << "# schema_version " << kSchemaVersion << ", metric " << to_string(metric) << ", 0 = not run\n";
        f << "instance";
        for (const auto& a : h.algorithms)
            f << ',' << detail::csv_field(a);
        f << '\n';
        for (std::size_t i = 0; i < h.instances.size(); ++i) {
            f << detail::csv_field(h.instances[i]);
            for (int r : h.ranks[i])
                f << ',' << r;
            f << '\n';
        }
    }
    {
        std::ofstream f(freq);
        f << "# schema_version " << kSchemaVersion << ", metric " << to_string(metric) << '\n';
        f << "algorithm";
        for (std::size_t r = 1; r <= h.algorithms.size(); ++r)
            f << ",rank" << r;
        f << '\n';
        for (std::size_t a = 0; a < h.algorithms.size(); ++a) {
            f << detail::csv_field(h.algorithms[a]);
            for (std::size_t c : h.frequency[a])
                f << ',' << c;
            f << '\n';
        }
    }
    std::ofstream(js) << heatmap_to_json(h).dump(2) << '\n';
    return {ranks, freq, js};
}

// ------------------------------------------------------------------ presets

inline fs::path preset_dir()
{
    if (const char* env = std::getenv("PREFEMO_PRESET_DIR"))
        return env;
    return PREFEMO_PRESET_DIR;
}

struct PresetInfo {
    std::string name;
    std::string description;
    fs::path path;
};

inline std::vector<PresetInfo> scenario_presets(const fs::path& dir = preset_dir())
{
    std::vector<PresetInfo> out;
    if (!fs::exists(dir))
        return out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.path().extension() != ".json")
            continue;
        json j;
        std::ifstream(entry.path()) >> j;
        out.push_back({j.value("name", entry.path().stem().string()), j.value("description", std::string{}),
                       entry.path()});
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
    return out;
}

inline json load_preset(const std::string& name, const fs::path& dir = preset_dir())
{
    for (const auto& p : scenario_presets(dir))
        if (p.name == name) {
            json j;
            std::ifstream(p.path) >> j;
            return j;
        }
    throw std::runtime_error("unknown preset '" + name + "'");
}

}  // namespace prefemo
