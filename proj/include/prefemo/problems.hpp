#pragma once

// Benchmark problems (ZDT, DTLZ), scenario-based portfolio models and
// analytic Pareto-front sampling.

#include <prefemo/core.hpp>
#include <prefemo/rng.hpp>
#include <prefemo/scalarize.hpp>

#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <memory>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace prefemo {

enum class Family {
    ZDT1,
    ZDT2,
    ZDT3,
    ZDT4,
    ZDT6,
    DTLZ1,
    DTLZ2,
    DTLZ3,
    DTLZ4,
    PORTFOLIO_MVS,
    PORTFOLIO_MVSKT
};

inline constexpr std::array<std::pair<Family, std::string_view>, 11> kFamilyNames{{
    {Family::ZDT1, "ZDT1"},
    {Family::ZDT2, "ZDT2"},
    {Family::ZDT3, "ZDT3"},
    {Family::ZDT4, "ZDT4"},
    {Family::ZDT6, "ZDT6"},
    {Family::DTLZ1, "DTLZ1"},
    {Family::DTLZ2, "DTLZ2"},
    {Family::DTLZ3, "DTLZ3"},
    {Family::DTLZ4, "DTLZ4"},
    {Family::PORTFOLIO_MVS, "PORTFOLIO_MVS"},
    {Family::PORTFOLIO_MVSKT, "PORTFOLIO_MVSKT"},
}};

inline std::string_view to_string(Family f)
{
    for (const auto& [family, name] : kFamilyNames)
        if (family == f)
            return name;
    return "?";
}

inline std::optional<Family> family_from_string(std::string_view s)
{
    for (const auto& [family, name] : kFamilyNames)
        if (name == s)
            return family;
    return std::nullopt;
}

inline bool is_zdt(Family f) { return f <= Family::ZDT6; }
inline bool is_dtlz(Family f) { return f >= Family::DTLZ1 && f <= Family::DTLZ4; }
inline bool is_portfolio(Family f) { return f == Family::PORTFOLIO_MVS || f == Family::PORTFOLIO_MVSKT; }

enum class Sense { Minimize, Maximize };

struct ProblemSpec {
    Family family = Family::ZDT1;
    std::size_t m = 2;
    std::size_t n = 30;
    BoxBounds bounds;

    bool operator==(const ProblemSpec&) const = default;
};

/// Builds a ProblemSpec with the community-standard variable counts: ZDT1-3 n=30,
/// ZDT4/6 n=10, DTLZ1 n=m+4, DTLZ2-4 n=m+9. Portfolio specs take n = number
/// of assets. Passing n > 0 overrides the default.
inline ProblemSpec make_spec(Family family, std::size_t m = 0, std::size_t n = 0)
{
    ProblemSpec spec;
    spec.family = family;
    if (is_zdt(family)) {
        require(m == 0 || m == 2, "ZDT problems have exactly 2 objectives");
        spec.m = 2;
        const bool short_form = family == Family::ZDT4 || family == Family::ZDT6;
        spec.n = n > 0 ? n : (short_form ? 10 : 30);
        require(spec.n >= 2, "ZDT problems need at least 2 variables");
        if (family == Family::ZDT4) {
            Vec lo(spec.n, -5.0), hi(spec.n, 5.0);
            lo[0] = 0.0;
            hi[0] = 1.0;
            spec.bounds = BoxBounds(lo, hi);
        } else {
            spec.bounds = BoxBounds::uniform(spec.n, 0.0, 1.0);
        }
    } else if (is_dtlz(family)) {
        spec.m = m == 0 ? 3 : m;
        require(spec.m >= 3 && spec.m <= 100, "DTLZ objective count must be in [3, 100]");
        spec.n = n > 0 ? n : spec.m + (family == Family::DTLZ1 ? 4 : 9);
        spec.bounds = BoxBounds::uniform(spec.n, 0.0, 1.0);
    } else {
        const std::size_t expected = family == Family::PORTFOLIO_MVS ? 3 : 5;
        require(m == 0 || m == expected, "portfolio model objective count is fixed");
        spec.m = expected;
        require(n > 0, "portfolio spec needs the asset count");
        spec.n = n;
        spec.bounds = BoxBounds::uniform(spec.n, 0.0, 1.0);
    }
    require(is_portfolio(family) || spec.n >= spec.m, "variable count must be at least the objective count");
    return spec;
}

inline std::vector<Sense> objective_senses(Family family, std::size_t m)
{
    if (family == Family::PORTFOLIO_MVS)
        return {Sense::Maximize, Sense::Minimize, Sense::Maximize};
    if (family == Family::PORTFOLIO_MVSKT)
        return {Sense::Maximize, Sense::Minimize, Sense::Maximize, Sense::Minimize, Sense::Maximize};
    return std::vector<Sense>(m, Sense::Minimize);
}

namespace detail {

inline double zdt_distance_mean(std::span<const double> x)
{
    double sum = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i)
        sum += x[i];
    return sum / static_cast<double>(x.size() - 1);
}

inline ObjectiveVector evaluate_zdt(Family family, std::span<const double> x)
{
    constexpr double pi = std::numbers::pi;
    const double x1 = x[0];
    double f1 = x1;
    double g = 1.0 + 9.0 * zdt_distance_mean(x);
    double h = 0.0;
    switch (family) {
    case Family::ZDT1:
        h = 1.0 - std::sqrt(f1 / g);
        break;
    case Family::ZDT2:
        h = 1.0 - (f1 / g) * (f1 / g);
        break;
    case Family::ZDT3:
        h = 1.0 - std::sqrt(f1 / g) - (f1 / g) * std::sin(10.0 * pi * f1);
        break;
    case Family::ZDT4: {
        g = 1.0 + 10.0 * static_cast<double>(x.size() - 1);
        for (std::size_t i = 1; i < x.size(); ++i)
            g += x[i] * x[i] - 10.0 * std::cos(4.0 * pi * x[i]);
        h = 1.0 - std::sqrt(f1 / g);
        break;
    }
    case Family::ZDT6: {
        f1 = 1.0 - std::exp(-4.0 * x1) * std::pow(std::sin(6.0 * pi * x1), 6);
        g = 1.0 + 9.0 * std::pow(zdt_distance_mean(x), 0.25);
        h = 1.0 - (f1 / g) * (f1 / g);
        break;
    }
    default:
        break;
    }
    return {f1, g * h};
}

inline ObjectiveVector evaluate_dtlz(Family family, std::size_t m, std::span<const double> x)
{
    constexpr double pi = std::numbers::pi;
    const std::size_t n = x.size();
    const std::size_t k = n - m + 1;
    const auto tail = x.subspan(m - 1, k);

    double g = 0.0;
    if (family == Family::DTLZ1 || family == Family::DTLZ3) {
        for (double xi : tail)
            g += (xi - 0.5) * (xi - 0.5) - std::cos(20.0 * pi * (xi - 0.5));
        g = 100.0 * (static_cast<double>(k) + g);
    } else {
        for (double xi : tail)
            g += (xi - 0.5) * (xi - 0.5);
    }

    ObjectiveVector f(m, 0.0);
    if (family == Family::DTLZ1) {
        for (std::size_t i = 0; i < m; ++i) {
            double v = 0.5 * (1.0 + g);
            for (std::size_t j = 0; j + i + 1 < m; ++j)
                v *= x[j];
            if (i > 0)
                v *= 1.0 - x[m - i - 1];
            f[i] = v;
        }
        return f;
    }

    const double alpha = family == Family::DTLZ4 ? 100.0 : 1.0;
    for (std::size_t i = 0; i < m; ++i) {
        double v = 1.0 + g;
        for (std::size_t j = 0; j + i + 1 < m; ++j)
            v *= std::cos(std::pow(x[j], alpha) * pi / 2.0);
        if (i > 0)
            v *= std::sin(std::pow(x[m - i - 1], alpha) * pi / 2.0);
        f[i] = v;
    }
    return f;
}

}  // namespace detail

/// Evaluates a ZDT or DTLZ problem. Portfolio models need asset data and go
/// through Problem::evaluate instead.
inline ObjectiveVector evaluate(const ProblemSpec& spec, std::span<const double> x)
{
    require(x.size() == spec.n, "evaluate: decision vector has wrong dimension");
    require(spec.bounds.contains(x), "evaluate: decision vector outside bounds");
    require(!is_portfolio(spec.family), "evaluate: portfolio models need an AssetHistory");
    if (is_zdt(spec.family))
        return detail::evaluate_zdt(spec.family, x);
    return detail::evaluate_dtlz(spec.family, spec.m, x);
}

// ---------------------------------------------------------------- portfolio

class IngestionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InsufficientData : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Per-period returns and turnover ratios, row-major T x n.
struct AssetHistory {
    std::vector<std::string> asset_ids;
    std::vector<Vec> returns;
    std::vector<Vec> turnovers;

    std::size_t periods() const { return returns.size(); }
    std::size_t assets() const { return asset_ids.size(); }
};

struct PortfolioWeights {
    Vec rho;
};

/// Clamp negatives to zero and rescale to unit sum; all-zero maps to uniform.
inline PortfolioWeights repair_to_simplex(std::span<const double> x)
{
    require(!x.empty(), "repair_to_simplex: empty vector");
    require(all_finite(x), "repair_to_simplex: non-finite input");
    PortfolioWeights w{Vec(x.size(), 0.0)};
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        w.rho[i] = std::max(0.0, x[i]);
        sum += w.rho[i];
    }
    if (!(sum > 0.0)) {
        std::fill(w.rho.begin(), w.rho.end(), 1.0 / static_cast<double>(x.size()));
        return w;
    }
    for (double& r : w.rho)
        r /= sum;
    return w;
}

enum class PortfolioModel { MVS, MVSKT };

/// Scenario moments of the portfolio return series. Maximized objectives
/// (mean return, skewness, turnover) come back negated.
inline ObjectiveVector evaluate_portfolio(PortfolioModel model, const PortfolioWeights& w,
                                          const AssetHistory& hist)
{
    const std::size_t T = hist.periods();
    if (T < 2)
        throw InsufficientData("portfolio evaluation needs at least 2 periods, got " + std::to_string(T));
    require(w.rho.size() == hist.assets(), "evaluate_portfolio: weight count does not match asset count");

    Vec psi(T, 0.0);
    for (std::size_t t = 0; t < T; ++t)
        for (std::size_t i = 0; i < w.rho.size(); ++i)
            psi[t] += w.rho[i] * hist.returns[t][i];

    const double tn = static_cast<double>(T);
    const double mean = std::accumulate(psi.begin(), psi.end(), 0.0) / tn;
    double var = 0.0, skew = 0.0, kurt = 0.0;
    for (double p : psi) {
        const double d = p - mean;
        const double d2 = d * d;
        var += d2;
        skew += d2 * d;
        kurt += d2 * d2;
    }
    var /= tn;
    skew /= tn;
    kurt /= tn;

    if (model == PortfolioModel::MVS)
        return {-mean, var, -skew};

    double turnover = 0.0;
    for (std::size_t i = 0; i < w.rho.size(); ++i) {
        double asset_mean = 0.0;
        for (std::size_t t = 0; t < hist.turnovers.size(); ++t)
            asset_mean += hist.turnovers[t][i];
        asset_mean /= static_cast<double>(hist.turnovers.size());
        turnover += w.rho[i] * asset_mean;
    }
    return {-mean, var, -skew, kurt, -turnover};
}

namespace detail {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<Vec> rows;
};

inline std::vector<std::string> split_csv_line(const std::string& line)
{
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ','))
        cells.push_back(cell);
    if (!line.empty() && line.back() == ',')
        cells.emplace_back();
    return cells;
}

inline std::string trim(std::string s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

inline CsvTable read_numeric_csv(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw IngestionError(path + ": cannot open file");
    CsvTable table;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty())
            continue;
        auto cells = split_csv_line(line);
        for (auto& c : cells)
            c = trim(c);
        if (!have_header) {
            if (line_no == 1 && cells.size() > 0 && cells[0].size() >= 3 &&
                cells[0].compare(0, 3, "\xEF\xBB\xBF") == 0)
                cells[0] = cells[0].substr(3);
            std::set<std::string> seen;
            for (std::size_t c = 0; c < cells.size(); ++c) {
                if (cells[c].empty())
                    throw IngestionError(path + ": row 1, column " + std::to_string(c + 1) + ": empty asset id");
                if (!seen.insert(cells[c]).second)
                    throw IngestionError(path + ": row 1, column " + std::to_string(c + 1) +
                                         ": duplicate asset id '" + cells[c] + "'");
            }
            table.header = std::move(cells);
            have_header = true;
            continue;
        }
        if (cells.size() != table.header.size())
            throw IngestionError(path + ": row " + std::to_string(line_no) + ": expected " +
                                 std::to_string(table.header.size()) + " columns, found " +
                                 std::to_string(cells.size()));
        Vec row(cells.size());
        for (std::size_t c = 0; c < cells.size(); ++c) {
            const auto& s = cells[c];
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v))
                throw IngestionError(path + ": row " + std::to_string(line_no) + ", column " +
                                     std::to_string(c + 1) + ": non-numeric value '" + s + "'");
            row[c] = v;
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace detail

/// Loads a returns CSV and, optionally, a turnovers CSV of identical shape.
/// Both carry a header row of asset ids followed by one row per period.
/// Without a turnovers file the turnover matrix is all zeros.
inline AssetHistory load_asset_history(const std::string& returns_path, const std::string& turnovers_path = {})
{
    auto returns = detail::read_numeric_csv(returns_path);
    if (returns.rows.size() < 2)
        throw InsufficientData(returns_path + ": need at least 2 periods, found " +
                               std::to_string(returns.rows.size()));
    AssetHistory hist;
    hist.asset_ids = returns.header;
    hist.returns = std::move(returns.rows);
    if (turnovers_path.empty()) {
        hist.turnovers.assign(hist.returns.size(), Vec(hist.asset_ids.size(), 0.0));
        return hist;
    }
    auto turnovers = detail::read_numeric_csv(turnovers_path);
    if (turnovers.header != hist.asset_ids)
        throw IngestionError(turnovers_path + ": row 1: asset ids differ from " + returns_path);
    if (turnovers.rows.size() != hist.returns.size())
        throw IngestionError(turnovers_path + ": expected " + std::to_string(hist.returns.size()) +
                             " periods, found " + std::to_string(turnovers.rows.size()));
    hist.turnovers = std::move(turnovers.rows);
    return hist;
}

inline void write_matrix_csv(const std::string& path, const std::vector<std::string>& header,
                             const std::vector<Vec>& rows)
{
    std::ofstream out(path);
    if (!out)
        throw IngestionError(path + ": cannot write file");
    for (std::size_t c = 0; c < header.size(); ++c)
        out << (c ? "," : "") << header[c];
    out << '\n';
    out.precision(17);
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c)
            out << (c ? "," : "") << row[c];
        out << '\n';
    }
}

/// Synthetic daily market in percent units: a common market factor plus
/// skewed idiosyncratic noise per asset, and log-normal turnover ratios.
inline AssetHistory synthetic_asset_history(std::size_t assets, std::size_t periods, std::uint64_t seed)
{
    require(assets >= 1 && periods >= 2, "synthetic_asset_history: need >= 1 asset and >= 2 periods");
    Rng rng(seed);
    AssetHistory hist;
    Vec beta(assets), drift(assets), vol(assets), skew(assets), base_turnover(assets);
    for (std::size_t i = 0; i < assets; ++i) {
        char id[32];
        std::snprintf(id, sizeof id, "A%03zu", i + 1);
        hist.asset_ids.emplace_back(id);
        beta[i] = rng.uniform(0.5, 1.5);
        drift[i] = rng.uniform(-0.05, 0.15);
        vol[i] = rng.uniform(1.0, 3.0);
        skew[i] = rng.uniform(-0.3, 0.5);
        base_turnover[i] = rng.uniform(0.5, 5.0);
    }
    for (std::size_t t = 0; t < periods; ++t) {
        const double market = 0.8 * rng.normal();
        Vec r(assets), to(assets);
        for (std::size_t i = 0; i < assets; ++i) {
            const double z = rng.normal();
            const double shock = (z + skew[i] * (z * z - 1.0)) / std::sqrt(1.0 + 2.0 * skew[i] * skew[i]);
            r[i] = drift[i] + beta[i] * market + vol[i] * shock;
            to[i] = base_turnover[i] * std::exp(0.4 * rng.normal() - 0.08);
        }
        hist.returns.push_back(std::move(r));
        hist.turnovers.push_back(std::move(to));
    }
    return hist;
}

// ------------------------------------------------------------------ Problem

/// A ready-to-evaluate problem instance: the ProblemSpec plus any data it needs.
class Problem {
public:
    explicit Problem(ProblemSpec spec) : spec_(std::move(spec))
    {
        require(!is_portfolio(spec_.family), "portfolio problems need an AssetHistory");
    }

    Problem(ProblemSpec spec, std::shared_ptr<const AssetHistory> history)
        : spec_(std::move(spec)), history_(std::move(history))
    {
        if (is_portfolio(spec_.family)) {
            require(history_ != nullptr, "portfolio problem without asset history");
            require(history_->assets() == spec_.n, "asset count does not match spec n");
            if (history_->periods() < 2)
                throw InsufficientData("portfolio problem needs at least 2 periods");
        }
    }

    const ProblemSpec& spec() const { return spec_; }
    std::size_t m() const { return spec_.m; }
    std::size_t n() const { return spec_.n; }
    const BoxBounds& bounds() const { return spec_.bounds; }
    std::vector<Sense> senses() const { return objective_senses(spec_.family, spec_.m); }
    const std::shared_ptr<const AssetHistory>& history() const { return history_; }

    ObjectiveVector evaluate(std::span<const double> x) const
    {
        if (!is_portfolio(spec_.family))
            return prefemo::evaluate(spec_, x);
        require(x.size() == spec_.n, "evaluate: decision vector has wrong dimension");
        require(spec_.bounds.contains(x), "evaluate: decision vector outside bounds");
        const auto model = spec_.family == Family::PORTFOLIO_MVS ? PortfolioModel::MVS : PortfolioModel::MVSKT;
        return evaluate_portfolio(model, repair_to_simplex(x), *history_);
    }

    /// Flips maximized objectives back to their native orientation.
    ObjectiveVector to_native(std::span<const double> f) const
    {
        ObjectiveVector out(f.begin(), f.end());
        const auto s = senses();
        for (std::size_t i = 0; i < out.size(); ++i)
            if (s[i] == Sense::Maximize)
                out[i] = -out[i];
        return out;
    }

private:
    ProblemSpec spec_;
    std::shared_ptr<const AssetHistory> history_;
};

// ------------------------------------------------------------ front samples

namespace detail {

// Non-dominated f1 intervals of the ZDT3 front.
inline constexpr std::array<std::pair<double, double>, 5> kZdt3Segments{{
    {0.0, 0.0830015349},
    {0.182228728030, 0.2577623634},
    {0.409313674809, 0.4538821041},
    {0.618396794440, 0.6525117038},
    {0.823331798327, 0.8518328654},
}};

inline constexpr double kZdt6MinF1 = 0.2807753191;

}  // namespace detail

/// Deterministic samples of the analytic Pareto front.
///
/// Two-objective fronts are sampled on a uniform grid of the front's
/// parameter t in [0, 1] (ZDT1/ZDT4: f1 = t^2 so f2 is uniform; ZDT2/ZDT6:
/// f1 uniform; ZDT3: f1 uniform over each disconnected piece, points shared
/// in proportion to piece length). DTLZ fronts use the largest Das-Dennis
/// lattice with at most `count` points, scaled onto the plane sum f = 0.5
/// (DTLZ1) or projected onto the unit sphere (DTLZ2-4).
inline std::vector<ObjectiveVector> sample_true_front(const ProblemSpec& spec, std::size_t count)
{
    require(!is_portfolio(spec.family), "sample_true_front: portfolio models have no analytic front");
    require(count >= spec.m, "sample_true_front: count must be at least m");
    std::vector<ObjectiveVector> out;
    const auto grid = [count](std::size_t k) {
        return static_cast<double>(k) / static_cast<double>(count - 1);
    };
    switch (spec.family) {
    case Family::ZDT1:
    case Family::ZDT4:
        for (std::size_t k = 0; k < count; ++k) {
            const double t = grid(k);
            out.push_back({t * t, 1.0 - t});
        }
        return out;
    case Family::ZDT2:
        for (std::size_t k = 0; k < count; ++k) {
            const double t = grid(k);
            out.push_back({t, 1.0 - t * t});
        }
        return out;
    case Family::ZDT6:
        for (std::size_t k = 0; k < count; ++k) {
            const double f1 = detail::kZdt6MinF1 + (1.0 - detail::kZdt6MinF1) * grid(k);
            out.push_back({f1, 1.0 - f1 * f1});
        }
        return out;
    case Family::ZDT3: {
        double total = 0.0;
        for (const auto& [lo, hi] : detail::kZdt3Segments)
            total += hi - lo;
        std::size_t assigned = 0;
        for (std::size_t s = 0; s < detail::kZdt3Segments.size(); ++s) {
            const auto [lo, hi] = detail::kZdt3Segments[s];
            std::size_t share = s + 1 == detail::kZdt3Segments.size()
                                    ? count - assigned
                                    : static_cast<std::size_t>(std::llround(count * (hi - lo) / total));
            share = std::max<std::size_t>(share, 1);
            share = std::min(share, count - assigned - (detail::kZdt3Segments.size() - s - 1));
            for (std::size_t k = 0; k < share; ++k) {
                const double f1 = share == 1 ? lo : lo + (hi - lo) * static_cast<double>(k) / (share - 1);
                const double f2 = 1.0 - std::sqrt(f1) - f1 * std::sin(10.0 * std::numbers::pi * f1);
                out.push_back({f1, f2});
            }
            assigned += share;
        }
        return out;
    }
    default:
        break;
    }

    std::size_t H = 1;
    while (das_dennis_count(spec.m, H + 1) <= count)
        ++H;
    for (const auto& w : das_dennis(spec.m, H).vectors) {
        ObjectiveVector f(w.begin(), w.end());
        if (spec.family == Family::DTLZ1) {
            for (double& v : f)
                v *= 0.5;
        } else {
            double norm = 0.0;
            for (double v : f)
                norm += v * v;
            norm = std::sqrt(norm);
            for (double& v : f)
                v /= norm;
        }
        out.push_back(std::move(f));
    }
    return out;
}

/// Worst objective values along the analytic front.
inline ObjectiveVector true_nadir(const ProblemSpec& spec)
{
    if (spec.family == Family::ZDT3)
        return {detail::kZdt3Segments.back().second, 1.0};
    if (spec.family == Family::ZDT6)
        return {1.0, 1.0 - detail::kZdt6MinF1 * detail::kZdt6MinF1};
    if (spec.family == Family::DTLZ1)
        return ObjectiveVector(spec.m, 0.5);
    return ObjectiveVector(spec.m, 1.0);
}

inline ObjectiveVector true_ideal(const ProblemSpec& spec)
{
    if (spec.family == Family::ZDT3) {
        // minimum f2 sits on the last segment
        double best = 1.0;
        const auto [lo, hi] = detail::kZdt3Segments.back();
        for (int k = 0; k <= 20000; ++k) {
            const double f1 = lo + (hi - lo) * k / 20000.0;
            best = std::min(best, 1.0 - std::sqrt(f1) - f1 * std::sin(10.0 * std::numbers::pi * f1));
        }
        return {0.0, best};
    }
    if (spec.family == Family::ZDT6)
        return {detail::kZdt6MinF1, 0.0};
    return ObjectiveVector(spec.m, 0.0);
}

}  // namespace prefemo
