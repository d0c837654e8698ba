// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Tolerances are fixed here and printed with each result.

#include <prefemo/prefemo.hpp>

#include <chrono>
#include <cstdio>
#include <iostream>

#include <unistd.h>

using namespace prefemo;

namespace {

int g_failures = 0;

void report(const char* name, bool ok, const std::string& detail, double seconds)
{
    std::printf("%s  %-34s %s  (%.1fs)\n", ok ? "PASS" : "FAIL", name, detail.c_str(), seconds);
    std::fflush(stdout);
    if (!ok)
        ++g_failures;
}

template <class F>
void criterion(const char* name, F&& body)
{
    const auto start = std::chrono::steady_clock::now();
    bool ok = false;
    std::string detail;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail += std::string(" exception: ") + e.what();
    }
    report(name, ok, detail, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
}

std::string fmt(const char* f, double a)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::vector<ObjectiveVector> front0(const std::vector<ObjectiveVector>& objs)
{
    const auto fronts = fast_nondominated_sort(objs);
    std::vector<ObjectiveVector> out;
    for (std::size_t idx : fronts.front())
        out.push_back(objs[idx]);
    return out;
}

// ---------------------------------------------------------------- oracles

std::vector<std::size_t> brute_force_ranks(const std::vector<ObjectiveVector>& pts)
{
    const std::size_t n = pts.size();
    std::vector<std::size_t> rank(n, 0);
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                bool le = true, lt = false;
                for (std::size_t k = 0; k < pts[i].size(); ++k) {
                    le = le && pts[j][k] <= pts[i][k];
                    lt = lt || pts[j][k] < pts[i][k];
                }
                if (le && lt && rank[i] < rank[j] + 1) {
                    rank[i] = rank[j] + 1;
                    changed = true;
                }
            }
    }
    return rank;
}

double wilcoxon_enumerated(const Vec& a, const Vec& b)
{
    Vec d;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i])
            d.push_back(a[i] - b[i]);
    const std::size_t n = d.size();
    Vec rank(n);
    for (std::size_t i = 0; i < n; ++i) {
        double below = 0, same = 0;
        for (std::size_t j = 0; j < n; ++j) {
            below += std::abs(d[j]) < std::abs(d[i]);
            same += std::abs(d[j]) == std::abs(d[i]);
        }
        rank[i] = below + (same + 1.0) / 2.0;
    }
    double observed = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        if (d[i] > 0)
            observed += rank[i];
    double lower = 0, upper = 0;
    const std::size_t all = std::size_t{1} << n;
    for (std::size_t mask = 0; mask < all; ++mask) {
        double w = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            if (mask >> i & 1U)
                w += rank[i];
        lower += w <= observed;
        upper += w >= observed;
    }
    return std::min(1.0, 2.0 * std::min(lower, upper) / static_cast<double>(all));
}

// ------------------------------------------------------------- criteria

bool metric_oracles(std::string& detail)
{
    const Vec ref{1, 1};
    const double hv = hypervolume(std::vector<ObjectiveVector>{{0.25, 0.75}, {0.75, 0.25}}, ref);
    const double ig = igd(std::vector<ObjectiveVector>{{0, 1}}, std::vector<ObjectiveVector>{{0, 1}, {1, 0}});
    const double ep1 = ep_accuracy(std::vector<ObjectiveVector>{{0.4, 0.6}}, ReferencePoint(Vec{0.3, 0.5}, Vec{0.5, 0.5}));
    const double ep2 = ep_accuracy(std::vector<ObjectiveVector>{{0.2, 0.2}}, ReferencePoint(Vec{0.3, 0.3}, Vec{0.5, 0.5}));
    const double ep3 = ep_accuracy(std::vector<ObjectiveVector>{{0.3, 0.5}, {0.9, 0.1}}, ReferencePoint(Vec{0.3, 0.5}));
    // the same formula written out, evaluated in double arithmetic
    const double ep1_direct = std::max((0.4 - 0.3) / 0.5, (0.6 - 0.5) / 0.5);
    const double ep2_direct = std::max((0.2 - 0.3) / 0.5, (0.2 - 0.3) / 0.5);
    const bool ok = hv == 0.3125 && std::abs(ig - std::sqrt(2.0) / 2.0) <= 1e-12 && ep1 == ep1_direct &&
                    ep2 == ep2_direct && ep3 == 0.0 && std::abs(ep1 - 0.2) <= 1e-15 && std::abs(ep2 + 0.2) <= 1e-15;
    detail = "HV=" + fmt("%.17g", hv) + " (exact 0.3125), IGD-sqrt2/2=" + fmt("%.2e", ig - std::sqrt(2.0) / 2.0) +
             " (tol 1e-12), EP=" + fmt("%.17g", ep1) + "/" + fmt("%.17g", ep2) + "/" + fmt("%g", ep3);
    return ok;
}

bool brute_force_equivalence(std::string& detail)
{
    Rng rng(2019);
    std::size_t sort_mismatch = 0;
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = 1 + rng.index(50), m = 2 + rng.index(4);
        std::vector<ObjectiveVector> pts(n, ObjectiveVector(m));
        for (auto& p : pts)
            for (double& v : p)
                v = t % 2 ? static_cast<double>(rng.index(4)) : rng.uniform();
        const auto fronts = fast_nondominated_sort(pts);
        std::vector<std::size_t> rank(n, n + 1);
        for (std::size_t f = 0; f < fronts.size(); ++f)
            for (std::size_t idx : fronts[f])
                rank[idx] = f;
        sort_mismatch += rank != brute_force_ranks(pts);
    }
    std::size_t cases = 0, p_mismatch = 0;
    for (int t = 0; cases < 500; ++t) {
        const std::size_t n = 5 + rng.index(6);
        Vec a(n), b(n);
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = t % 2 ? static_cast<double>(rng.index(5)) : rng.uniform();
            b[i] = t % 2 ? static_cast<double>(rng.index(5)) : rng.uniform();
        }
        std::size_t nonzero = 0;
        for (std::size_t i = 0; i < n; ++i)
            nonzero += a[i] != b[i];
        if (nonzero < 5)
            continue;
        ++cases;
        p_mismatch += std::abs(wilcoxon_signed_rank(a, b).p_value - wilcoxon_enumerated(a, b)) > 1e-15;
    }
    detail = "sort mismatches " + std::to_string(sort_mismatch) + "/200, Wilcoxon mismatches " +
             std::to_string(p_mismatch) + "/" + std::to_string(cases) + " (n<=10)";
    return sort_mismatch == 0 && p_mismatch == 0;
}

constexpr std::size_t kSeeds = 11;

AlgorithmSpec single_ref(AlgorithmKind kind, const Vec& z)
{
    AlgorithmSpec s;
    s.kind = kind;
    s.population_size = 100;
    s.reference_points = {ReferencePoint(z)};
    return s;
}

bool bad_reference_regressions(std::string& detail)
{
    const auto zdt1 = std::make_shared<Problem>(make_spec(Family::ZDT1));
    Vec spread, on_pf_fraction;
    const Vec z_on{0.5, 1.0 - std::sqrt(0.5)};
    for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
        const auto far = run(single_ref(AlgorithmKind::gNSGA2, {0.9, 0.9}), zdt1, 25000, seed);
        const auto nd = front0(far.final_population.objectives());
        double lo = 1e300, hi = -1e300;
        for (const auto& f : nd) {
            lo = std::min(lo, f[0]);
            hi = std::max(hi, f[0]);
        }
        spread.push_back((hi - lo) / 1.0);  // the ZDT1 front spans f1 in [0, 1]

        const auto on = run(single_ref(AlgorithmKind::gNSGA2, z_on), zdt1, 25000, seed);
        std::size_t flagged = 0, close = 0;
        for (const auto& f : on.final_population.objectives())
            if (g_flag(f, z_on) == 1) {
                ++flagged;
                close += std::max(std::abs(f[0] - z_on[0]), std::abs(f[1] - z_on[1])) <= 0.05;
            }
        on_pf_fraction.push_back(flagged ? static_cast<double>(close) / static_cast<double>(flagged) : 0.0);
    }
    const double s = median(spread), frac = median(on_pf_fraction);
    detail = "median f1 spread " + fmt("%.3f", s) + " (>= 0.8), median on-PF fraction within 0.05 " + fmt("%.3f", frac) +
             " (>= 0.95)";
    return s >= 0.8 && frac >= 0.95;
}

bool preference_convergence(std::string& detail)
{
    const auto zdt1 = std::make_shared<Problem>(make_spec(Family::ZDT1));
    const Vec z{0.5, 1.0 - std::sqrt(0.5)};
    bool ok = true;
    for (auto kind : {AlgorithmKind::RNSGA2, AlgorithmKind::PBEA, AlgorithmKind::MOEAD_NUMS}) {
        Vec ep;
        for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
            const auto r = run(single_ref(kind, z), zdt1, 25000, seed);
            ep.push_back(ep_accuracy(r.final_population.objectives(), ReferencePoint(z)));
        }
        const double med = median(ep);
        ok = ok && med <= 0.02;
        detail += std::string(to_string(kind)) + " median EP " + fmt("%.4f", med) + ", ";
    }
    detail += "(<= 0.02); ";

    const auto& spec = zdt1->spec();
    const Vec pivot = simplex_projection(z, true_ideal(spec), true_nadir(spec));
    const auto base = das_dennis(2, 99);
    const auto narrow = nums_transform(base, pivot, 0.1, 2.0);
    const auto wide = nums_transform(base, pivot, 0.4, 2.0);
    const bool has_pivot = std::find(narrow.vectors.begin(), narrow.vectors.end(), pivot) != narrow.vectors.end() &&
                           std::find(wide.vectors.begin(), wide.vectors.end(), pivot) != wide.vectors.end();
    auto mean_distance = [&](const WeightSet& ws) {
        double s = 0.0;
        for (const auto& w : ws.vectors)
            s += euclidean(w, pivot);
        return s / static_cast<double>(ws.size());
    };
    const double dn = mean_distance(narrow), dw = mean_distance(wide);
    detail += std::string("NUMS pivot ") + (has_pivot ? "present" : "MISSING") + ", mean pivot distance tau 0.1 " +
              fmt("%.4f", dn) + " < tau 0.4 " + fmt("%.4f", dw);
    return ok && has_pivot && dn < dw;
}

bool whole_front_mode(std::string& detail)
{
    const auto spec = make_spec(Family::DTLZ2, 3);
    const auto dtlz2 = std::make_shared<Problem>(spec);
    const auto samples = sample_true_front(spec, 1000);
    std::vector<ReferencePoint> refs;
    for (const auto& w : das_dennis(3, 12).vectors)
        refs.emplace_back(w);  // ideal (0,0,0) + w * range (1,1,1)
    AlgorithmSpec r;
    r.kind = AlgorithmKind::RNSGA2;
    r.population_size = 92;
    r.reference_points = refs;
    AlgorithmSpec n3;
    n3.kind = AlgorithmKind::NSGA3;
    n3.population_size = 92;
    Vec ir, in;
    for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
        ir.push_back(igd(front0(run(r, dtlz2, 30000, seed).final_population.objectives()), samples));
        in.push_back(igd(front0(run(n3, dtlz2, 30000, seed).final_population.objectives()), samples));
    }
    const double mr = median(ir), mn = median(in);
    detail = "median IGD R-NSGA-II(91 refs) " + fmt("%.4f", mr) + " vs NSGA-III " + fmt("%.4f", mn) + ", ratio " +
             fmt("%.3f", mr / mn) + " (<= 2)";
    return mr <= 2.0 * mn;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

json steering_config(const std::string& kind)
{
    return {{"problem", {{"family", "PORTFOLIO_MVS"}, {"synthetic", {{"assets", 20}, {"periods", 250}, {"seed", 1}}}}},
            {"algorithm", {{"kind", kind}}},
            {"seed", 7},
            {"z", {-0.08, 2, -2}}};
}

const std::vector<Vec> kScript{{-0.75, 3, -0.85}, {-0.07, 3, -1.15}, {-0.07, 3, -1.15}};

bool determinism(std::string& detail)
{
    const auto zdt1 = std::make_shared<Problem>(make_spec(Family::ZDT1));
    std::size_t run_mismatch = 0;
    for (auto kind : {AlgorithmKind::NSGA3, AlgorithmKind::IBEA, AlgorithmKind::MOEAD, AlgorithmKind::RNSGA2,
                      AlgorithmKind::rNSGA2, AlgorithmKind::gNSGA2, AlgorithmKind::PBEA, AlgorithmKind::RMEAD2,
                      AlgorithmKind::MOEAD_NUMS}) {
        AlgorithmSpec s = single_ref(kind, {0.3, 0.6});
        if (!is_preference_kind(kind))
            s.reference_points.clear();
        run_mismatch += !run(s, zdt1, 5000, 3).same_outcome(run(s, zdt1, 5000, 3));
    }

    const json cfg_json = json::parse(R"({
        "schema_version": 1,
        "problems": [{"family": "ZDT1"}, {"family": "DTLZ2", "m": 3}],
        "algorithms": [{"kind": "NSGA-III", "population_size": 40}, {"kind": "PBEA", "population_size": 40},
                       {"kind": "MOEA/D-NUMS", "population_size": 40}, {"kind": "R-NSGA-II", "population_size": 40}],
        "scenarios": [{"label": "on_pf", "ray": [1, 1], "m": 2}, {"label": "on_pf3", "ray": [1, 1, 1], "m": 3},
                      {"label": "whole", "whole_front": 15, "m": 3}],
        "replications": 3,
        "budget": 2000
    })");
    const auto cfg = parse_config(cfg_json);
    const auto tag = std::to_string(::getpid());
    const auto a = fs::temp_directory_path() / ("prefemo_accept_a_" + tag);
    const auto b = fs::temp_directory_path() / ("prefemo_accept_b_" + tag);
    fs::remove_all(a);
    fs::remove_all(b);
    {
        ResultStore sa(a, cfg), sb(b, cfg);
        run_experiment(cfg, sa);
        RunOptions two;
        two.jobs = 2;
        run_experiment(cfg, sb, two);
    }
    const std::string ma = slurp(a / "metrics.json"), mb = slurp(b / "metrics.json");
    const bool files_equal = !ma.empty() && ma == mb;
    fs::remove_all(a);
    fs::remove_all(b);

    const auto session_cfg = parse_session_config(steering_config("MOEA/D-NUMS"));
    const auto first = run_scripted(session_cfg, kScript);
    const auto again = replay_journal(first.journal);
    const bool replay_equal = again.journal == first.journal && again.final_population == first.final_population;

    detail = "run mismatches " + std::to_string(run_mismatch) + "/9, metrics.json " +
             (files_equal ? "identical" : "DIFFERENT") + " (jobs 1 vs 2), session replay " +
             (replay_equal ? "identical" : "DIFFERENT") + " (" + std::to_string(first.journal.size()) + " journal lines)";
    return run_mismatch == 0 && files_equal && replay_equal;
}

bool portfolio_moments(std::string& detail)
{
    AssetHistory h;
    h.asset_ids = {"A", "B"};
    h.returns = {{0.1, 0.0}, {0.2, 0.1}, {0.0, 0.2}};
    h.turnovers = {{0, 0}, {0, 0}, {0, 0}};
    const PortfolioWeights w{{0.5, 0.5}};
    const auto f = evaluate_portfolio(PortfolioModel::MVSKT, w, h);
    const double E = -f[0], V = f[1], S = -f[2], K = f[3];
    const double V_hand = 0.005 / 3.0, K_hand = 2.0 * std::pow(0.05, 4) / 3.0;
    auto rel = [](double got, double want) { return std::abs(got - want) / std::abs(want); };
    bool ok = rel(E, 0.1) <= 1e-9 && rel(V, V_hand) <= 1e-9 && std::abs(S) <= 1e-9 * std::pow(V_hand, 1.5) &&
              rel(K, K_hand) <= 1e-9;

    const auto hist = synthetic_asset_history(8, 60, 11);
    const PortfolioWeights pw = repair_to_simplex(Vec{0.2, 0.1, 0.05, 0.15, 0.1, 0.2, 0.1, 0.1});
    const auto base = evaluate_portfolio(PortfolioModel::MVSKT, pw, hist);
    double worst = 0.0;
    for (double c : {0.5, 2.0, -1.5, 3.7}) {
        AssetHistory scaled = hist;
        for (auto& row : scaled.returns)
            for (double& r : row)
                r *= c;
        const auto g = evaluate_portfolio(PortfolioModel::MVSKT, pw, scaled);
        for (int k = 0; k < 4; ++k)
            worst = std::max(worst, rel(g[static_cast<std::size_t>(k)], base[static_cast<std::size_t>(k)] * std::pow(c, k + 1)));
    }
    ok = ok && worst <= 1e-9;
    detail = "E=" + fmt("%.10g", E) + " V=" + fmt("%.10g", V) + " S=" + fmt("%.3g", S) + " K=" + fmt("%.10g", K) +
             ", worst scale-law relative error " + fmt("%.2e", worst) + " (tol 1e-9)";
    return ok;
}

bool scripted_session(std::string& detail)
{
    bool ok = true;
    for (const std::string kind : {"MOEA/D-NUMS", "R-NSGA-II"}) {
        const auto cfg = parse_session_config(steering_config(kind));
        Session s("accept", cfg);
        std::size_t pauses = 0, next = 0;
        std::vector<std::size_t> pause_gens;
        while (true) {
            const Snapshot snap = s.advance();
            if (snap.phase == Phase::Finished)
                break;
            ++pauses;
            pause_gens.push_back(snap.generation);
            s.elicit(kScript[std::min(next++, kScript.size() - 1)]);
        }
        const auto history = s.history();
        bool boundaries = history.size() == pause_gens.size();
        for (std::size_t k = 0; boundaries && k < history.size(); ++k)
            boundaries = history[k].generation == pause_gens[k] && history[k].zr.z == kScript[k];

        // recompute every per-generation R-HV against the point active in its segment
        const InstanceFrame frame = make_frame(cfg.problem, 100);
        const auto snaps = s.snapshots_since(0, std::chrono::milliseconds(0));
        std::size_t segment_errors = 0;
        for (const auto& snap : snaps) {
            ReferencePoint active = *cfg.initial;
            std::size_t index = 0;
            for (const auto& e : history)
                if (e.generation < snap.generation) {
                    active = e.zr;
                    ++index;
                }
            const RMetricFrame rf{active, frame.worst, frame.range, 0.2};
            const double expected = r_hv(front0(snap.objectives), rf);
            segment_errors += !(snap.zr && snap.zr->z == active.z && snap.zr_index == index &&
                                snap.metrics.at("R_HV") == expected);
        }
        std::size_t trajectory_errors = 0;
        for (const auto& t : s.trajectory()) {
            std::size_t index = 0;
            for (const auto& e : history)
                index += e.generation < t.generation;
            trajectory_errors += t.zr_index != index;
        }
        const std::size_t N = Engine(cfg.algorithm, cfg.problem.make_problem(), 1).population_size();
        const bool this_ok = cfg.budget == 5520 && pauses == 3 && boundaries && segment_errors == 0 &&
                             trajectory_errors == 0 && snaps.back().evaluations <= 5520;
        ok = ok && this_ok;
        std::string gens;
        for (auto g : pause_gens)
            gens += (gens.empty() ? "" : ",") + std::to_string(g);
        detail += kind + " N=" + std::to_string(N) + " pauses " + std::to_string(pauses) + " at {" + gens +
                  "}, segment errors " + std::to_string(segment_errors + trajectory_errors) + "; ";
    }
    return ok;
}

}  // namespace

int main()
{
    std::printf("prefemo acceptance suite\n");
    criterion("metric-oracles", metric_oracles);
    criterion("brute-force-equivalence", brute_force_equivalence);
    criterion("zdt1-bad-reference-regressions", bad_reference_regressions);
    criterion("preference-convergence", preference_convergence);
    criterion("whole-front-mode", whole_front_mode);
    criterion("determinism", determinism);
    criterion("portfolio-moments", portfolio_moments);
    criterion("scripted-interactive-session", scripted_session);
    std::printf("%d criterion(s) failed\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
