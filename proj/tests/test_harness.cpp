#include <prefemo/harness.hpp>

#include <gtest/gtest.h>

#include <unistd.h>

using namespace prefemo;

namespace {

fs::path fresh_dir(const std::string& name)
{
    const auto dir = fs::temp_directory_path() / ("prefemo_" + name + "_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

json small_config()
{
    return json::parse(R"({
        "schema_version": 1,
        "problems": [{"family": "ZDT1", "n": 10}],
        "algorithms": [{"kind": "NSGA-III", "population_size": 20},
                       {"kind": "R-NSGA-II", "population_size": 20}],
        "scenarios": [{"label": "mid", "z": [0.5, 0.3]}],
        "replications": 3,
        "budget": 400
    })");
}

json wider_config()
{
    return json::parse(R"({
        "schema_version": 1,
        "problems": [{"family": "ZDT1", "n": 10}, {"family": "DTLZ2", "m": 3, "n": 8}],
        "algorithms": [{"kind": "NSGA-III", "population_size": 20},
                       {"kind": "MOEA/D", "population_size": 21},
                       {"kind": "g-NSGA-II", "population_size": 20},
                       {"kind": "PBEA", "population_size": 20}],
        "scenarios": [{"label": "on_pf", "ray": [1, 1], "offset": 0.0, "m": 2},
                      {"label": "feasible", "ray": [1, 1], "offset": 0.1, "m": 2},
                      {"label": "on_pf3", "ray": [1, 2, 1], "offset": 0.0, "m": 3},
                      {"label": "dom", "z": [-0.2, -0.2, -0.2], "m": 3}],
        "replications": 2,
        "budget": 300
    })");
}

std::map<std::string, RunRecord> without_timing(std::map<std::string, RunRecord> records)
{
    for (auto& [key, r] : records)
        r.wall_clock_seconds = 0.0;
    return records;
}

}  // namespace

TEST(RunExperiment, CardinalityOfResultKeys)
{
    const auto dir = fresh_dir("cardinality");
    const auto cfg = parse_config(small_config());
    ResultStore store(dir, cfg);
    const auto outcome = run_experiment(cfg, store);
    EXPECT_EQ(outcome.planned, 6u);
    EXPECT_EQ(outcome.executed, 6u);
    EXPECT_EQ(outcome.failed, 0u);
    EXPECT_EQ(store.records().size(), 6u);
    for (const auto& [key, r] : store.records()) {
        EXPECT_TRUE(r.ok) << key << ": " << r.error;
        EXPECT_LE(r.evaluations, 400u);
        EXPECT_TRUE(r.metrics.count("EP")) << key;
        EXPECT_TRUE(r.metrics.count("R_HV")) << key;
    }
    fs::remove_all(dir);
}

TEST(RunExperiment, ResumeOnCompleteStoreDoesNoWork)
{
    const auto dir = fresh_dir("resume");
    const auto cfg = parse_config(small_config());
    {
        ResultStore store(dir, cfg);
        run_experiment(cfg, store);
    }
    const auto journal = slurp(dir / "records.jsonl");
    ResultStore again(dir, cfg);
    const auto outcome = run_experiment(cfg, again);
    EXPECT_EQ(outcome.executed, 0u);
    EXPECT_EQ(outcome.skipped, 6u);
    EXPECT_EQ(slurp(dir / "records.jsonl"), journal);
    fs::remove_all(dir);
}

TEST(RunExperiment, PartialStoreResumesOnlyMissingKeys)
{
    const auto dir = fresh_dir("partial");
    const auto cfg = parse_config(small_config());
    {
        ResultStore store(dir, cfg);
        run_experiment(cfg, store);
    }
    // drop the last two journal lines and a torn fragment of a third
    std::vector<std::string> lines;
    {
        std::ifstream in(dir / "records.jsonl");
        for (std::string line; std::getline(in, line);)
            lines.push_back(line);
    }
    {
        std::ofstream out(dir / "records.jsonl", std::ios::trunc);
        for (std::size_t k = 0; k + 2 < lines.size(); ++k)
            out << lines[k] << '\n';
        out << lines.back().substr(0, 20);
    }
    ResultStore store(dir, cfg);
    EXPECT_EQ(store.records().size(), 4u);
    const auto outcome = run_experiment(cfg, store);
    EXPECT_EQ(outcome.executed, 2u);
    EXPECT_EQ(ResultStore::open(dir).records().size(), 6u);
    fs::remove_all(dir);
}

TEST(RunExperiment, MetricFilesAreBitIdenticalAcrossRuns)
{
    const auto a = fresh_dir("det_a"), b = fresh_dir("det_b");
    const auto cfg = parse_config(wider_config());
    ResultStore sa(a, cfg), sb(b, cfg);
    run_experiment(cfg, sa);
    run_experiment(cfg, sb);
    EXPECT_EQ(slurp(a / "metrics.json"), slurp(b / "metrics.json"));
    EXPECT_FALSE(slurp(a / "metrics.json").empty());
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST(RunExperiment, SeedIsolationUnderJobsAndOrder)
{
    const auto a = fresh_dir("iso_a"), b = fresh_dir("iso_b"), c = fresh_dir("iso_c");
    const auto cfg = parse_config(wider_config());
    ResultStore sa(a, cfg), sb(b, cfg);
    run_experiment(cfg, sa);
    RunOptions two;
    two.jobs = 2;
    run_experiment(cfg, sb, two);
    EXPECT_EQ(without_timing(sa.records()), without_timing(sb.records()));

    // same runs, algorithms and problems listed in reverse
    json reversed = wider_config();
    std::reverse(reversed["algorithms"].begin(), reversed["algorithms"].end());
    std::reverse(reversed["problems"].begin(), reversed["problems"].end());
    const auto rcfg = parse_config(reversed);
    ResultStore sc(c, rcfg);
    run_experiment(rcfg, sc);
    EXPECT_EQ(without_timing(sa.records()), without_timing(sc.records()));
    for (const auto& d : {a, b, c})
        fs::remove_all(d);
}

TEST(RunExperiment, BaselinesAreSharedAndMultiReferenceScenariosFiltered)
{
    const auto dir = fresh_dir("shared");
    json j = wider_config();
    j["scenarios"].push_back({{"label", "whole"}, {"whole_front", 10}, {"family", "DTLZ2"}});
    const auto cfg = parse_config(j);
    ResultStore store(dir, cfg);
    run_experiment(cfg, store);
    const auto& rec = store.records();
    // a baseline run is scored per scenario but optimizes once
    const auto& on_pf = rec.at(run_key("ZDT1", "NSGA-III", "on_pf", 1));
    const auto& feasible = rec.at(run_key("ZDT1", "NSGA-III", "feasible", 1));
    EXPECT_EQ(on_pf.objectives, feasible.objectives);
    // g-NSGA-II takes a single reference point only
    EXPECT_EQ(rec.count(run_key("DTLZ2-m3", "g-NSGA-II", "whole", 1)), 0u);
    EXPECT_EQ(rec.count(run_key("DTLZ2-m3", "PBEA", "whole", 1)), 1u);
    EXPECT_EQ(rec.at(run_key("DTLZ2-m3", "PBEA", "whole", 1)).metrics.count("EP"), 0u);
    // explicit 3-objective point never applies to ZDT1
    EXPECT_EQ(rec.count(run_key("ZDT1", "PBEA", "dom", 1)), 0u);
    fs::remove_all(dir);
}

TEST(ResultStore, RecordRoundTripIsLossless)
{
    RunRecord r;
    r.problem = "ZDT1";
    r.algorithm = "PBEA";
    r.scenario = "mid";
    r.seed = 17;
    r.evaluations = 25000;
    r.generations = 249;
    r.metrics = {{"EP", -0.1234567890123456789}, {"R_IGD", std::numeric_limits<double>::infinity()},
                 {"HV", 0.1 + 0.2}};
    r.objectives = {{0.1, 0.9}, {1.0 / 3.0, 2.0 / 3.0}};
    r.wall_clock_seconds = 1.5;
    const RunRecord back = record_from_json(json::parse(record_to_json(r).dump()));
    EXPECT_EQ(back, r);

    RunRecord failed = r;
    failed.ok = false;
    failed.error = "evaluation diverged";
    failed.metrics.clear();
    EXPECT_EQ(record_from_json(json::parse(record_to_json(failed).dump())), failed);
}

TEST(ResultStore, RefusesADifferentConfig)
{
    const auto dir = fresh_dir("mismatch");
    { ResultStore store(dir, parse_config(small_config())); }
    json other = small_config();
    other["budget"] = 800;
    EXPECT_THROW(ResultStore(dir, parse_config(other)), ValidationError);
    EXPECT_NO_THROW(ResultStore::open(dir));
    fs::remove_all(dir);
}

TEST(Summarize, MatchesIndependentQuantileComputation)
{
    const auto dir = fresh_dir("summary");
    json j = small_config();
    j["algorithms"] = json::parse(R"([{"kind": "NSGA-III", "label": "A"}, {"kind": "NSGA-III", "label": "B"}])");
    j["replications"] = 31;
    const auto cfg = parse_config(j);
    ResultStore store(dir, cfg);
    for (std::uint64_t k = 0; k < 31; ++k) {
        const double a = static_cast<double>((k * 37) % 31) / 10.0 + 0.013 * static_cast<double>(k);
        const double b = a + 0.3 + 0.01 * static_cast<double>((k * 7) % 5);
        for (const auto& [label, v] : {std::pair{"A", a}, std::pair{"B", b}}) {
            RunRecord r;
            r.problem = "ZDT1";
            r.algorithm = label;
            r.scenario = "mid";
            r.seed = 1 + k;
            r.metrics = {{"EP", v}};
            store.append(r);
        }
    }
    const Summary s = summarize(store, MetricId::EP);
    ASSERT_EQ(s.cells.size(), 1u);
    const auto& rows = s.cells[0].rows;
    ASSERT_EQ(rows.size(), 2u);
    // numpy.quantile(method="weibull") on the same values
    EXPECT_NEAR(*rows[0].median, 1.734, 1e-12);
    EXPECT_NEAR(*rows[0].iqr, 1.366, 1e-12);
    EXPECT_NEAR(*rows[1].median, 2.044, 1e-12);
    EXPECT_NEAR(*rows[1].iqr, 1.356, 1e-12);
    EXPECT_TRUE(rows[0].best);
    ASSERT_TRUE(rows[1].vs_best.has_value());
    EXPECT_TRUE(rows[1].vs_best->significant);
    EXPECT_EQ(rows[1].ok, 31u);
    EXPECT_TRUE(summary_to_json(s).contains("quantile_convention"));
    fs::remove_all(dir);
}

TEST(Summarize, IdenticalAlgorithmsAreNotSignificant)
{
    const auto dir = fresh_dir("identical");
    json j = small_config();
    j["algorithms"] = json::parse(
        R"([{"kind": "PBEA", "label": "A", "population_size": 20}, {"kind": "PBEA", "label": "B", "population_size": 20}])");
    j["replications"] = 6;
    const auto cfg = parse_config(j);
    ResultStore store(dir, cfg);
    run_experiment(cfg, store);
    for (auto metric : {MetricId::EP, MetricId::HV, MetricId::R_HV}) {
        const Summary s = summarize(store, metric);
        for (const auto& c : s.cells)
            for (const auto& r : c.rows) {
                if (r.vs_best) {
                    EXPECT_FALSE(r.vs_best->significant);
                }
                EXPECT_EQ(r.ok, 6u);
            }
        EXPECT_EQ(*s.cells[0].rows[0].median, *s.cells[0].rows[1].median);
    }
    fs::remove_all(dir);
}

TEST(Summarize, FailedRunsAreCountedNotImputedAndGapsListed)
{
    const auto dir = fresh_dir("gaps");
    json j = small_config();
    j["algorithms"] = json::parse(R"([{"kind": "NSGA-III", "label": "A"}, {"kind": "NSGA-III", "label": "B"}])");
    j["replications"] = 5;
    const auto cfg = parse_config(j);
    ResultStore store(dir, cfg);
    for (std::uint64_t k = 1; k <= 5; ++k) {
        RunRecord r;
        r.problem = "ZDT1";
        r.algorithm = "A";
        r.scenario = "mid";
        r.seed = k;
        r.ok = k != 3;
        r.error = r.ok ? "" : "boom";
        if (r.ok)
            r.metrics = {{"EP", static_cast<double>(k)}};
        store.append(r);
    }
    const Summary s = summarize(store, MetricId::EP);
    ASSERT_EQ(s.cells.size(), 1u);
    EXPECT_FALSE(s.cells[0].complete);
    EXPECT_EQ(s.cells[0].rows[0].failed, 1u);
    EXPECT_EQ(s.cells[0].rows[0].ok, 4u);
    EXPECT_EQ(*s.cells[0].rows[0].median, 3.0);
    EXPECT_FALSE(s.cells[0].rows[1].median.has_value());
    EXPECT_EQ(s.incomplete.size(), 1u);
    EXPECT_THROW(build_heatmap(store, MetricId::EP), IncompleteStore);
    fs::remove_all(dir);
}

TEST(Heatmap, ComposesRankTableAndCountsRanks)
{
    const auto dir = fresh_dir("heatmap");
    json j = small_config();
    j["algorithms"] = json::parse(
        R"([{"kind": "NSGA-III", "label": "A"}, {"kind": "NSGA-III", "label": "B"}, {"kind": "NSGA-III", "label": "C"}])");
    j["scenarios"] = json::parse(R"([{"label": "s1", "z": [0.5, 0.3]}, {"label": "s2", "z": [0.2, 0.6]}])");
    j["replications"] = 1;
    const auto cfg = parse_config(j);
    ResultStore store(dir, cfg);
    const std::map<std::string, std::map<std::string, double>> values{
        {"s1", {{"A", 0.1}, {"B", 0.2}, {"C", 0.3}}}, {"s2", {{"A", 0.5}, {"B", 0.4}, {"C", 0.5}}}};
    for (const auto& [s, row] : values)
        for (const auto& [a, v] : row) {
            RunRecord r;
            r.problem = "ZDT1";
            r.algorithm = a;
            r.scenario = s;
            r.seed = 1;
            r.metrics = {{"EP", v}};
            store.append(r);
        }
    const Heatmap h = build_heatmap(store, MetricId::EP);
    ASSERT_EQ(h.ranks.size(), 2u);
    EXPECT_EQ(h.ranks[0], (std::vector<int>{1, 2, 3}));
    EXPECT_EQ(h.ranks[1], (std::vector<int>{2, 1, 2}));
    EXPECT_EQ(h.ranks[0], rank_table({{0.1, 0.2, 0.3}}, Orientation::Minimize).front());
    for (const auto& row : h.frequency) {
        std::size_t total = 0;
        for (std::size_t c : row)
            total += c;
        EXPECT_EQ(total, h.instances.size());
    }
    EXPECT_EQ(h.frequency[0][0], 1u);  // A first once
    EXPECT_EQ(h.frequency[1][0], 1u);  // B first once

    const auto files = export_heatmap(store, MetricId::EP, dir / "out" / "ep.csv");
    ASSERT_EQ(files.size(), 3u);
    for (const auto& f : files)
        EXPECT_TRUE(fs::exists(f)) << f;
    EXPECT_NE(slurp(files[0]).find("schema_version"), std::string::npos);
    EXPECT_EQ(json::parse(slurp(files[2]))["rank_matrix"], json(h.ranks));
    fs::remove_all(dir);
}

TEST(Heatmap, RanksHaveNoGapsExceptAfterTies)
{
    Rng rng(3);
    for (int t = 0; t < 200; ++t) {
        Vec v(6);
        for (double& x : v)
            x = static_cast<double>(rng.index(4));
        auto ranks = rank_table({v}, Orientation::Minimize).front();
        std::sort(ranks.begin(), ranks.end());
        EXPECT_EQ(ranks.front(), 1);
        for (std::size_t k = 1; k < ranks.size(); ++k)
            if (ranks[k] != ranks[k - 1]) {
                EXPECT_EQ(ranks[k], static_cast<int>(k) + 1);
            }
    }
}

TEST(ParseConfig, ItemizesEveryProblem)
{
    const json bad = json::parse(R"({
        "schema_version": 1,
        "problems": [{"family": "ZDT9"}, {"family": "DTLZ2", "m": 1}],
        "algorithms": [{"kind": "SPEA2"}, {"kind": "PBEA", "sigma": 0.1}],
        "scenarios": [{"label": "x", "z": [0.1, 0.2, 0.3], "family": "ZDT1"}, {"z": [1, 2]}],
        "replications": 0
    })");
    try {
        parse_config(bad);
        FAIL() << "expected ValidationError";
    } catch (const ValidationError& e) {
        EXPECT_GE(e.items().size(), 5u);
        const auto has = [&](const std::string& needle) {
            return std::any_of(e.items().begin(), e.items().end(),
                               [&](const std::string& s) { return s.find(needle) != std::string::npos; });
        };
        EXPECT_TRUE(has("ZDT9"));
        EXPECT_TRUE(has("SPEA2"));
        EXPECT_TRUE(has("sigma"));
        EXPECT_TRUE(has("label"));
        EXPECT_TRUE(has("replications"));
    }
}

TEST(ParseConfig, ScenarioDimensionMustMatch)
{
    json j = small_config();
    j["scenarios"][0]["z"] = {0.1, 0.2, 0.3};
    EXPECT_THROW(parse_config(j), ValidationError);
    j = small_config();
    j["budget"] = 10;
    EXPECT_THROW(parse_config(j), ValidationError);
    j = small_config();
    j["schema_version"] = 2;
    EXPECT_THROW(parse_config(j), ValidationError);
}

TEST(Presets, BadReferencePair)
{
    const auto cfg = parse_config(load_preset("zdt1-bad-refs"));
    ASSERT_EQ(cfg.scenarios.size(), 2u);
    EXPECT_EQ(cfg.scenarios[0].z, (Vec{0.1, 0.1}));
    EXPECT_EQ(cfg.scenarios[1].z, (Vec{0.9, 0.9}));
    EXPECT_EQ(cfg.algorithms.size(), 9u);
}

TEST(Presets, DominatingPoint)
{
    const auto cfg = parse_config(load_preset("dtlz2-dominating"));
    ASSERT_EQ(cfg.scenarios.size(), 1u);
    EXPECT_EQ(cfg.scenarios[0].z, (Vec{-0.2, -0.2, -0.2}));
    EXPECT_EQ(cfg.problems[0].spec.family, Family::DTLZ2);
}

TEST(Presets, MassiveLadder)
{
    const auto cfg = parse_config(load_preset("massive"));
    std::set<std::size_t> ms;
    std::set<Family> families;
    for (const auto& p : cfg.problems) {
        ms.insert(p.spec.m);
        families.insert(p.spec.family);
    }
    EXPECT_EQ(ms, (std::set<std::size_t>{3, 5, 8, 10, 15, 25, 50, 100}));
    EXPECT_EQ(families, (std::set<Family>{Family::DTLZ1, Family::DTLZ2, Family::DTLZ3, Family::DTLZ4}));
}

TEST(Presets, EveryPresetParses)
{
    const auto all = scenario_presets();
    EXPECT_GE(all.size(), 8u);
    for (const auto& p : all)
        EXPECT_NO_THROW(parse_config(load_preset(p.name), p.path.parent_path())) << p.name;
    EXPECT_THROW(load_preset("no-such-preset"), std::runtime_error);
}

TEST(Scenarios, RayPointsSitOnTheFront)
{
    const auto cfg = parse_config(wider_config());
    for (const auto& p : cfg.problems) {
        const auto frame = make_frame(p, 500);
        for (const auto& s : cfg.scenarios) {
            const auto refs = scenario_references(s, p, frame);
            if (s.label == "on_pf" || s.label == "on_pf3") {
                EXPECT_EQ(refs.has_value(), (s.label == "on_pf") == (p.spec.m == 2));
            }
            if (refs && (s.label == "on_pf" || s.label == "on_pf3")) {
                const Vec& z = refs->front().z;
                if (p.spec.family == Family::ZDT1)
                    EXPECT_NEAR(z[1], 1.0 - std::sqrt(z[0]), 1e-3);
                else
                    EXPECT_NEAR(z[0] * z[0] + z[1] * z[1] + z[2] * z[2], 1.0, 1e-12);
            }
            if (s.label == "dom") {
                EXPECT_EQ(refs.has_value(), p.spec.m == 3);
            }
        }
    }
}

TEST(NumberEncoding, NonFiniteRoundTrips)
{
    for (double v : {std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(), 0.25})
        EXPECT_EQ(detail::number_from_json(detail::number_to_json(v)), v);
    EXPECT_TRUE(std::isnan(detail::number_from_json(detail::number_to_json(std::nan("")))));
}
