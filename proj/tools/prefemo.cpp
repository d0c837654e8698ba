// prefemo command line: batch experiments, summaries, heatmaps, presets,
// the steering server and headless scripted sessions.
//
// Exit codes: 0 success, 1 unexpected error, 2 invalid input, 3 some runs
// failed, 4 replay mismatch.

#include <prefemo/server.hpp>

#include <CLI11.hpp>

#include <csignal>
#include <iostream>

using namespace prefemo;

namespace {

constexpr int kExitError = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitRunFailed = 3;
constexpr int kExitMismatch = 4;

int report(const ValidationError& e)
{
    std::cerr << "error: invalid input\n";
    for (const auto& item : e.items())
        std::cerr << "  - " << item << '\n';
    return kExitInvalid;
}

MetricId parse_metric(const std::string& s)
{
    const auto id = metric_from_string(s);
    if (!id)
        throw ValidationError({"unknown metric '" + s + "' (expected EP, IGD, HV, R_IGD or R_HV)"});
    return *id;
}

json read_json(const fs::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ValidationError({"cannot open " + path.string()});
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError({path.string() + ": " + e.what()});
    }
}

int cmd_run(const std::string& config_path, const std::string& preset, std::string store_dir, std::size_t jobs,
            bool resume, bool quiet)
{
    json source;
    fs::path base = ".";
    if (!preset.empty()) {
        source = load_preset(preset);
    } else {
        source = read_json(config_path);
        base = fs::path(config_path).parent_path();
    }
    const ExperimentConfig cfg = parse_config(source, base);
    if (store_dir.empty())
        store_dir = cfg.output;
    if (store_dir.empty())
        throw ValidationError({"no store directory: set 'output' in the config or pass --store"});
    ResultStore store(store_dir, cfg);
    if (!resume && !store.empty())
        throw ValidationError({"store " + store_dir + " already holds runs; pass --resume to continue it"});

    std::mutex print;
    RunOptions opt;
    opt.jobs = jobs;
    if (!quiet)
        opt.on_record = [&](const RunRecord& r) {
            std::lock_guard lock(print);
            std::cerr << (r.ok ? "ok     " : "FAILED ") << r.key();
            if (!r.ok)
                std::cerr << "  " << r.error;
            std::cerr << '\n';
        };
    const auto outcome = run_experiment(cfg, store, opt);
    std::cout << "planned " << outcome.planned << ", executed " << outcome.executed << ", skipped "
              << outcome.skipped << ", failed " << outcome.failed << "\nstore " << store.dir().string() << '\n';
    return outcome.failed > 0 ? kExitRunFailed : 0;
}

int cmd_summarize(const std::string& store_dir, const std::string& metric, bool as_json)
{
    const auto store = ResultStore::open(store_dir);
    const Summary s = summarize(store, parse_metric(metric));
    if (as_json)
        std::cout << summary_to_json(s).dump(2) << '\n';
    else
        std::cout << summary_to_text(s);
    return 0;
}

int cmd_heatmap(const std::string& store_dir, const std::string& metric, const std::string& out)
{
    const auto store = ResultStore::open(store_dir);
    try {
        for (const auto& path : export_heatmap(store, parse_metric(metric), out))
            std::cout << path.string() << '\n';
    } catch (const IncompleteStore& e) {
        std::cerr << "error: " << e.what() << '\n';
        for (const auto& gap : e.gaps())
            std::cerr << "  - " << gap << '\n';
        return kExitInvalid;
    }
    return 0;
}

int cmd_presets_list()
{
    for (const auto& p : scenario_presets())
        std::cout << p.name << "\t" << p.description << '\n';
    return 0;
}

int cmd_presets_show(const std::string& name)
{
    std::cout << load_preset(name).dump(2) << '\n';
    return 0;
}

SteerServer* g_server = nullptr;

int cmd_serve(const std::string& host, int port, const std::string& journal_dir)
{
    SteerServer server(journal_dir);
    const int bound = server.bind(host, port);
    if (bound < 0) {
        std::cerr << "error: cannot bind " << host << ":" << port << '\n';
        return kExitError;
    }
    g_server = &server;
    std::signal(SIGINT, [](int) {
        if (g_server)
            g_server->stop();
    });
    std::cout << "listening on http://" << host << ":" << bound << std::endl;
    server.listen();
    g_server = nullptr;
    return 0;
}

int cmd_script(const std::string& path, const std::string& journal)
{
    const json doc = read_json(path);
    if (!doc.contains("session"))
        throw ValidationError({"script file needs a 'session' object"});
    const SessionConfig cfg = parse_session_config(doc["session"], fs::path(path).parent_path());
    std::vector<Vec> script;
    for (const auto& z : doc.value("script", json::array()))
        script.push_back(detail::vec_from_json(z));
    if (!journal.empty())
        fs::remove(journal);
    const auto out = run_scripted(cfg, script, journal);
    json pauses = json::array();
    for (const auto& s : out.pauses)
        pauses.push_back({{"generation", s.generation},
                          {"evaluations", s.evaluations},
                          {"phase", std::string(to_string(s.phase))},
                          {"metrics", s.metrics}});
    json hist = json::array();
    for (const auto& e : out.history)
        hist.push_back({{"generation", e.generation}, {"z", e.zr.z}});
    json traj = json::array();
    for (const auto& t : out.trajectory)
        traj.push_back({{"generation", t.generation}, {"zr_index", t.zr_index}, {"r_hv", t.r_hv}});
    std::cout << json{{"pauses", pauses}, {"elicitations", hist}, {"trajectory", traj}}.dump(2) << '\n';
    return 0;
}

int cmd_replay(const std::string& journal)
{
    const auto lines = read_journal(journal);
    const auto again = replay_journal(lines, fs::path(journal).parent_path());
    if (again.journal != lines) {
        std::size_t k = 0;
        while (k < lines.size() && k < again.journal.size() && lines[k] == again.journal[k])
            ++k;
        std::cerr << "replay differs from the journal at line " << k + 1 << '\n';
        return kExitMismatch;
    }
    std::cout << "replay identical (" << lines.size() << " journal lines)\n";
    return 0;
}

int cmd_synth(std::size_t assets, std::size_t periods, std::uint64_t seed, const std::string& returns,
              const std::string& turnovers)
{
    const auto hist = synthetic_asset_history(assets, periods, seed);
    write_matrix_csv(returns, hist.asset_ids, hist.returns);
    if (!turnovers.empty())
        write_matrix_csv(turnovers, hist.asset_ids, hist.turnovers);
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"prefemo: preference-based evolutionary multi-objective optimization"};
    app.require_subcommand(1);

    std::string config, preset, store, metric, out, journal, host = "127.0.0.1", name;
    std::string returns, turnovers;
    std::size_t jobs = 1, assets = 20, periods = 250;
    std::uint64_t seed = 1;
    int port = 8080;
    bool resume = false, quiet = false, as_json = false;

    auto* run = app.add_subcommand("run", "execute an experiment config into a result store");
    auto* run_src = run->add_option("--config", config, "experiment config (JSON)")->check(CLI::ExistingFile);
    run->add_option("--preset", preset, "run a bundled preset instead of a config file")->excludes(run_src);
    run->add_option("--store", store, "store directory (overrides the config's 'output')");
    run->add_option("--jobs", jobs, "parallel runs")->check(CLI::PositiveNumber);
    run->add_flag("--resume", resume, "continue a partially filled store");
    run->add_flag("--quiet", quiet, "no per-run progress lines");

    auto* sum = app.add_subcommand("summarize", "median/IQR table with Wilcoxon tests against the best");
    sum->add_option("--store", store)->required()->check(CLI::ExistingDirectory);
    sum->add_option("--metric", metric)->required();
    sum->add_flag("--json", as_json, "machine-readable output");

    auto* heat = app.add_subcommand("heatmap", "rank matrix and rank-frequency matrix (CSV and JSON)");
    heat->add_option("--store", store)->required()->check(CLI::ExistingDirectory);
    heat->add_option("--metric", metric)->required();
    heat->add_option("--out", out, "output base path")->required();

    auto* presets = app.add_subcommand("presets", "bundled scenario presets");
    presets->require_subcommand(1);
    auto* presets_list = presets->add_subcommand("list", "list presets");
    auto* presets_show = presets->add_subcommand("show", "print a preset config");
    presets_show->add_option("name", name)->required();

    auto* serve = app.add_subcommand("serve", "HTTP+JSON steering server");
    serve->add_option("--host", host);
    serve->add_option("--port", port, "0 picks a free port");
    serve->add_option("--journal-dir", journal, "write one journal per session here");

    auto* script = app.add_subcommand("script", "run a steering session headlessly from a script file");
    script->add_option("--config", config, "{\"session\": {...}, \"script\": [[z], ...]}")->required()->check(
        CLI::ExistingFile);
    script->add_option("--journal", journal, "session journal to write");

    auto* replay = app.add_subcommand("replay", "re-run a session journal and check it is identical");
    replay->add_option("--journal", journal)->required()->check(CLI::ExistingFile);

    auto* synth = app.add_subcommand("synth-assets", "write a synthetic asset history as CSV");
    synth->add_option("--assets", assets);
    synth->add_option("--periods", periods);
    synth->add_option("--seed", seed);
    synth->add_option("--returns", returns)->required();
    synth->add_option("--turnovers", turnovers);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInvalid;
    }

    try {
        if (*run) {
            if (config.empty() && preset.empty())
                throw ValidationError({"run needs --config or --preset"});
            return cmd_run(config, preset, store, jobs, resume, quiet);
        }
        if (*sum)
            return cmd_summarize(store, metric, as_json);
        if (*heat)
            return cmd_heatmap(store, metric, out);
        if (*presets_list)
            return cmd_presets_list();
        if (*presets_show)
            return cmd_presets_show(name);
        if (*serve)
            return cmd_serve(host, port, journal);
        if (*script)
            return cmd_script(config, journal);
        if (*replay)
            return cmd_replay(journal);
        if (*synth)
            return cmd_synth(assets, periods, seed, returns, turnovers);
    } catch (const ValidationError& e) {
        return report(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return 0;
}
