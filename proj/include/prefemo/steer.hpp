#pragma once

// Interactive steering sessions: run, pause at interaction points, take a
// revised reference point, resume. Each session owns one worker thread that
// executes commands from a bounded queue; callers only ever see complete
// snapshots.

#include <prefemo/harness.hpp>

#include <condition_variable>
#include <deque>
#include <future>
#include <variant>

namespace prefemo {

enum class Phase { Running, AwaitingPreference, Finished };

inline std::string_view to_string(Phase p)
{
    switch (p) {
    case Phase::Running:
        return "Running";
    case Phase::AwaitingPreference:
        return "AwaitingPreference";
    case Phase::Finished:
        return "Finished";
    }
    return "?";
}

/// A request that is invalid in the session's current phase or shape.
class ProtocolError : public std::runtime_error {
public:
    ProtocolError(Phase phase, const std::string& reason)
        : std::runtime_error(reason + " (phase " + std::string(to_string(phase)) + ")"), phase_(phase)
    {
    }
    Phase phase() const { return phase_; }

private:
    Phase phase_;
};

class NotFound : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kDefaultRepresentatives = 5;
inline constexpr double kRepresentativeRho = 1e-4;

/// Greedy farthest-point selection seeded with the augmented-ASF-best
/// member. Distances are Euclidean on objectives scaled to the population's
/// bounding box; ties go to the lower index. Returns indices in selection
/// order, or every index when k >= |pop|.
inline std::vector<std::size_t> representative_subset(std::span<const ObjectiveVector> pop, std::size_t k,
                                                       const ReferencePoint& zr)
{
    require(!pop.empty(), "representative_subset: empty population");
    require(k >= 1, "representative_subset: k must be at least 1");
    std::vector<std::size_t> out;
    if (k >= pop.size()) {
        out.resize(pop.size());
        std::iota(out.begin(), out.end(), std::size_t{0});
        return out;
    }
    const std::size_t m = pop.front().size();
    Vec lo(m, std::numeric_limits<double>::infinity()), hi(m, -std::numeric_limits<double>::infinity());
    for (const auto& f : pop)
        for (std::size_t i = 0; i < m; ++i) {
            lo[i] = std::min(lo[i], f[i]);
            hi[i] = std::max(hi[i], f[i]);
        }
    std::vector<ObjectiveVector> scaled;
    for (const auto& f : pop) {
        ObjectiveVector s(m);
        for (std::size_t i = 0; i < m; ++i)
            s[i] = hi[i] > lo[i] ? (f[i] - lo[i]) / (hi[i] - lo[i]) : 0.0;
        scaled.push_back(std::move(s));
    }
    std::size_t first = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < pop.size(); ++j) {
        const double v = augmented_asf(pop[j], zr.z, zr.weights, kRepresentativeRho);
        if (v < best) {
            best = v;
            first = j;
        }
    }
    out.push_back(first);
    Vec gap(pop.size(), std::numeric_limits<double>::infinity());
    std::vector<bool> taken(pop.size(), false);
    taken[first] = true;
    std::size_t last = first;
    while (out.size() < k) {
        std::size_t arg = pop.size();
        for (std::size_t j = 0; j < pop.size(); ++j) {
            if (taken[j])
                continue;
            gap[j] = std::min(gap[j], euclidean(scaled[j], scaled[last]));
            if (arg == pop.size() || gap[j] > gap[arg])
                arg = j;
        }
        taken[arg] = true;
        out.push_back(arg);
        last = arg;
    }
    return out;
}

// ------------------------------------------------------------------- config

struct SessionConfig {
    ProblemEntry problem;
    AlgorithmSpec algorithm;
    std::size_t budget = 0;
    std::size_t interaction_period = 0;  // generations; 0 picks a third of the run
    std::uint64_t seed = 1;
    std::optional<ReferencePoint> initial;
    std::size_t representatives = kDefaultRepresentatives;
    json source;
};

/// Budget and population defaults for portfolio sessions: 3 objectives get
/// 92 (91 for decomposition) and 5,520 evaluations, 5 objectives get 212
/// (210) and 12,720.
inline std::pair<std::size_t, std::size_t> portfolio_session_defaults(std::size_t m)
{
    if (m >= 5)
        return {212, 12720};
    return {92, 5520};
}

/// Reads {"problem": {...}, "algorithm": {...}, "budget", "interaction_period",
/// "seed", "z", "representatives"}. Problem and algorithm entries use the
/// experiment config format.
inline SessionConfig parse_session_config(const json& j, const fs::path& base_dir = ".")
{
    std::vector<std::string> errors;
    if (!j.is_object())
        throw ValidationError({"session config must be a JSON object"});
    static const std::set<std::string> known{"problem", "algorithm", "budget", "interaction_period",
                                             "seed",    "z",         "representatives"};
    for (const auto& [key, value] : j.items())
        if (!known.contains(key))
            errors.push_back("unknown field '" + key + "'");
    if (!j.contains("problem") || !j.contains("algorithm"))
        throw ValidationError({"'problem' and 'algorithm' are required"});

    // borrow the experiment parser for the problem and algorithm entries
    json algo = j["algorithm"];
    const bool portfolio = j["problem"].is_object() && j["problem"].contains("family") &&
                           j["problem"]["family"].is_string() &&
                           family_from_string(j["problem"]["family"].get<std::string>()).has_value() &&
                           is_portfolio(*family_from_string(j["problem"]["family"].get<std::string>()));
    const json probe = {{"schema_version", kSchemaVersion},
                        {"problems", json::array({j["problem"]})},
                        {"algorithms", json::array({algo})},
                        {"scenarios", json::array({{{"label", "session"}, {"whole_front", 2}}})},
                        {"budget", j.value("budget", std::size_t{1000000})}};
    ExperimentConfig exp;
    try {
        exp = parse_config(probe, base_dir);
    } catch (const ValidationError& e) {
        for (const auto& item : e.items())
            if (item.find("scenario") == std::string::npos)
                errors.push_back(item);
        throw ValidationError(errors.empty() ? std::vector<std::string>{e.what()} : errors);
    }
    SessionConfig cfg;
    cfg.source = j;
    cfg.problem = exp.problems.front();
    cfg.algorithm = exp.algorithms.front().for_problem(cfg.problem.spec);
    const std::size_t m = cfg.problem.spec.m;
    if (portfolio && !algo.contains("population_size"))
        cfg.algorithm.population_size = portfolio_session_defaults(m).first;
    if (j.contains("budget"))
        cfg.budget = j["budget"].get<std::size_t>();
    else if (portfolio)
        cfg.budget = portfolio_session_defaults(m).second;
    else
        errors.push_back("'budget' is required for benchmark problems");
    cfg.interaction_period = j.value("interaction_period", std::size_t{0});
    cfg.seed = j.value("seed", std::uint64_t{1});
    cfg.representatives = j.value("representatives", kDefaultRepresentatives);
    if (cfg.representatives < 1)
        errors.push_back("'representatives' must be at least 1");
    if (j.contains("z")) {
        const Vec z = detail::vec_from_json(j["z"]);
        if (z.size() != m || !all_finite(z))
            errors.push_back("'z' must have " + std::to_string(m) + " finite components");
        else
            cfg.initial = ReferencePoint(z);
    }
    if (is_preference_kind(cfg.algorithm.kind)) {
        if (!cfg.initial)
            errors.push_back("preference-based algorithms need an initial 'z'");
        else
            cfg.algorithm.reference_points = {*cfg.initial};
    }
    if (errors.empty()) {
        try {
            cfg.algorithm.validate(m);
            Engine probe_engine(cfg.algorithm, cfg.problem.make_problem(), cfg.seed);
            if (cfg.budget < probe_engine.population_size())
                errors.push_back("budget " + std::to_string(cfg.budget) + " is below the population size " +
                                 std::to_string(probe_engine.population_size()));
        } catch (const std::exception& e) {
            errors.push_back(e.what());
        }
    }
    if (!errors.empty())
        throw ValidationError(std::move(errors));
    return cfg;
}

// ---------------------------------------------------------------- snapshots

struct Elicitation {
    std::size_t generation = 0;
    ReferencePoint zr;
};

struct TrajectoryPoint {
    std::size_t generation = 0;
    std::size_t zr_index = 0;  // 0 = initial point, k = k-th elicitation
    double r_hv = 0.0;

    bool operator==(const TrajectoryPoint&) const = default;
};

/// An immutable view of one generation. Objectives are kept in minimization
/// orientation; to_json() converts them to the problem's native senses.
struct Snapshot {
    std::size_t generation = 0;
    std::size_t evaluations = 0;
    std::size_t budget = 0;
    Phase phase = Phase::Running;
    std::vector<ObjectiveVector> objectives;
    std::vector<std::size_t> representatives;
    std::map<std::string, double> metrics;
    std::optional<std::size_t> zr_index;
    std::optional<ReferencePoint> zr;
};

inline json snapshot_to_json(const Snapshot& s, const Problem& problem)
{
    json objs = json::array();
    for (const auto& f : s.objectives)
        objs.push_back(problem.to_native(f));
    json senses = json::array();
    for (Sense sense : problem.senses())
        senses.push_back(sense == Sense::Minimize ? "min" : "max");
    json metrics = json::object();
    for (const auto& [k, v] : s.metrics)
        metrics[k] = v;
    json j = {{"generation", s.generation},
              {"evaluations", s.evaluations},
              {"budget", s.budget},
              {"phase", std::string(to_string(s.phase))},
              {"sense", senses},
              {"objectives", objs},
              {"representatives", s.representatives},
              {"metrics", metrics}};
    if (s.zr) {
        j["zr"] = s.zr->z;
        j["zr_native"] = problem.to_native(s.zr->z);
        j["zr_index"] = *s.zr_index;
    }
    return j;
}

// ------------------------------------------------------------------ queue

/// Fixed-capacity FIFO. try_push never blocks; pop blocks until an item
/// arrives or the queue is closed.
template <class T>
class BoundedQueue {
public:
    explicit BoundedQueue(std::size_t capacity) : capacity_(capacity) {}

    bool try_push(T item)
    {
        {
            std::lock_guard lock(mutex_);
            if (closed_ || items_.size() >= capacity_)
                return false;
            items_.push_back(std::move(item));
        }
        cv_.notify_one();
        return true;
    }

    std::optional<T> pop()
    {
        std::unique_lock lock(mutex_);
        cv_.wait(lock, [&] { return closed_ || !items_.empty(); });
        if (items_.empty())
            return std::nullopt;
        T item = std::move(items_.front());
        items_.pop_front();
        return item;
    }

    void close()
    {
        {
            std::lock_guard lock(mutex_);
            closed_ = true;
        }
        cv_.notify_all();
    }

private:
    std::size_t capacity_;
    std::deque<T> items_;
    bool closed_ = false;
    std::mutex mutex_;
    std::condition_variable cv_;
};

// ------------------------------------------------------------------ session

class Session {
public:
    Session(std::string id, SessionConfig cfg, fs::path journal_file = {})
        : id_(std::move(id)), cfg_(std::move(cfg)), problem_(cfg_.problem.make_problem()),
          frame_(make_frame(cfg_.problem, 100)), engine_(cfg_.algorithm, problem_, cfg_.seed),
          journal_path_(std::move(journal_file)), queue_(4)
    {
        zr_ = cfg_.initial;
        const std::size_t N = engine_.population_size();
        total_generations_ = (cfg_.budget - N) / N;
        period_ = cfg_.interaction_period > 0 ? cfg_.interaction_period
                                              : std::max<std::size_t>(1, total_generations_ / 3);
        journal({{"event", "create"}, {"config", cfg_.source}});
        engine_.initialize();
        publish(Phase::Running);
        worker_ = std::thread([this] { work(); });
    }

    ~Session()
    {
        queue_.close();
        if (worker_.joinable())
            worker_.join();
    }

    Session(const Session&) = delete;
    Session& operator=(const Session&) = delete;

    const std::string& id() const { return id_; }
    const SessionConfig& config() const { return cfg_; }
    const Problem& problem() const { return *problem_; }
    std::size_t interaction_period() const { return period_; }
    std::size_t total_generations() const { return total_generations_; }

    Phase phase() const
    {
        std::lock_guard lock(mutex_);
        return phase_;
    }

    /// Runs to the next interaction point or the end of the budget.
    Snapshot advance()
    {
        std::promise<Snapshot> done;
        auto result = done.get_future();
        {
            std::lock_guard lock(mutex_);
            if (phase_ != Phase::Running)
                throw ProtocolError(phase_, "advance needs phase Running");
            if (busy_)
                throw ProtocolError(phase_, "an advance is already in progress");
            busy_ = true;
        }
        if (!queue_.try_push(Command{Advance{std::move(done)}})) {
            std::lock_guard lock(mutex_);
            busy_ = false;
            throw ProtocolError(phase_, "session queue is full");
        }
        return result.get();
    }

    /// Replaces the reference point for the remaining generations. Baselines
    /// keep searching as before; only their scoring follows the new point.
    void elicit(const Vec& z)
    {
        std::promise<void> done;
        auto result = done.get_future();
        {
            std::lock_guard lock(mutex_);
            if (phase_ != Phase::AwaitingPreference)
                throw ProtocolError(phase_, "preference is only accepted while AwaitingPreference");
            if (z.size() != problem_->m())
                throw ProtocolError(phase_, "reference point has " + std::to_string(z.size()) +
                                                " components, expected " + std::to_string(problem_->m()));
            if (!all_finite(z))
                throw ProtocolError(phase_, "reference point components must be finite");
            if (busy_)
                throw ProtocolError(phase_, "a request is already in progress");
            busy_ = true;
        }
        if (!queue_.try_push(Command{Elicit{ReferencePoint(z), std::move(done)}})) {
            std::lock_guard lock(mutex_);
            busy_ = false;
            throw ProtocolError(phase_, "session queue is full");
        }
        result.get();
    }

    Snapshot latest() const
    {
        std::lock_guard lock(mutex_);
        return snapshots_.back();
    }

    /// Snapshots from position `from` on; blocks up to `timeout` when none
    /// are available yet. `finished` is set once the terminal snapshot has
    /// been returned.
    std::vector<Snapshot> snapshots_since(std::size_t from, std::chrono::milliseconds timeout, bool* finished = nullptr) const
    {
        std::unique_lock lock(mutex_);
        cv_.wait_for(lock, timeout, [&] { return snapshots_.size() > from; });
        std::vector<Snapshot> out;
        for (std::size_t k = from; k < snapshots_.size(); ++k)
            out.push_back(snapshots_[k]);
        if (finished)
            *finished = phase_ == Phase::Finished && from + out.size() == snapshots_.size();
        return out;
    }

    std::vector<Elicitation> history() const
    {
        std::lock_guard lock(mutex_);
        return history_;
    }

    std::vector<TrajectoryPoint> trajectory() const
    {
        std::lock_guard lock(mutex_);
        return trajectory_;
    }

    /// Final population once Finished (empty before).
    Population final_population() const
    {
        std::lock_guard lock(mutex_);
        return phase_ == Phase::Finished ? final_ : Population{};
    }

    std::vector<std::string> journal_lines() const
    {
        std::lock_guard lock(mutex_);
        return journal_lines_;
    }

    json state_json() const
    {
        std::lock_guard lock(mutex_);
        json hist = json::array();
        for (const auto& e : history_)
            hist.push_back({{"generation", e.generation}, {"z", e.zr.z}});
        json traj = json::array();
        for (const auto& t : trajectory_)
            traj.push_back({{"generation", t.generation}, {"zr_index", t.zr_index}, {"r_hv", t.r_hv}});
        return {{"id", id_},
                {"phase", std::string(to_string(phase_))},
                {"problem", std::string(to_string(cfg_.problem.spec.family))},
                {"algorithm", std::string(to_string(cfg_.algorithm.kind))},
                {"m", problem_->m()},
                {"budget", cfg_.budget},
                {"interaction_period", period_},
                {"elicitations", hist},
                {"trajectory", traj},
                {"snapshot", snapshot_to_json(snapshots_.back(), *problem_)}};
    }

private:
    struct Advance {
        std::promise<Snapshot> done;
    };
    struct Elicit {
        ReferencePoint zr;
        std::promise<void> done;
    };
    using Command = std::variant<Advance, Elicit>;

    void work()
    {
        while (auto cmd = queue_.pop()) {
            if (auto* a = std::get_if<Advance>(&*cmd)) {
                try {
                    Snapshot s = run_to_pause();
                    idle();
                    a->done.set_value(std::move(s));
                } catch (...) {
                    idle();
                    a->done.set_exception(std::current_exception());
                }
            } else if (auto* e = std::get_if<Elicit>(&*cmd)) {
                try {
                    apply(e->zr);
                    idle();
                    e->done.set_value();
                } catch (...) {
                    idle();
                    e->done.set_exception(std::current_exception());
                }
            }
        }
    }

    void idle()
    {
        std::lock_guard lock(mutex_);
        busy_ = false;
    }

    // worker thread only
    Snapshot run_to_pause()
    {
        if (!engine_.can_step(cfg_.budget)) {
            publish(Phase::Finished);
            return latest();
        }
        while (true) {
            engine_.step();
            const std::size_t g = engine_.generation();
            if (!engine_.can_step(cfg_.budget)) {
                publish(g % period_ == 0 ? Phase::AwaitingPreference : Phase::Finished);
                return latest();
            }
            if (g % period_ == 0) {
                publish(Phase::AwaitingPreference);
                return latest();
            }
            publish(Phase::Running);
        }
    }

    // worker thread only; the engine is idle at a generation boundary here
    void apply(const ReferencePoint& zr)
    {
        if (is_preference_kind(cfg_.algorithm.kind))
            engine_.set_reference_points({zr});
        std::lock_guard lock(mutex_);
        zr_ = zr;
        history_.push_back({engine_.generation(), zr});
        phase_ = Phase::Running;
        journal_locked({{"event", "elicit"}, {"generation", engine_.generation()}, {"z", zr.z}});
    }

    void publish(Phase phase)
    {
        if (phase == Phase::Finished) {
            std::lock_guard lock(mutex_);
            // reaching the end at a pause closes that generation's snapshot
            if (!snapshots_.empty() && snapshots_.back().generation == engine_.generation()) {
                snapshots_.back().phase = phase_ = Phase::Finished;
                final_ = engine_.population();
                journal_locked({{"event", "snapshot"}, {"snapshot", snapshot_to_json(snapshots_.back(), *problem_)}});
                cv_.notify_all();
                return;
            }
        }
        Snapshot s;
        s.generation = engine_.generation();
        s.evaluations = engine_.evaluations();
        s.budget = cfg_.budget;
        s.phase = phase;
        s.objectives = engine_.population().objectives();
        std::lock_guard lock(mutex_);
        if (zr_) {
            s.zr = zr_;
            s.zr_index = history_.size();
            s.representatives = representative_subset(s.objectives, cfg_.representatives, *zr_);
            const auto fronts = fast_nondominated_sort(s.objectives);
            std::vector<ObjectiveVector> nd;
            for (std::size_t idx : fronts.front())
                nd.push_back(s.objectives[idx]);
            const RMetricFrame rf{*zr_, frame_.worst, frame_.range, 0.2};
            s.metrics["R_HV"] = r_hv(nd, rf);
            s.metrics["EP"] = ep_accuracy(nd, *zr_);
            if (trajectory_.empty() || trajectory_.back().generation != s.generation)
                trajectory_.push_back({s.generation, *s.zr_index, s.metrics["R_HV"]});
        } else {
            const std::size_t k = std::min(cfg_.representatives, s.objectives.size());
            s.representatives.resize(k);
            std::iota(s.representatives.begin(), s.representatives.end(), std::size_t{0});
        }
        phase_ = phase;
        if (phase == Phase::Finished)
            final_ = engine_.population();
        journal_locked({{"event", "snapshot"}, {"snapshot", snapshot_to_json(s, *problem_)}});
        snapshots_.push_back(std::move(s));
        cv_.notify_all();
    }

    void journal(const json& j)
    {
        std::lock_guard lock(mutex_);
        journal_locked(j);
    }

    void journal_locked(const json& j)
    {
        journal_lines_.push_back(j.dump());
        if (!journal_path_.empty()) {
            std::ofstream out(journal_path_, std::ios::app);
            out << journal_lines_.back() << '\n';
        }
    }

    std::string id_;
    SessionConfig cfg_;
    std::shared_ptr<const Problem> problem_;
    InstanceFrame frame_;
    Engine engine_;
    fs::path journal_path_;
    std::size_t total_generations_ = 0;
    std::size_t period_ = 1;

    mutable std::mutex mutex_;
    mutable std::condition_variable cv_;
    Phase phase_ = Phase::Running;
    bool busy_ = false;
    std::optional<ReferencePoint> zr_;
    std::vector<Elicitation> history_;
    std::vector<TrajectoryPoint> trajectory_;
    std::vector<Snapshot> snapshots_;
    std::vector<std::string> journal_lines_;
    Population final_;

    BoundedQueue<Command> queue_;
    std::thread worker_;
};

// ----------------------------------------------------------------- registry

class SessionManager {
public:
    explicit SessionManager(fs::path journal_dir = {}) : journal_dir_(std::move(journal_dir))
    {
        if (!journal_dir_.empty())
            fs::create_directories(journal_dir_);
    }

    std::shared_ptr<Session> create(const SessionConfig& cfg)
    {
        const std::string id = "s" + std::to_string(++counter_);
        const fs::path journal = journal_dir_.empty() ? fs::path{} : journal_dir_ / (id + ".jsonl");
        auto session = std::make_shared<Session>(id, cfg, journal);
        std::lock_guard lock(mutex_);
        sessions_[id] = session;
        return session;
    }

    std::shared_ptr<Session> get(const std::string& id) const
    {
        std::lock_guard lock(mutex_);
        const auto it = sessions_.find(id);
        if (it == sessions_.end())
            throw NotFound("unknown session '" + id + "'");
        return it->second;
    }

    bool remove(const std::string& id)
    {
        std::lock_guard lock(mutex_);
        return sessions_.erase(id) > 0;
    }

    std::vector<std::string> ids() const
    {
        std::lock_guard lock(mutex_);
        std::vector<std::string> out;
        for (const auto& [id, s] : sessions_)
            out.push_back(id);
        return out;
    }

private:
    fs::path journal_dir_;
    std::atomic<std::size_t> counter_{0};
    mutable std::mutex mutex_;
    std::map<std::string, std::shared_ptr<Session>> sessions_;
};

// ----------------------------------------------------------------- scripting

struct ScriptedOutcome {
    Population final_population;
    std::vector<Elicitation> history;
    std::vector<TrajectoryPoint> trajectory;
    std::vector<Snapshot> pauses;  // snapshots returned by advance, in order
    std::vector<std::string> journal;
};

/// Drives a session headlessly: advance, and at every pause submit the next
/// scripted point (or re-submit the current one once the script runs out).
inline ScriptedOutcome run_scripted(const SessionConfig& cfg, const std::vector<Vec>& script, fs::path journal = {})
{
    Session session("scripted", cfg, std::move(journal));
    ScriptedOutcome out;
    std::size_t next = 0;
    while (true) {
        Snapshot s = session.advance();
        out.pauses.push_back(s);
        if (s.phase == Phase::Finished)
            break;
        if (next < script.size())
            session.elicit(script[next++]);
        else if (s.zr)
            session.elicit(s.zr->z);
        else
            session.elicit(s.objectives.front());
    }
    out.final_population = session.final_population();
    out.history = session.history();
    out.trajectory = session.trajectory();
    out.journal = session.journal_lines();
    return out;
}

/// Rebuilds a session from its journal (create config plus elicitations)
/// and runs it again.
inline ScriptedOutcome replay_journal(const std::vector<std::string>& lines, const fs::path& base_dir = ".")
{
    std::optional<SessionConfig> cfg;
    std::vector<Vec> script;
    for (const auto& line : lines) {
        const json j = json::parse(line);
        const std::string event = j.at("event");
        if (event == "create")
            cfg = parse_session_config(j.at("config"), base_dir);
        else if (event == "elicit")
            script.push_back(detail::vec_from_json(j.at("z")));
    }
    if (!cfg)
        throw std::runtime_error("journal has no create event");
    return run_scripted(*cfg, script);
}

inline std::vector<std::string> read_journal(const fs::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open journal " + path.string());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty())
            lines.push_back(line);
    return lines;
}

}  // namespace prefemo
