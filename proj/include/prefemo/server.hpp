#pragma once

// HTTP+JSON front for steering sessions.
//
//   POST   /sessions                    create; body is a session config
//   POST   /sessions/{id}/advance       run to the next pause, returns the snapshot
//   POST   /sessions/{id}/preference    body {"z": [...]}
//   GET    /sessions/{id}               session state with the latest snapshot
//   GET    /sessions/{id}/stream        server-sent events, one snapshot per event
//   DELETE /sessions/{id}
//
// Errors come back as {"error": ..., "phase": ..., "items": [...]} with 400
// (invalid config or body), 404 (unknown session) or 409 (wrong phase).

#include <prefemo/steer.hpp>

#include <httplib.h>

namespace prefemo {

class SteerServer {
public:
    explicit SteerServer(fs::path journal_dir = {}, fs::path base_dir = ".")
        : sessions_(std::move(journal_dir)), base_dir_(std::move(base_dir))
    {
        routes();
    }

    ~SteerServer() { stop(); }

    SessionManager& sessions() { return sessions_; }

    /// Binds to `port` (0 picks a free one) and returns the port in use.
    int bind(const std::string& host, int port)
    {
        if (port == 0)
            return server_.bind_to_any_port(host);
        return server_.bind_to_port(host, port) ? port : -1;
    }

    /// Serves until stop(); blocks the calling thread.
    bool listen() { return server_.listen_after_bind(); }

    void stop()
    {
        if (server_.is_running())
            server_.stop();
    }

    void wait_until_ready() const { server_.wait_until_ready(); }

private:
    static void reply(httplib::Response& res, int status, const json& body)
    {
        res.status = status;
        res.set_content(body.dump(), "application/json");
    }

    template <class F>
    void guarded(httplib::Response& res, F&& f)
    {
        try {
            f();
        } catch (const ValidationError& e) {
            reply(res, 400, {{"error", "invalid session config"}, {"items", e.items()}});
        } catch (const ProtocolError& e) {
            reply(res, 409, {{"error", e.what()}, {"phase", std::string(to_string(e.phase()))}});
        } catch (const NotFound& e) {
            reply(res, 404, {{"error", e.what()}});
        } catch (const json::exception& e) {
            reply(res, 400, {{"error", std::string("malformed JSON: ") + e.what()}});
        } catch (const std::exception& e) {
            reply(res, 500, {{"error", e.what()}});
        }
    }

    void routes()
    {
        server_.Post("/sessions", [this](const httplib::Request& req, httplib::Response& res) {
            guarded(res, [&] {
                const auto cfg = parse_session_config(json::parse(req.body), base_dir_);
                const auto session = sessions_.create(cfg);
                reply(res, 201, session->state_json());
            });
        });
        server_.Post(R"(/sessions/([^/]+)/advance)", [this](const httplib::Request& req, httplib::Response& res) {
            guarded(res, [&] {
                const auto session = sessions_.get(req.matches[1]);
                const Snapshot s = session->advance();
                reply(res, 200, snapshot_to_json(s, session->problem()));
            });
        });
        server_.Post(R"(/sessions/([^/]+)/preference)", [this](const httplib::Request& req, httplib::Response& res) {
            guarded(res, [&] {
                const auto session = sessions_.get(req.matches[1]);
                const json body = json::parse(req.body);
                if (!body.is_object() || !body.contains("z") || !body["z"].is_array())
                    throw ProtocolError(session->phase(), "body must be {\"z\": [...]}");
                Vec z;
                for (const auto& v : body["z"]) {
                    if (!v.is_number())
                        throw ProtocolError(session->phase(), "reference point components must be numbers");
                    z.push_back(v.get<double>());
                }
                session->elicit(z);
                reply(res, 200, {{"accepted", true}, {"elicitations", session->history().size()}});
            });
        });
        server_.Get(R"(/sessions/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
            guarded(res, [&] { reply(res, 200, sessions_.get(req.matches[1])->state_json()); });
        });
        server_.Delete(R"(/sessions/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
            guarded(res, [&] {
                if (!sessions_.remove(req.matches[1]))
                    throw NotFound("unknown session '" + std::string(req.matches[1]) + "'");
                reply(res, 200, {{"deleted", true}});
            });
        });
        server_.Get(R"(/sessions/([^/]+)/stream)", [this](const httplib::Request& req, httplib::Response& res) {
            guarded(res, [&] {
                auto session = sessions_.get(req.matches[1]);
                std::size_t from = 0;
                if (req.has_param("from"))
                    from = std::stoul(req.get_param_value("from"));
                auto cursor = std::make_shared<std::size_t>(from);
                res.set_chunked_content_provider(
                    "text/event-stream", [session, cursor](std::size_t, httplib::DataSink& sink) {
                        bool finished = false;
                        const auto batch = session->snapshots_since(*cursor, std::chrono::milliseconds(500), &finished);
                        for (const auto& s : batch) {
                            const std::string event = "data: " + snapshot_to_json(s, session->problem()).dump() + "\n\n";
                            if (!sink.write(event.data(), event.size()))
                                return false;
                        }
                        *cursor += batch.size();
                        if (finished)
                            sink.done();
                        return true;
                    });
            });
        });
    }

    SessionManager sessions_;
    fs::path base_dir_;
    httplib::Server server_;
};

}  // namespace prefemo
