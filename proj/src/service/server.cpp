// SPDX-License-Identifier: Apache-2.0
#include "geosquad/service/server.hpp"

#include <condition_variable>
#include <cstdio>
#include <random>

#include <httplib.h>

#include "geosquad/core/json_io.hpp"

namespace geosquad {

struct Server::Session {
    std::mutex mu;
    bool busy = false;
    std::vector<Json> history;  // {role, text}, append-only
    std::unique_ptr<Workspace> ws;
    MapState map;  // copy taken after each run
    std::string last_run;
};

struct Server::Run {
    std::mutex mu;
    std::condition_variable cv;
    std::string session_id;
    std::vector<Json> events;
    bool done = false;
    std::optional<ExecutionTrace> trace;
};

namespace {

void send_json(httplib::Response& res, int status, const Json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& code, const std::string& message) {
    send_json(res, status, Json{{"error", code}, {"message", message}});
}

std::filesystem::path trace_path(const Engine& e, const std::string& run_id) {
    return e.config().out_dir / "serve" / (run_id + ".json");
}

bool safe_id(const std::string& id) {
    if (id.empty() || id.size() > 64) return false;
    for (char c : id) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-') return false;
    }
    return true;
}

}  // namespace

Server::Server(const Engine& engine, std::optional<std::filesystem::path> static_dir)
    : engine_(engine), http_(std::make_unique<httplib::Server>()) {
    nonce_ = std::random_device{}();
    routes();
    if (static_dir && !http_->set_mount_point("/", static_dir->string())) {
        throw GeoError("InvalidConfig", "static dir " + static_dir->string() + " does not exist");
    }
}

Server::~Server() { stop(); }

int Server::bind(const std::string& host, int port) {
    const int bound = port == 0 ? http_->bind_to_any_port(host) : (http_->bind_to_port(host, port) ? port : -1);
    if (bound <= 0) throw GeoError("BindFailed", "cannot bind " + host + ":" + std::to_string(port));
    return bound;
}

void Server::listen() { http_->listen_after_bind(); }

void Server::stop() {
    {
        std::lock_guard lock(mu_);
        stopping_ = true;
        for (auto& [id, r] : runs_) r->cv.notify_all();
    }
    http_->stop();
    std::vector<std::thread> workers;
    {
        std::lock_guard lock(mu_);
        workers.swap(workers_);
    }
    for (auto& t : workers) {
        if (t.joinable()) t.join();
    }
}

void Server::set_run_hook(std::function<void(const std::string&)> hook) {
    std::lock_guard lock(mu_);
    run_hook_ = std::move(hook);
}

bool Server::wait_run(const std::string& run_id, std::chrono::milliseconds timeout) {
    auto r = run(run_id);
    if (!r) return false;
    std::unique_lock lock(r->mu);
    return r->cv.wait_for(lock, timeout, [&] { return r->done; });
}

std::string Server::fresh_id(const char* prefix) {
    std::lock_guard lock(mu_);
    char buf[48];
    std::snprintf(buf, sizeof buf, "%s-%06llx-%04llu", prefix, static_cast<unsigned long long>(nonce_ & 0xffffff),
                  static_cast<unsigned long long>(++counter_));
    return buf;
}

std::shared_ptr<Server::Session> Server::session(const std::string& id) {
    std::lock_guard lock(mu_);
    auto it = sessions_.find(id);
    return it == sessions_.end() ? nullptr : it->second;
}

std::shared_ptr<Server::Run> Server::run(const std::string& id) {
    std::lock_guard lock(mu_);
    auto it = runs_.find(id);
    return it == runs_.end() ? nullptr : it->second;
}

void Server::start_run(const std::shared_ptr<Session>& s, const std::shared_ptr<Run>& r, const std::string& run_id,
                       std::string text, StrategyConfig strategy) {
    std::lock_guard lock(mu_);
    auto hook = run_hook_;
    workers_.emplace_back([this, s, r, run_id, text = std::move(text), strategy, hook] {
        if (hook) hook(run_id);
        auto sink = [r](const Json& event) {
            std::lock_guard lock(r->mu);
            Json e = event;
            e["seq"] = r->events.size();
            r->events.push_back(std::move(e));
            r->cv.notify_all();
        };
        TaskPrompt task;
        task.id = run_id;
        task.text = text;
        ExecutionTrace trace;
        try {
            auto lease = engine_.chat_backend(text);
            trace = engine_.run(task, strategy, *lease, *s->ws, sink);
        } catch (const std::exception& e) {
            trace.task_id = run_id;
            trace.strategy = strategy.strategy;
            trace.terminal = Terminal::budget_exhausted;
            trace.error = std::string("internal: ") + e.what();
            sink(Json{{"type", "final"}, {"terminal", to_string(trace.terminal)}, {"final_answer", ""},
                      {"error", trace.error}});
        }
        try {
            write_text_file(trace_path(engine_, run_id), Json(trace).dump(2) + "\n");
        } catch (const GeoError&) {
            // the in-memory copy still serves GET /api/traces
        }
        {
            std::lock_guard lock(s->mu);
            s->map = s->ws->map();
            s->history.push_back(Json{{"role", "assistant"}, {"text", trace.final_answer}, {"run_id", run_id}});
            s->busy = false;
        }
        std::lock_guard lock(r->mu);
        r->trace = std::move(trace);
        r->done = true;
        r->cv.notify_all();
    });
}

void Server::routes() {
    auto& h = *http_;

    h.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
    h.set_exception_handler([this](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        std::string msg = "unknown error";
        try {
            if (ep) std::rethrow_exception(ep);
        } catch (const std::exception& e) {
            msg = e.what();
        } catch (...) {
        }
        send_json(res, 500, Json{{"error", "internal"}, {"message", msg}, {"trace_id", fresh_id("err")}});
    });

    h.Post("/api/sessions", [this](const httplib::Request&, httplib::Response& res) {
        const std::string id = fresh_id("s");
        auto s = std::make_shared<Session>();
        s->ws = std::make_unique<Workspace>(engine_.sandbox());
        {
            std::lock_guard lock(mu_);
            sessions_[id] = s;
        }
        send_json(res, 200, Json{{"session_id", id}});
    });

    h.Post("/api/chat", [this](const httplib::Request& req, httplib::Response& res) {
        const Json body = Json::parse(req.body, nullptr, false);
        if (body.is_discarded() || !body.is_object()) return send_error(res, 400, "InvalidBody", "body is not a JSON object");
        if (!body.contains("session_id") || !body["session_id"].is_string() || !body.contains("text") ||
            !body["text"].is_string()) {
            return send_error(res, 400, "InvalidBody", "session_id and text are required strings");
        }
        const std::string text = body["text"].get<std::string>();
        if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
            return send_error(res, 400, "InvalidBody", "text is empty");
        }
        StrategyConfig strategy = engine_.config().strategy;
        if (body.contains("strategy")) {
            try {
                strategy.strategy = strategy_from_string(body["strategy"].get<std::string>());
            } catch (const std::exception&) {
                return send_error(res, 400, "InvalidBody", "unknown strategy");
            }
        }
        auto s = session(body["session_id"].get<std::string>());
        if (!s) return send_error(res, 404, "UnknownSession", "no such session");
        {
            std::lock_guard lock(s->mu);
            if (s->busy) return send_error(res, 409, "SessionBusy", "a run is already active in this session");
            s->busy = true;
            s->history.push_back(Json{{"role", "user"}, {"text", text}});
        }
        const std::string run_id = fresh_id("run");
        auto r = std::make_shared<Run>();
        r->session_id = body["session_id"].get<std::string>();
        {
            std::lock_guard lock(mu_);
            if (stopping_) return send_error(res, 503, "ShuttingDown", "server is stopping");
            runs_[run_id] = r;
        }
        {
            std::lock_guard lock(s->mu);
            s->last_run = run_id;
        }
        start_run(s, r, run_id, text, strategy);
        send_json(res, 200, Json{{"run_id", run_id}});
    });

    h.Get(R"(/api/events/([A-Za-z0-9-]+))", [this](const httplib::Request& req, httplib::Response& res) {
        auto r = run(req.matches[1]);
        if (!r) return send_error(res, 404, "UnknownRun", "no such run");
        res.set_header("Cache-Control", "no-cache");
        res.set_chunked_content_provider(
            "text/event-stream", [this, r, next = std::size_t{0}](std::size_t, httplib::DataSink& sink) mutable {
                std::unique_lock lock(r->mu);
                r->cv.wait_for(lock, std::chrono::milliseconds(500), [&] { return next < r->events.size() || r->done; });
                while (next < r->events.size()) {
                    const Json& e = r->events[next++];
                    const std::string chunk =
                        "event: " + e.value("type", std::string{"message"}) + "\ndata: " + e.dump() + "\n\n";
                    if (!sink.write(chunk.data(), chunk.size())) return false;
                }
                if (r->done) {
                    sink.done();
                    return true;
                }
                std::lock_guard g(mu_);
                return !stopping_;
            });
    });

    h.Get(R"(/api/map/([A-Za-z0-9-]+))", [this](const httplib::Request& req, httplib::Response& res) {
        auto s = session(req.matches[1]);
        if (!s) return send_error(res, 404, "UnknownSession", "no such session");
        std::lock_guard lock(s->mu);
        send_json(res, 200, Json(s->map));
    });

    h.Get(R"(/api/sessions/([A-Za-z0-9-]+))", [this](const httplib::Request& req, httplib::Response& res) {
        auto s = session(req.matches[1]);
        if (!s) return send_error(res, 404, "UnknownSession", "no such session");
        std::lock_guard lock(s->mu);
        send_json(res, 200, Json{{"session_id", req.matches[1].str()}, {"history", s->history},
                                 {"busy", s->busy}, {"last_run", s->last_run}});
    });

    h.Get(R"(/api/traces/([A-Za-z0-9-]+))", [this](const httplib::Request& req, httplib::Response& res) {
        const std::string id = req.matches[1];
        if (auto r = run(id)) {
            std::lock_guard lock(r->mu);
            if (!r->done) return send_json(res, 202, Json{{"run_id", id}, {"status", "running"}});
            return send_json(res, 200, Json(*r->trace));
        }
        const auto path = trace_path(engine_, id);
        if (safe_id(id) && std::filesystem::exists(path)) {
            res.status = 200;
            res.set_content(read_text_file(path), "application/json");
            return;
        }
        send_error(res, 404, "UnknownTrace", "no such trace");
    });

    h.Get("/api/agents", [this](const httplib::Request&, httplib::Response& res) {
        send_json(res, 200, Json{{"agents", engine_.agents_json()}, {"total_tools", engine_.registry().size()}});
    });
}

}  // namespace geosquad
