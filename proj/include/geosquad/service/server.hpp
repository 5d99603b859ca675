// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "geosquad/service/engine.hpp"

namespace httplib {
class Server;
}

namespace geosquad {

// HTTP JSON API over one engine. Chat sessions live in memory only; run
// traces are also written under <out_dir>/serve so they outlive a restart.
//
//   POST /api/sessions            -> {session_id}
//   POST /api/chat                -> {run_id}      body {session_id, text[, strategy]}
//   GET  /api/events/{run_id}     -> server-sent events, one JSON object each
//   GET  /api/map/{session_id}    -> MapState
//   GET  /api/traces/{run_id}     -> ExecutionTrace (202 while running)
//   GET  /api/agents              -> roster with tool counts
class Server {
public:
    explicit Server(const Engine& engine, std::optional<std::filesystem::path> static_dir = std::nullopt);
    ~Server();

    Server(const Server&) = delete;
    Server& operator=(const Server&) = delete;

    // Port 0 picks a free one. Returns the bound port; throws GeoError("BindFailed").
    int bind(const std::string& host, int port);
    // Blocks until stop().
    void listen();
    // Stops listening and joins every run worker.
    void stop();

    // Called on the worker thread before each run starts. Tests use it to
    // hold a run open.
    void set_run_hook(std::function<void(const std::string& run_id)> hook);

    // True once the run finished within `timeout`.
    bool wait_run(const std::string& run_id, std::chrono::milliseconds timeout);

private:
    struct Session;
    struct Run;

    void routes();
    void start_run(const std::shared_ptr<Session>& session, const std::shared_ptr<Run>& run, const std::string& run_id,
                   std::string text, StrategyConfig strategy);
    std::shared_ptr<Session> session(const std::string& id);
    std::shared_ptr<Run> run(const std::string& id);
    std::string fresh_id(const char* prefix);

    const Engine& engine_;
    std::unique_ptr<httplib::Server> http_;
    std::mutex mu_;
    std::map<std::string, std::shared_ptr<Session>> sessions_;
    std::map<std::string, std::shared_ptr<Run>> runs_;
    std::vector<std::thread> workers_;
    std::function<void(const std::string&)> run_hook_;
    std::uint64_t counter_ = 0;
    std::uint64_t nonce_ = 0;
    bool stopping_ = false;
};

}  // namespace geosquad
