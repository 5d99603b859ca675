// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "geosquad/agents/prompts.hpp"
#include "geosquad/backend/backend.hpp"
#include "geosquad/eval/report.hpp"
#include "geosquad/registry/tool_registry.hpp"
#include "geosquad/sandbox/domain_tools.hpp"
#include "geosquad/sandbox/sandbox.hpp"
#include "geosquad/sandbox/workspace.hpp"
#include "geosquad/service/config.hpp"
#include "geosquad/taskgen/taskgen.hpp"
#include "geosquad/taskgen/templates.hpp"

namespace geosquad {

// A backend for one run: either owned (scripted playback) or the engine's
// shared live client.
struct BackendLease {
    std::unique_ptr<ModelBackend> owned;
    ModelBackend* backend = nullptr;
    ModelBackend& operator*() const { return *backend; }
};

// Shared state of every run: sandbox, registry, prompts and templates.
// Read-only after construction apart from the lazily built memory stores.
class Engine {
public:
    explicit Engine(EngineConfig config, std::vector<Domain> domains = canonical_domains());
    ~Engine();

    const EngineConfig& config() const { return config_; }
    const std::vector<Domain>& domains() const { return domains_; }
    const Sandbox& sandbox() const { return sandbox_; }
    const ToolRegistry& registry() const { return registry_; }
    const PromptSet& prompts() const { return prompts_; }
    const std::vector<TaskTemplate>& templates() const { return templates_; }

    // Agent roster: [{agent, domain, tools, real_tools}].
    Json agents_json() const;

    // True when every gold step belongs to an agent of this engine.
    bool covers(const GoldSolution& gold) const;

    // Scripted: gold playback for a benchmark task.
    BackendLease task_backend(const TaskPrompt& task, const GoldSolution& gold) const;
    // Scripted: playback of the template the text instantiates, or an empty
    // table when it matches none.
    BackendLease chat_backend(const std::string& text) const;

    // TS/WM stores from the dataset on disk, or compiled from a fresh
    // in-memory dataset when there is none.
    const MemoryStores& memories() const;
    void set_memories(MemoryStores stores);

    ExecutionTrace run(const TaskPrompt& task, const StrategyConfig& strategy, ModelBackend& backend, Workspace& ws,
                       EventSink events = {}) const;

private:
    EngineConfig config_;
    std::vector<Domain> domains_;
    Sandbox sandbox_;
    ToolRegistry registry_;
    PromptSet prompts_;
    std::vector<TaskTemplate> templates_;
    std::unique_ptr<ModelBackend> live_;
    mutable std::once_flag memories_once_;
    mutable std::unique_ptr<MemoryStores> memories_;
};

// Directory label of a run: strategy name plus "-ts" / "-wm".
std::string run_label(const StrategyConfig& s);

struct BenchOutcome {
    std::vector<BenchmarkReport> reports;
    long context_overflow_runs = 0;
    long tasks = 0;  // after the domain filter
};

// Every strategy over every covered task, `workers` at a time. Writes
// traces/<label>/<task>.json, report.md and report.csv under `out_dir`.
// Output files do not depend on the worker count.
BenchOutcome run_bench(const Engine& engine, const TaskDataset& data, const std::vector<StrategyConfig>& strategies,
                       const std::filesystem::path& out_dir, std::ostream* progress = nullptr);

// Loads <dataset_dir>/seed-N, generating and writing it first when absent.
TaskDataset ensure_dataset(const Engine& engine, int per_agent, std::ostream* progress = nullptr);

}  // namespace geosquad
