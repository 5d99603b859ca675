// SPDX-License-Identifier: Apache-2.0
#include "geosquad/service/engine.hpp"

#include <atomic>
#include <thread>

#include "geosquad/backend/http_backend.hpp"
#include "geosquad/backend/scripted_backend.hpp"
#include "geosquad/core/json_io.hpp"
#include "geosquad/eval/metrics.hpp"
#include "geosquad/sandbox/domain_tools.hpp"
#include "geosquad/taskgen/behaviors.hpp"

namespace geosquad {

namespace {

Sandbox make_sandbox(const EngineConfig& c) {
    SandboxConfig sc;
    sc.seed = c.sandbox_seed;
    return Sandbox::generate(sc);
}

BehaviorOptions behavior_options(const EngineConfig& c) {
    BehaviorOptions o;
    o.omit_database = c.omit_database;
    o.perturbation = parse_perturbation(c.perturbation);
    return o;
}

}  // namespace

Engine::Engine(EngineConfig config, std::vector<Domain> domains)
    : config_(std::move(config)),
      domains_(std::move(domains)),
      sandbox_(make_sandbox(config_)),
      registry_(build_registry(domains_, config_.total_tools)),
      prompts_(config_.prompts_dir.empty() ? PromptSet::defaults() : PromptSet::load(config_.prompts_dir)),
      templates_(config_.templates_file.empty() ? default_templates() : load_templates(config_.templates_file)) {
    config_.validate();
    if (config_.backend.kind == BackendKind::http) {
        live_ = std::make_unique<HttpBackend>(config_.backend, api_key_from_env());
    }
}

Engine::~Engine() = default;

Json Engine::agents_json() const {
    Json out = Json::array();
    const auto real = real_tool_counts(domains_);
    for (Domain d : domains_) {
        const std::string agent = agent_name(d);
        out.push_back(Json{{"agent", agent},
                           {"domain", to_string(d)},
                           {"tools", registry_.count_for(agent)},
                           {"real_tools", real.count(d) ? real.at(d) : 0}});
    }
    return out;
}

bool Engine::covers(const GoldSolution& gold) const {
    for (const auto& s : gold.steps) {
        const auto d = domain_of_agent(s.agent_name);
        if (!d || std::find(domains_.begin(), domains_.end(), *d) == domains_.end()) return false;
    }
    return true;
}

BackendLease Engine::task_backend(const TaskPrompt& task, const GoldSolution& gold) const {
    if (live_) return {nullptr, live_.get()};
    auto b = std::make_unique<ScriptedBackend>(compile_behavior(task, gold, behavior_options(config_)));
    ModelBackend* p = b.get();
    return {std::move(b), p};
}

BackendLease Engine::chat_backend(const std::string& text) const {
    if (live_) return {nullptr, live_.get()};
    std::optional<ScriptedBehavior> behavior;
    try {
        behavior = behavior_for_prompt(text, templates_, behavior_options(config_));
    } catch (const GeoError&) {
        behavior.reset();  // a template matched but its slots do not instantiate
    }
    auto b = std::make_unique<ScriptedBackend>(behavior.value_or(ScriptedBehavior{}));
    ModelBackend* p = b.get();
    return {std::move(b), p};
}

const MemoryStores& Engine::memories() const {
    std::call_once(memories_once_, [this] {
        if (memories_) return;
        const auto dir = dataset_dir(config_.dataset_dir, config_.seed);
        if (std::filesystem::exists(dir / "ts_store.jsonl") && std::filesystem::exists(dir / "wm_store.jsonl")) {
            memories_ = std::make_unique<MemoryStores>(MemoryStores{ToolSelectionStore::load(dir / "ts_store.jsonl"),
                                                                    WorkflowMemoryStore::load(dir / "wm_store.jsonl")});
            return;
        }
        const auto data = generate_dataset(templates_, sandbox_, config_.seed, 1);
        memories_ = std::make_unique<MemoryStores>(compile_memories(data.exemplars, data.exemplar_golds));
    });
    return *memories_;
}

void Engine::set_memories(MemoryStores stores) { memories_ = std::make_unique<MemoryStores>(std::move(stores)); }

ExecutionTrace Engine::run(const TaskPrompt& task, const StrategyConfig& strategy, ModelBackend& backend,
                           Workspace& ws, EventSink events) const {
    const MemoryStores* mem = (strategy.ts_enabled || strategy.wm_enabled) ? &memories() : nullptr;
    OrchestratorContext ctx{registry_,
                            backend,
                            config_.backend,
                            prompts_,
                            strategy.ts_enabled ? &mem->ts : nullptr,
                            strategy.wm_enabled ? &mem->wm : nullptr,
                            std::move(events)};
    return run_task(task, strategy, ctx, ws);
}

std::string run_label(const StrategyConfig& s) {
    return to_string(s.strategy) + (s.ts_enabled ? "-ts" : "") + (s.wm_enabled ? "-wm" : "");
}

BenchOutcome run_bench(const Engine& engine, const TaskDataset& data, const std::vector<StrategyConfig>& strategies,
                       const std::filesystem::path& out_dir, std::ostream* progress) {
    std::vector<std::size_t> picked;
    for (std::size_t i = 0; i < data.tasks.size(); ++i) {
        if (engine.covers(data.golds[i])) picked.push_back(i);
    }
    BenchOutcome outcome;
    outcome.tasks = static_cast<long>(picked.size());
    if (picked.empty()) throw GeoError("InvalidValue", "no task fits the selected domains");

    for (const auto& strategy : strategies) {
        strategy.validate();
        const std::string label = run_label(strategy);
        const auto trace_dir = out_dir / "traces" / label;
        std::filesystem::create_directories(trace_dir);
        if (strategy.ts_enabled || strategy.wm_enabled) engine.memories();  // build before the workers start

        std::vector<TaskScore> scores(picked.size());
        std::atomic<std::size_t> next{0};
        std::mutex err_mu;
        std::exception_ptr failure;
        auto worker = [&] {
            for (std::size_t k = next++; k < picked.size(); k = next++) {
                try {
                    const auto& task = data.tasks[picked[k]];
                    const auto& gold = data.golds[picked[k]];
                    auto lease = engine.task_backend(task, gold);
                    Workspace ws(engine.sandbox());
                    const ExecutionTrace trace = engine.run(task, strategy, *lease, ws);
                    write_text_file(trace_dir / (task.id + ".json"), Json(trace).dump(2) + "\n");
                    scores[k] = score_task(trace, gold, engine.sandbox(), engine.config().penalize_extras);
                } catch (...) {
                    std::lock_guard lock(err_mu);
                    if (!failure) failure = std::current_exception();
                }
            }
        };
        const int n = std::max(1, std::min<int>(engine.config().workers, static_cast<int>(picked.size())));
        std::vector<std::thread> pool;
        for (int i = 0; i < n; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
        if (failure) std::rethrow_exception(failure);

        BenchmarkReport r = aggregate(scores, strategy.strategy, strategy.ts_enabled, strategy.wm_enabled);
        outcome.context_overflow_runs += r.context_overflow;
        if (progress) {
            char line[160];
            std::snprintf(line, sizeof line, "%-24s tasks=%ld correctness=%.2f%% avg_tokens=%.2fk completed=%ld\n",
                          label.c_str(), r.tasks, r.correctness_rate, r.avg_tokens_k, r.completed);
            *progress << line;
        }
        outcome.reports.push_back(std::move(r));
    }
    write_text_file(out_dir / "report.csv", render_csv(outcome.reports));
    write_text_file(out_dir / "report.md", render_markdown(outcome.reports));
    return outcome;
}

TaskDataset ensure_dataset(const Engine& engine, int per_agent, std::ostream* progress) {
    const auto dir = dataset_dir(engine.config().dataset_dir, engine.config().seed);
    if (std::filesystem::exists(dir / "manifest.json")) {
        TaskDataset data = load_dataset(dir);
        if (data.manifest.per_agent == per_agent && data.manifest.sandbox_seed == engine.config().sandbox_seed) {
            return data;
        }
    }
    TaskDataset data = generate_dataset(engine.templates(), engine.sandbox(), engine.config().seed, per_agent);
    const MemoryStores stores = compile_memories(data.exemplars, data.exemplar_golds);
    write_dataset(dir, data, stores, engine.sandbox());
    if (progress) *progress << "generated dataset " << dir.string() << '\n';
    return data;
}

}  // namespace geosquad
