// SPDX-License-Identifier: Apache-2.0
#include "geosquad/service/commands.hpp"

#include <charconv>
#include <cstdio>

#include "geosquad/core/hash.hpp"
#include "geosquad/core/json_io.hpp"
#include "geosquad/sandbox/domain_tools.hpp"
#include "geosquad/service/engine.hpp"
#include "geosquad/service/server.hpp"

namespace geosquad {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::string hex8(std::uint64_t h) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%08llx", static_cast<unsigned long long>(h & 0xffffffffULL));
    return buf;
}

void print_findings(const ExecutionTrace& trace, std::ostream& out) {
    bool header = false;
    for (const auto& c : trace.executed_steps) {
        if (c.result_status != ToolStatus::ok) continue;
        const Json payload = Json::parse(c.result_payload, nullptr, false);
        if (!payload.is_object() || !payload.contains("result")) continue;
        if (!header) {
            out << "Findings:\n";
            header = true;
        }
        out << "  " << c.tool << ": " << payload.dump() << '\n';
    }
}

}  // namespace

EngineConfig resolve_config(const CommonOptions& o) {
    EngineConfig c = o.config ? load_config(*o.config) : EngineConfig{};
    if (o.seed) c.seed = *o.seed;
    if (o.budget) c.backend.context_budget = *o.budget;
    if (o.workers) c.workers = *o.workers;
    c.validate();
    return c;
}

std::vector<StrategyConfig> parse_strategy_list(const std::string& text, const StrategyConfig& base) {
    std::vector<std::string> entries = split(text, ',');
    if (text == "all") entries = {"single_agent", "composition_only", "ledger_loop", "hybrid"};
    std::vector<StrategyConfig> out;
    for (const auto& e : entries) {
        if (e.empty()) throw GeoError("InvalidConfig", "empty strategy in '" + text + "'");
        const auto parts = split(e, '+');
        StrategyConfig s = base;
        s.strategy = strategy_from_string(parts[0]);
        for (std::size_t i = 1; i < parts.size(); ++i) {
            if (parts[i] == "ts") s.ts_enabled = true;
            else if (parts[i] == "wm") s.wm_enabled = true;
            else throw GeoError("InvalidConfig", "unknown strategy suffix '+" + parts[i] + "'");
        }
        out.push_back(s);
    }
    return out;
}

std::vector<Domain> parse_domains(const std::string& text) {
    if (text.empty()) return canonical_domains();
    int n = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), n);
    if (ec == std::errc{} && ptr == text.data() + text.size()) {
        if (n < 1 || n > 8) throw GeoError("InvalidConfig", "--domains takes 1..8");
        return canonical_domains(static_cast<std::size_t>(n));
    }
    std::vector<Domain> out;
    for (const auto& name : split(text, ',')) {
        const Domain d = domain_from_string(name);
        if (std::find(out.begin(), out.end(), d) == out.end()) out.push_back(d);
    }
    return out;
}

int cmd_gen(const GenOptions& o, std::ostream& out, std::ostream& err) {
    try {
        EngineConfig cfg = resolve_config(o);
        if (o.templates) cfg.templates_file = *o.templates;
        const int per_agent = o.full ? kFullPerAgent : o.per_agent;
        if (per_agent < 1) {
            err << "usage: --per-agent must be positive\n";
            return kExitUsage;
        }
        Engine engine(cfg);
        TaskDataset data = generate_dataset(engine.templates(), engine.sandbox(), cfg.seed, per_agent);
        const MemoryStores stores = compile_memories(data.exemplars, data.exemplar_golds);
        const auto dir = dataset_dir(cfg.dataset_dir, cfg.seed);
        write_dataset(dir, data, stores, engine.sandbox());
        out << "dataset " << dir.string() << '\n'
            << "tasks " << data.tasks.size() << '\n'
            << "exemplars " << data.exemplars.size() << '\n'
            << "fixture_hash " << data.manifest.fixture_hash << '\n';
        for (const auto& [agent, n] : data.manifest.benchmark_counts) out << "  " << agent << ' ' << n << '\n';
        return kExitOk;
    } catch (const TemplateGapError& e) {
        err << e.what() << '\n';
        return kExitTemplateGap;
    } catch (const GeoError& e) {
        err << e.what() << '\n';
        return kExitFailure;
    }
}

int cmd_bench(const BenchOptions& o, std::ostream& out, std::ostream& err) {
    try {
        EngineConfig cfg = resolve_config(o);
        if (o.perturbation) cfg.perturbation = *o.perturbation;
        if (o.omit_database) cfg.omit_database = true;
        cfg.validate();
        StrategyConfig base = cfg.strategy;
        base.ts_enabled = base.ts_enabled || o.ts;
        base.wm_enabled = base.wm_enabled || o.wm;
        const auto strategies =
            parse_strategy_list(o.strategies.empty() ? to_string(cfg.strategy.strategy) : o.strategies, base);
        const auto domains = parse_domains(o.domains);

        Engine engine(cfg, domains);
        // the dataset covers every domain; run_bench keeps the tasks this roster can serve
        const TaskDataset data = ensure_dataset(engine, o.full ? kFullPerAgent : o.per_agent, &out);
        const auto out_dir = o.out.value_or(cfg.out_dir);
        const BenchOutcome r = run_bench(engine, data, strategies, out_dir, &out);
        out << "report " << (out_dir / "report.md").string() << '\n';
        if (r.context_overflow_runs > 0 && !o.allow_failures) {
            err << r.context_overflow_runs << " run(s) ended in context_overflow\n";
            return kExitFailure;
        }
        return kExitOk;
    } catch (const TemplateGapError& e) {
        err << e.what() << '\n';
        return kExitTemplateGap;
    } catch (const GeoError& e) {
        err << e.what() << '\n';
        return kExitFailure;
    }
}

int cmd_chat(const ChatOptions& o, std::ostream& out, std::ostream& err) {
    if (o.prompt.find_first_not_of(" \t\r\n") == std::string::npos) {
        err << "usage: geosquad chat <prompt>\n";
        return kExitUsage;
    }
    try {
        const EngineConfig cfg = resolve_config(o);
        Engine engine(cfg);
        StrategyConfig strategy = cfg.strategy;
        strategy.strategy = o.strategy ? strategy_from_string(*o.strategy) : Strategy::hybrid;
        strategy.ts_enabled = strategy.ts_enabled || o.ts;
        strategy.wm_enabled = strategy.wm_enabled || o.wm;

        TaskPrompt task;
        task.id = "chat-" + hex8(fnv1a64(o.prompt));
        task.text = o.prompt;
        auto lease = engine.chat_backend(o.prompt);
        Workspace ws(engine.sandbox());
        const ExecutionTrace trace = engine.run(task, strategy, *lease, ws);
        const auto path = cfg.out_dir / "chat" / (task.id + ".json");
        write_text_file(path, Json(trace).dump(2) + "\n");

        if (trace.terminal == Terminal::completed) {
            out << "Answer:\n" << trace.final_answer << '\n';
        } else {
            out << "The request could not be completed (" << to_string(trace.terminal) << ").\n";
            if (!trace.error.empty()) out << "Reason: " << trace.error << '\n';
            for (const auto& r : trace.step_records) {
                if (r.status != AgentStatus::done) out << "  " << r.agent << ' ' << to_string(r.status) << ": " << r.summary << '\n';
            }
        }
        if (!trace.schedules.empty()) {
            out << "Schedule:";
            for (const auto& s : trace.schedules.back().subtasks) out << ' ' << s.agent;
            out << '\n';
        }
        print_findings(trace, out);
        const MapState& map = ws.map();
        out << "Map layers: " << map.layers.size() << '\n';
        for (const auto& l : map.layers) {
            out << "  " << l.product << ' ' << l.region << ' ' << l.date << ' ' << l.style << " (" << l.cells.size()
                << " cells)\n";
        }
        for (const auto& a : map.annotations) out << "  " << a.kind << ": " << a.label << '\n';
        out << "Tokens: " << trace.token_usage.total_tokens << '\n'
            << "Terminal: " << to_string(trace.terminal) << '\n'
            << "Trace: " << path.string() << '\n';
        return trace.terminal == Terminal::completed ? kExitOk : kExitFailure;
    } catch (const GeoError& e) {
        err << e.what() << '\n';
        return kExitFailure;
    }
}

int cmd_serve(const ServeOptions& o, std::ostream& out, std::ostream& err) {
    try {
        const EngineConfig cfg = resolve_config(o);
        Engine engine(cfg);
        Server server(engine, o.static_dir);
        const int port = server.bind(o.host, o.port);
        out << "listening on http://" << o.host << ':' << port << '\n' << std::flush;
        server.listen();
        return kExitOk;
    } catch (const GeoError& e) {
        err << e.what() << '\n';
        return kExitFailure;
    }
}

}  // namespace geosquad
