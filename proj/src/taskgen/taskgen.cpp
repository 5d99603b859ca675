// SPDX-License-Identifier: Apache-2.0
#include "geosquad/taskgen/taskgen.hpp"

#include <algorithm>
#include <set>

#include "geosquad/core/args.hpp"
#include "geosquad/core/hash.hpp"
#include "geosquad/core/json_io.hpp"
#include "geosquad/core/validate.hpp"
#include "geosquad/sandbox/domain_tools.hpp"

namespace geosquad {

namespace {

// Fisher-Yates over a splitmix64 stream; unlike std::shuffle the result does
// not depend on the standard library.
template <typename T>
void shuffle(std::vector<T>& v, std::uint64_t seed) {
    std::uint64_t state = seed;
    for (std::size_t i = v.size(); i > 1; --i) {
        state = splitmix64(state);
        std::swap(v[i - 1], v[state % i]);
    }
}

std::string two_digits(int n) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%02d", n);
    return buf;
}

std::string four_digits(int n) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d", n);
    return buf;
}

TaskPrompt make_prompt(const TemplateInstance& inst, std::string id) {
    TaskPrompt t;
    t.id = std::move(id);
    t.domain = inst.domain;
    t.text = inst.text;
    auto it = inst.bindings.find("region");
    t.region = it == inst.bindings.end() ? "" : it->second;
    for (const auto& s : inst.steps) {
        if (s.tool_name != "load_product") continue;
        if (auto r = parse_date_range(s.canonical_args.value("date_range", std::string{}))) t.date_range = *r;
        break;
    }
    return t;
}

}  // namespace

void to_json(Json& j, const DatasetManifest& m) {
    Json counts = Json::object();
    for (const auto& [agent, n] : m.exemplar_counts) counts[agent]["exemplar"] = n;
    for (const auto& [agent, n] : m.benchmark_counts) counts[agent]["benchmark"] = n;
    int tasks = 0, exemplars = 0;
    for (const auto& [a, n] : m.benchmark_counts) tasks += n;
    for (const auto& [a, n] : m.exemplar_counts) exemplars += n;
    j = Json{{"seed", m.seed},
             {"sandbox_seed", m.sandbox_seed},
             {"per_agent", m.per_agent},
             {"split", {{"exemplar", kExemplarsPerAgent}, {"benchmark", m.per_agent}}},
             {"counts", counts},
             {"total_tasks", tasks},
             {"total_exemplars", exemplars},
             {"fixture_hash", m.fixture_hash},
             {"grid", {m.rows, m.cols}}};
}

void from_json(const Json& j, DatasetManifest& m) {
    m.seed = j.at("seed").get<std::uint64_t>();
    m.sandbox_seed = j.at("sandbox_seed").get<std::uint64_t>();
    m.per_agent = j.at("per_agent").get<int>();
    m.exemplar_counts.clear();
    m.benchmark_counts.clear();
    for (const auto& [agent, c] : j.at("counts").items()) {
        m.exemplar_counts[agent] = c.value("exemplar", 0);
        m.benchmark_counts[agent] = c.value("benchmark", 0);
    }
    m.fixture_hash = j.at("fixture_hash").get<std::string>();
    m.rows = j.at("grid").at(0).get<int>();
    m.cols = j.at("grid").at(1).get<int>();
}

TaskDataset generate_dataset(const std::vector<TaskTemplate>& templates, const Sandbox& sandbox, std::uint64_t seed,
                             int per_agent) {
    if (per_agent < 0) throw GeoError("InvalidConfig", "per_agent must not be negative");
    TaskDataset out;
    out.manifest.seed = seed;
    out.manifest.sandbox_seed = sandbox.seed();
    out.manifest.per_agent = per_agent;
    out.manifest.fixture_hash = sandbox.fixture_hash();
    out.manifest.rows = sandbox.rows();
    out.manifest.cols = sandbox.cols();

    for (Domain domain : kAllDomains) {
        std::vector<std::vector<TemplateInstance>> pools;
        for (const auto& t : templates) {
            if (t.domain != domain) continue;
            auto pool = enumerate(t);
            shuffle(pool, mix({seed, fnv1a64(t.id)}));
            pools.push_back(std::move(pool));
        }
        const std::string agent = agent_name(domain);
        if (pools.empty()) throw TemplateGapError("no templates for domain " + to_string(domain));

        // Round-robin over the domain's templates so every one is represented.
        std::set<std::string> seen;
        std::vector<std::size_t> cursor(pools.size(), 0);
        std::size_t turn = 0;
        auto next = [&]() -> std::optional<TemplateInstance> {
            for (std::size_t tries = 0; tries < pools.size(); ++tries, ++turn) {
                auto& pool = pools[turn % pools.size()];
                auto& at = cursor[turn % pools.size()];
                while (at < pool.size() && seen.count(pool[at].text)) ++at;
                if (at < pool.size()) {
                    seen.insert(pool[at].text);
                    ++turn;
                    return pool[at++];
                }
            }
            return std::nullopt;
        };

        const int wanted = kExemplarsPerAgent + per_agent;
        for (int k = 0; k < wanted; ++k) {
            auto inst = next();
            if (!inst) {
                throw TemplateGapError("domain " + to_string(domain) + " yields only " + std::to_string(k) +
                                       " distinct tasks, " + std::to_string(wanted) + " needed");
            }
            const bool exemplar = k < kExemplarsPerAgent;
            const std::string id = exemplar ? "ex-" + to_string(domain) + "-" + two_digits(k + 1)
                                            : to_string(domain) + "-" + four_digits(k - kExemplarsPerAgent + 1);
            TaskPrompt task = make_prompt(*inst, id);
            GoldSolution gold{id, inst->steps, gold_datapoints(inst->steps, sandbox)};
            if (exemplar) {
                out.exemplars.push_back(std::move(task));
                out.exemplar_golds.push_back(std::move(gold));
            } else {
                out.tasks.push_back(std::move(task));
                out.golds.push_back(std::move(gold));
            }
        }
        out.manifest.exemplar_counts[agent] = kExemplarsPerAgent;
        out.manifest.benchmark_counts[agent] = per_agent;
    }

    std::set<std::string> covered;
    for (const auto& g : out.exemplar_golds) {
        for (const auto& s : g.steps) covered.insert(s.tool_name);
    }
    for (const auto& tool : real_tool_names()) {
        if (!covered.count(tool)) throw TemplateGapError("no exemplar uses " + tool);
    }

    const ToolResolver resolves = [](const std::string& agent, const std::string& tool) {
        return tool_owner(tool) == agent;
    };
    for (const auto* split : {&out.tasks, &out.exemplars}) {
        const auto& golds = split == &out.tasks ? out.golds : out.exemplar_golds;
        auto errors = validate_dataset(*split, golds, resolves, sandbox.bounds());
        if (!errors.empty()) throw GeoError("InvalidDataset", errors.front().task_id + ": " + errors.front().message);
    }
    return out;
}

MemoryStores compile_memories(const std::vector<TaskPrompt>& exemplars, const std::vector<GoldSolution>& golds) {
    std::map<std::string, const GoldSolution*> by_id;
    for (const auto& g : golds) by_id[g.task_id] = &g;
    MemoryStores stores;
    for (const auto& task : exemplars) {
        auto it = by_id.find(task.id);
        if (it == by_id.end()) throw GeoError("InvalidDataset", "exemplar " + task.id + " has no gold");
        const auto& steps = it->second->steps;
        std::vector<std::string> agents;
        for (const auto& s : steps) {
            if (std::find(agents.begin(), agents.end(), s.agent_name) == agents.end()) agents.push_back(s.agent_name);
        }
        for (const auto& agent : agents) {
            ToolExemplar e{task.text, agent, {}};
            for (const auto& s : steps) {
                if (s.agent_name == agent) e.tools_used.push_back(s.tool_name);
            }
            stores.ts.add(std::move(e));
        }
        stores.wm.add({task.text, agents, gold_subtasks(steps)});
    }
    return stores;
}

std::string paraphrase_hook(const std::string& text, ModelBackend* backend, const BackendConfig& config, bool enabled) {
    if (!enabled || !backend) return text;
    const std::vector<ChatMessage> messages{
        ChatMessage::system("Reword the user's request. Keep every place name, date and number exactly as written. "
                            "Reply with the reworded request only."),
        ChatMessage::user(text)};
    Completion c = backend->complete(messages, {}, config);
    std::string out = c.message.content;
    const auto b = out.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return text;
    out = out.substr(b, out.find_last_not_of(" \t\r\n") - b + 1);
    return out;
}

std::filesystem::path dataset_dir(const std::filesystem::path& base, std::uint64_t seed) {
    return base / ("seed-" + std::to_string(seed));
}

void write_dataset(const std::filesystem::path& dir, const TaskDataset& data, const MemoryStores& stores,
                   const Sandbox& sandbox) {
    write_jsonl_from(dir / "tasks.jsonl", data.tasks);
    write_jsonl_from(dir / "golds.jsonl", data.golds);
    write_jsonl_from(dir / "exemplars.jsonl", data.exemplars);
    write_jsonl_from(dir / "exemplar_golds.jsonl", data.exemplar_golds);
    write_jsonl_from(dir / "ts_store.jsonl", stores.ts.exemplars());
    write_jsonl_from(dir / "wm_store.jsonl", stores.wm.exemplars());
    write_text_file(dir / "manifest.json", Json(data.manifest).dump(2) + "\n");
    write_text_file(dir / "fixture.json", sandbox.fixture_metadata().dump() + "\n");
}

TaskDataset load_dataset(const std::filesystem::path& dir) {
    TaskDataset d;
    d.tasks = read_jsonl_as<TaskPrompt>(dir / "tasks.jsonl");
    d.golds = read_jsonl_as<GoldSolution>(dir / "golds.jsonl");
    d.exemplars = read_jsonl_as<TaskPrompt>(dir / "exemplars.jsonl");
    d.exemplar_golds = read_jsonl_as<GoldSolution>(dir / "exemplar_golds.jsonl");
    d.manifest = Json::parse(read_text_file(dir / "manifest.json")).get<DatasetManifest>();
    return d;
}

}  // namespace geosquad
