// SPDX-License-Identifier: Apache-2.0
#include "geosquad/core/json_io.hpp"

#include <fstream>
#include <sstream>

namespace geosquad {

void to_json(Json& j, const Cell& c) { j = Json::array({c.row, c.col}); }
void from_json(const Json& j, Cell& c) {
    c.row = j.at(0).get<int>();
    c.col = j.at(1).get<int>();
}

void to_json(Json& j, const DataPointKey& k) {
    j = Json{{"product", to_string(k.product)}, {"cell", k.cell}, {"date", k.date}};
}
void from_json(const Json& j, DataPointKey& k) {
    k.product = product_from_string(j.at("product").get<std::string>());
    k.cell = j.at("cell").get<Cell>();
    k.date = j.at("date").get<std::string>();
}

void to_json(Json& j, const DateRange& d) { j = Json::array({d.first, d.last}); }
void from_json(const Json& j, DateRange& d) {
    d.first = j.at(0).get<std::string>();
    d.last = j.at(1).get<std::string>();
}

void to_json(Json& j, const TaskPrompt& t) {
    j = Json{{"id", t.id}, {"domain", to_string(t.domain)}, {"text", t.text}, {"region", t.region}};
    j["date_range"] = t.date_range ? Json(*t.date_range) : Json(nullptr);
}
void from_json(const Json& j, TaskPrompt& t) {
    t.id = j.at("id").get<std::string>();
    t.domain = domain_from_string(j.at("domain").get<std::string>());
    t.text = j.at("text").get<std::string>();
    t.region = j.value("region", std::string{});
    if (j.contains("date_range") && !j.at("date_range").is_null()) {
        t.date_range = j.at("date_range").get<DateRange>();
    } else {
        t.date_range.reset();
    }
}

void to_json(Json& j, const GoldStep& s) {
    j = Json{{"agent_name", s.agent_name}, {"tool_name", s.tool_name}, {"canonical_args", s.canonical_args}};
}
void from_json(const Json& j, GoldStep& s) {
    s.agent_name = j.at("agent_name").get<std::string>();
    s.tool_name = j.at("tool_name").get<std::string>();
    s.canonical_args = j.value("canonical_args", Json::object());
}

void to_json(Json& j, const GoldSolution& g) {
    j = Json{{"task_id", g.task_id}, {"steps", g.steps}, {"gold_datapoints", g.gold_datapoints}};
}
void from_json(const Json& j, GoldSolution& g) {
    g.task_id = j.at("task_id").get<std::string>();
    g.steps = j.at("steps").get<std::vector<GoldStep>>();
    g.gold_datapoints = j.value("gold_datapoints", std::vector<DataPointKey>{});
}

void to_json(Json& j, const ToolParam& p) {
    j = Json{{"name", p.name}, {"type", p.type}, {"required", p.required}};
}
void from_json(const Json& j, ToolParam& p) {
    p.name = j.at("name").get<std::string>();
    p.type = j.at("type").get<std::string>();
    p.required = j.value("required", true);
}

void to_json(Json& j, const ToolSpec& t) {
    j = Json{{"name", t.name},
             {"agent", t.agent},
             {"description", t.description},
             {"params", t.params},
             {"schema_token_cost", t.schema_token_cost}};
}
void from_json(const Json& j, ToolSpec& t) {
    t.name = j.at("name").get<std::string>();
    t.agent = j.at("agent").get<std::string>();
    t.description = j.value("description", std::string{});
    t.params = j.value("params", std::vector<ToolParam>{});
    t.schema_token_cost = j.value("schema_token_cost", 0);
}

void to_json(Json& j, const ToolCall& c) {
    j = Json{{"agent", c.agent},
             {"tool", c.tool},
             {"args", c.args},
             {"result_status", c.result_status == ToolStatus::ok ? "ok" : "error"},
             {"result_payload", c.result_payload},
             {"accessed", c.accessed}};
}
void from_json(const Json& j, ToolCall& c) {
    c.agent = j.at("agent").get<std::string>();
    c.tool = j.at("tool").get<std::string>();
    c.args = j.value("args", Json::object());
    c.result_status = j.at("result_status").get<std::string>() == "ok" ? ToolStatus::ok : ToolStatus::error;
    c.result_payload = j.value("result_payload", std::string{});
    c.accessed = j.value("accessed", std::vector<DataPointKey>{});
}

void to_json(Json& j, const SubTask& s) { j = Json{{"agent", s.agent}, {"prompt", s.prompt}}; }
void from_json(const Json& j, SubTask& s) {
    s.agent = j.at("agent").get<std::string>();
    s.prompt = j.at("prompt").get<std::string>();
}

void to_json(Json& j, const Schedule& s) { j = Json{{"subtasks", s.subtasks}, {"revision", s.revision}}; }
void from_json(const Json& j, Schedule& s) {
    s.subtasks = j.at("subtasks").get<std::vector<SubTask>>();
    s.revision = j.value("revision", 0);
}

void to_json(Json& j, const CallUsage& u) {
    j = Json{{"prompt_tokens", u.prompt_tokens},
             {"completion_tokens", u.completion_tokens},
             {"total_tokens", u.total_tokens}};
}
void from_json(const Json& j, CallUsage& u) {
    u.prompt_tokens = j.at("prompt_tokens").get<long>();
    u.completion_tokens = j.at("completion_tokens").get<long>();
    u.total_tokens = j.at("total_tokens").get<long>();
}

void to_json(Json& j, const TokenUsage& u) {
    j = Json{{"calls", u.calls},
             {"prompt_tokens", u.prompt_tokens},
             {"completion_tokens", u.completion_tokens},
             {"total_tokens", u.total_tokens}};
}
void from_json(const Json& j, TokenUsage& u) {
    u.calls = j.value("calls", std::vector<CallUsage>{});
    u.prompt_tokens = j.at("prompt_tokens").get<long>();
    u.completion_tokens = j.at("completion_tokens").get<long>();
    u.total_tokens = j.at("total_tokens").get<long>();
}

void to_json(Json& j, const DependencyHint& h) { j = Json{{"agent", h.agent}, {"reason", h.reason}}; }
void from_json(const Json& j, DependencyHint& h) {
    h.agent = j.at("agent").get<std::string>();
    h.reason = j.at("reason").get<std::string>();
}

void to_json(Json& j, const StepRecord& r) {
    j = Json{{"revision", r.revision},
             {"position", r.position},
             {"agent", r.agent},
             {"status", to_string(r.status)},
             {"summary", r.summary}};
    j["dependency_hint"] = r.dependency_hint ? Json(*r.dependency_hint) : Json(nullptr);
}
void from_json(const Json& j, StepRecord& r) {
    r.revision = j.at("revision").get<int>();
    r.position = j.at("position").get<int>();
    r.agent = j.at("agent").get<std::string>();
    r.status = agent_status_from_string(j.at("status").get<std::string>());
    r.summary = j.value("summary", std::string{});
    if (j.contains("dependency_hint") && !j.at("dependency_hint").is_null()) {
        r.dependency_hint = j.at("dependency_hint").get<DependencyHint>();
    } else {
        r.dependency_hint.reset();
    }
}

void to_json(Json& j, const ExecutionTrace& t) {
    j = Json{{"task_id", t.task_id},
             {"strategy", to_string(t.strategy)},
             {"executed_steps", t.executed_steps},
             {"schedules", t.schedules},
             {"step_records", t.step_records},
             {"token_usage", t.token_usage},
             {"final_answer", t.final_answer},
             {"terminal", to_string(t.terminal)},
             {"error", t.error}};
}
void from_json(const Json& j, ExecutionTrace& t) {
    t.task_id = j.at("task_id").get<std::string>();
    t.strategy = strategy_from_string(j.at("strategy").get<std::string>());
    t.executed_steps = j.value("executed_steps", std::vector<ToolCall>{});
    t.schedules = j.value("schedules", std::vector<Schedule>{});
    t.step_records = j.value("step_records", std::vector<StepRecord>{});
    t.token_usage = j.at("token_usage").get<TokenUsage>();
    t.final_answer = j.value("final_answer", std::string{});
    t.terminal = terminal_from_string(j.at("terminal").get<std::string>());
    t.error = j.value("error", std::string{});
}

std::vector<Json> read_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw GeoError("IoError", "cannot open " + path.string());
    std::vector<Json> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            rows.push_back(Json::parse(line));
        } catch (const Json::parse_error& e) {
            throw GeoError("ParseError", path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return rows;
}

void write_jsonl(const std::filesystem::path& path, const std::vector<Json>& rows) {
    std::ostringstream out;
    for (const auto& row : rows) out << row.dump() << '\n';
    write_text_file(path, out.str());
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw GeoError("IoError", "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw GeoError("IoError", "cannot write " + path.string());
    out << text;
}

}  // namespace geosquad
