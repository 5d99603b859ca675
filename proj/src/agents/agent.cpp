// SPDX-License-Identifier: Apache-2.0
#include "geosquad/agents/agent.hpp"

#include <algorithm>
#include <map>
#include <regex>

#include "geosquad/backend/tokenizer.hpp"
#include "geosquad/sandbox/domain_tools.hpp"

namespace geosquad {

namespace {

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string canonical_agent(const std::string& name) {
    auto d = domain_of_agent(name);
    return d ? agent_name(*d) : name;
}

// Dependency target for a dependency-class error, "" for other errors.
std::string dependency_target(const std::string& code, const Json& payload) {
    if (code == "MissingProduct") return payload.value("needs", std::string{"Database"});
    if (code == "UnknownRegion") return "Database";
    return {};
}

void collect_handles(const Json& payload, std::vector<std::string>& handles) {
    for (const char* key : {"dataset", "result"}) {
        if (payload.contains(key) && payload[key].is_string()) {
            const auto h = payload[key].get<std::string>();
            if (std::find(handles.begin(), handles.end(), h) == handles.end()) handles.push_back(h);
        }
    }
}

ToolCall record_call(const std::string& agent, const std::string& tool, const Json& args, ToolResult r) {
    ToolCall c;
    c.agent = agent;
    c.tool = tool;
    c.args = args;
    c.result_status = r.status;
    c.result_payload = std::move(r.payload);
    c.accessed = std::move(r.accessed);
    return c;
}

}  // namespace

AgentSpec make_agent_spec(const ToolRegistry& registry, const std::string& agent, const PromptSet& prompts,
                          int max_tool_rounds) {
    AgentSpec spec;
    spec.name = canonical_agent(agent);
    spec.system_template = prompts.agent_system;
    spec.toolkit = registry.toolkit(spec.name);
    spec.max_tool_rounds = max_tool_rounds;
    if (spec.toolkit.empty()) throw GeoError("UnknownAgent", "no tools registered for " + spec.name);
    return spec;
}

AgentSpec make_single_agent_spec(const ToolRegistry& registry, const PromptSet& prompts, int max_tool_rounds) {
    AgentSpec spec;
    spec.name = "Geo";
    spec.system_template = prompts.single_system;
    spec.toolkit = registry.all_tools();
    spec.max_tool_rounds = max_tool_rounds;
    spec.monolith = true;
    return spec;
}

std::vector<ChatMessage> build_agent_prompt(const AgentSpec& agent, const std::string& subprompt,
                                            const std::string& guidance, const std::string& context) {
    std::string system = trim(fill_template(agent.system_template, {{"agent", agent.name}, {"guidance", guidance}}));
    std::string user = "Task: " + subprompt;
    if (!context.empty()) user += "\nContext: " + context;
    return {ChatMessage::system(std::move(system)), ChatMessage::user(std::move(user))};
}

std::string agent_guidance(const AgentSpec& agent, const std::string& subprompt, const AgentRuntime& rt) {
    std::vector<ToolHit> ts_hits;
    std::vector<WorkflowHit> wm_hits;
    if (rt.ts) {
        if (agent.monolith) {
            if (rt.ts->size() > 0) ts_hits = rt.ts->retrieve_any(subprompt, kDefaultToolK);
        } else if (rt.ts->size_for(agent.name) > 0) {
            ts_hits = rt.ts->retrieve(agent.name, subprompt, kDefaultToolK);
        }
    }
    if (agent.monolith && rt.wm && rt.wm->size() > 0) wm_hits = rt.wm->retrieve(subprompt, kDefaultWorkflowK);
    return format_guidance(ts_hits, wm_hits);
}

std::optional<DependencyHint> parse_dependency_flag(const std::string& text) {
    static const std::regex re(R"(NEEDS_DEPENDENCY\(\s*([A-Za-z]+)\s*\)\s*:?\s*(.*))");
    std::smatch m;
    if (!std::regex_search(text, m, re)) return std::nullopt;
    const auto domain = domain_of_agent(m[1].str());
    if (!domain) return std::nullopt;
    std::string reason = trim(m[2].str());
    const auto nl = reason.find('\n');
    if (nl != std::string::npos) reason = trim(reason.substr(0, nl));
    return DependencyHint{agent_name(*domain), reason.empty() ? "dependency flagged" : reason};
}

AgentResult run_subtask(const AgentSpec& agent, const std::string& subprompt, const std::string& context,
                        AgentRuntime& rt) {
    AgentResult result;
    result.agent = agent.name;
    auto messages = build_agent_prompt(agent, subprompt, agent_guidance(agent, subprompt, rt), context);
    std::map<std::string, int> strikes;  // malformed-argument failures per tool

    auto finish = [&](AgentStatus status, std::string summary, std::optional<DependencyHint> hint = std::nullopt) {
        result.status = status;
        result.summary = std::move(summary);
        result.dependency_hint = std::move(hint);
        return result;
    };

    while (true) {
        Completion c = rt.backend.complete(messages, agent.toolkit, rt.config);
        result.token_usage.add(c.usage);
        const ChatMessage reply = c.message;
        messages.push_back(reply);

        if (!reply.has_tool_calls()) {
            if (auto hint = parse_dependency_flag(reply.content)) {
                if (agent.monolith || hint->agent == agent.name) return finish(AgentStatus::failed, trim(reply.content));
                return finish(AgentStatus::needs_dependency, trim(reply.content), hint);
            }
            const std::string text = trim(reply.content);
            return finish(AgentStatus::done, text.empty() ? "done" : text);
        }
        if (result.tool_rounds >= agent.max_tool_rounds) {
            return finish(AgentStatus::failed, "tool rounds exhausted after " + std::to_string(result.tool_rounds));
        }
        ++result.tool_rounds;

        for (const auto& call : reply.tool_calls) {
            const bool in_toolkit = std::any_of(agent.toolkit.begin(), agent.toolkit.end(),
                                                [&](const ToolSpec& t) { return t.name == call.name; });
            const ToolSpec* spec = nullptr;
            for (const auto& t : agent.toolkit) {
                if (t.name == call.name) spec = &t;
            }
            const std::string owner = spec ? spec->agent : agent.name;

            Json args;
            bool parsed = true;
            try {
                args = Json::parse(call.arguments.empty() ? "{}" : call.arguments);
                if (!args.is_object()) parsed = false;
            } catch (const Json::parse_error&) {
                parsed = false;
            }

            ToolResult r;
            if (!in_toolkit) {
                r = tool_error("UnknownTool", "'" + call.name + "' is not in the " + agent.name + " toolkit");
            } else if (!parsed) {
                r = tool_error("InvalidArguments", "arguments are not a JSON object");
                args = Json::object();
            } else {
                const RegisteredTool* tool = rt.registry.find(owner, call.name);
                r = tool ? tool->handler(args, rt.workspace)
                         : tool_error("UnknownTool", "'" + call.name + "' is not registered");
            }
            // Accesses go to the run's recorder whatever the handler did.
            rt.workspace.recorder().record(r.accessed);
            ToolCall recorded = record_call(owner, call.name, args, r);
            const std::string payload_text = recorded.result_payload;
            result.tool_calls.push_back(std::move(recorded));

            if (r.status == ToolStatus::ok) {
                try {
                    collect_handles(Json::parse(payload_text), result.handles);
                } catch (const Json::parse_error&) {
                }
                messages.push_back(ChatMessage::tool(call.id, payload_text));
                continue;
            }

            const std::string code = payload_error_code(payload_text);
            Json payload = Json::parse(payload_text, nullptr, false);
            if (code == "InvalidArguments") {
                if (++strikes[call.name] >= 2) {
                    return finish(AgentStatus::failed, "malformed arguments for " + call.name + " twice");
                }
                messages.push_back(ChatMessage::tool(
                    call.id, payload_text + "\nFix the arguments and call " + call.name + " again."));
                continue;
            }
            const std::string target = dependency_target(code, payload);
            if (!target.empty() && !agent.monolith) {
                const std::string reason = payload.value("message", code);
                if (target == agent.name) return finish(AgentStatus::failed, code + ": " + reason);
                return finish(AgentStatus::needs_dependency, "NEEDS_DEPENDENCY(" + target + "): " + reason,
                              DependencyHint{target, reason});
            }
            messages.push_back(ChatMessage::tool(call.id, payload_text));
        }
    }
}

std::string context_digest(const std::vector<AgentResult>& results) {
    std::vector<std::string> lines;
    for (const auto& r : results) {
        std::string line = r.agent + " " + to_string(r.status);
        if (!r.handles.empty()) {
            line += "; handles:";
            for (const auto& h : r.handles) line += " " + h;
        }
        lines.push_back(std::move(line));
    }
    // Newest lines win when the digest has to shrink.
    std::string out;
    long used = 0;
    for (std::size_t i = lines.size(); i-- > 0;) {
        const long cost = count_tokens(lines[i]) + 1;
        if (used + cost > kDigestTokenLimit) break;
        out = lines[i] + (out.empty() ? "" : "; ") + out;
        used += cost;
    }
    return out;
}

}  // namespace geosquad
