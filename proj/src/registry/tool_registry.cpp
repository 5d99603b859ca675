// SPDX-License-Identifier: Apache-2.0
#include "geosquad/registry/tool_registry.hpp"

#include <algorithm>

#include "geosquad/backend/schema_render.hpp"

namespace geosquad {

ToolResult tool_error(const std::string& code, const std::string& message, Json extra) {
    Json payload = std::move(extra);
    if (!payload.is_object()) payload = Json::object();
    payload["error"] = code;
    payload["message"] = message;
    return {ToolStatus::error, payload.dump(), {}};
}

ToolResult tool_ok(const Json& payload, std::vector<DataPointKey> accessed) {
    normalize_keys(accessed);
    return {ToolStatus::ok, payload.dump(), std::move(accessed)};
}

std::string payload_error_code(const std::string& payload) {
    try {
        const Json j = Json::parse(payload);
        if (j.is_object() && j.contains("error") && j["error"].is_string()) return j["error"].get<std::string>();
    } catch (const Json::exception&) {
    }
    return {};
}

void ToolRegistry::register_tool(ToolSpec spec, ToolHandler handler, bool filler) {
    const auto key = std::make_pair(spec.agent, spec.name);
    if (index_.count(key)) throw DuplicateTool(spec.agent, spec.name);
    spec.schema_token_cost = schema_token_cost(spec);
    if (std::find(agent_order_.begin(), agent_order_.end(), spec.agent) == agent_order_.end()) {
        agent_order_.push_back(spec.agent);
    }
    index_.emplace(key, tools_.size());
    tools_.push_back({std::move(spec), std::move(handler), filler});
}

const RegisteredTool* ToolRegistry::find(const std::string& agent, const std::string& name) const {
    auto it = index_.find({agent, name});
    return it == index_.end() ? nullptr : &tools_[it->second];
}

const RegisteredTool* ToolRegistry::find_by_name(const std::string& name) const {
    const RegisteredTool* hit = nullptr;
    for (const auto& t : tools_) {
        if (t.spec.name != name) continue;
        if (hit) return nullptr;
        hit = &t;
    }
    return hit;
}

std::vector<ToolSpec> ToolRegistry::toolkit(const std::string& agent) const {
    std::vector<ToolSpec> out;
    for (const auto& t : tools_) {
        if (t.spec.agent == agent) out.push_back(t.spec);
    }
    return out;
}

std::vector<ToolSpec> ToolRegistry::all_tools() const {
    std::vector<ToolSpec> out;
    out.reserve(tools_.size());
    for (const auto& t : tools_) out.push_back(t.spec);
    return out;
}

std::vector<ToolSpec> ToolRegistry::all_tools(const std::vector<std::string>& agents) const {
    std::vector<ToolSpec> out;
    for (const auto& t : tools_) {
        if (std::find(agents.begin(), agents.end(), t.spec.agent) != agents.end()) out.push_back(t.spec);
    }
    return out;
}

std::vector<std::string> ToolRegistry::agents() const { return agent_order_; }

std::size_t ToolRegistry::real_tool_count() const {
    return static_cast<std::size_t>(std::count_if(tools_.begin(), tools_.end(), [](const auto& t) { return !t.filler; }));
}

std::size_t ToolRegistry::count_for(const std::string& agent) const {
    return static_cast<std::size_t>(
        std::count_if(tools_.begin(), tools_.end(), [&](const auto& t) { return t.spec.agent == agent; }));
}

Json ToolRegistry::manifest() const {
    Json out = Json::array();
    for (const auto& t : tools_) {
        out.push_back(Json{{"name", t.spec.name},
                           {"agent", t.spec.agent},
                           {"description", t.spec.description},
                           {"schema_token_cost", t.spec.schema_token_cost},
                           {"filler", t.filler}});
    }
    return out;
}

}  // namespace geosquad
