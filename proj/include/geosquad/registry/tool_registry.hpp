// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "geosquad/core/types.hpp"

namespace geosquad {

class Workspace;

struct ToolResult {
    ToolStatus status = ToolStatus::ok;
    std::string payload;
    std::vector<DataPointKey> accessed;
};

// Error result whose payload is {"error": code, "message": message, ...extra}.
ToolResult tool_error(const std::string& code, const std::string& message, Json extra = Json::object());
ToolResult tool_ok(const Json& payload, std::vector<DataPointKey> accessed = {});

// Error code carried by an error payload, or "" when there is none.
std::string payload_error_code(const std::string& payload);

using ToolHandler = std::function<ToolResult(const Json& args, Workspace& ws)>;

struct RegisteredTool {
    ToolSpec spec;
    ToolHandler handler;
    bool filler = false;
};

// Agent toolkits. Built once at startup and read-only afterwards, so
// concurrent lookups need no locking.
class ToolRegistry {
public:
    // Computes spec.schema_token_cost. Throws DuplicateTool.
    void register_tool(ToolSpec spec, ToolHandler handler, bool filler = false);

    const RegisteredTool* find(const std::string& agent, const std::string& name) const;
    // Unique match across all agents, nullptr when absent or ambiguous.
    const RegisteredTool* find_by_name(const std::string& name) const;
    bool contains(const std::string& agent, const std::string& name) const { return find(agent, name) != nullptr; }

    std::vector<ToolSpec> toolkit(const std::string& agent) const;
    std::vector<ToolSpec> all_tools() const;
    std::vector<ToolSpec> all_tools(const std::vector<std::string>& agents) const;
    std::vector<std::string> agents() const;
    std::size_t size() const { return tools_.size(); }
    std::size_t real_tool_count() const;
    std::size_t count_for(const std::string& agent) const;

    // [{name, agent, description, schema_token_cost, filler}] in registration order.
    Json manifest() const;

private:
    std::vector<RegisteredTool> tools_;
    std::map<std::pair<std::string, std::string>, std::size_t> index_;
    std::vector<std::string> agent_order_;
};

}  // namespace geosquad
