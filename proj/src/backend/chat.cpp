// SPDX-License-Identifier: Apache-2.0
#include "geosquad/backend/chat.hpp"

#include "geosquad/backend/tokenizer.hpp"

namespace geosquad {

std::string to_string(Role r) {
    switch (r) {
        case Role::system: return "system";
        case Role::user: return "user";
        case Role::assistant: return "assistant";
        case Role::tool: return "tool";
    }
    return "user";
}

Role role_from_string(std::string_view s) {
    if (s == "system") return Role::system;
    if (s == "user") return Role::user;
    if (s == "assistant") return Role::assistant;
    if (s == "tool") return Role::tool;
    throw GeoError("InvalidValue", "unknown role '" + std::string(s) + "'");
}

void to_json(Json& j, const ToolCallRequest& c) {
    j = Json{{"id", c.id}, {"name", c.name}, {"arguments", c.arguments}};
}

void from_json(const Json& j, ToolCallRequest& c) {
    c.id = j.value("id", std::string{});
    c.name = j.at("name").get<std::string>();
    c.arguments = j.value("arguments", std::string{"{}"});
}

void to_json(Json& j, const ChatMessage& m) {
    j = Json{{"role", to_string(m.role)}, {"content", m.content}};
    if (!m.tool_calls.empty()) j["tool_calls"] = m.tool_calls;
    if (m.tool_call_id) j["tool_call_id"] = *m.tool_call_id;
}

void from_json(const Json& j, ChatMessage& m) {
    m.role = role_from_string(j.at("role").get<std::string>());
    m.content = j.value("content", std::string{});
    m.tool_calls = j.value("tool_calls", std::vector<ToolCallRequest>{});
    if (j.contains("tool_call_id")) {
        m.tool_call_id = j.at("tool_call_id").get<std::string>();
    } else {
        m.tool_call_id.reset();
    }
}

void BackendConfig::validate() const {
    if (kind == BackendKind::http && (!endpoint || endpoint->empty())) {
        throw GeoError("InvalidConfig", "http backend requires an endpoint");
    }
    if (context_budget < 512) throw GeoError("InvalidConfig", "context_budget must be at least 512");
    if (max_completion_tokens <= 0) throw GeoError("InvalidConfig", "max_completion_tokens must be positive");
    if (max_in_flight < 1) throw GeoError("InvalidConfig", "max_in_flight must be at least 1");
    if (max_attempts < 1) throw GeoError("InvalidConfig", "max_attempts must be at least 1");
}

long message_tokens(const ChatMessage& m) {
    long n = count_tokens(m.content);
    for (const auto& c : m.tool_calls) n += count_tokens(c.name) + count_tokens(c.arguments);
    return n;
}

long messages_tokens(const std::vector<ChatMessage>& messages) {
    long n = 0;
    for (const auto& m : messages) n += message_tokens(m);
    return n;
}

}  // namespace geosquad
