// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "geosquad/core/types.hpp"

namespace geosquad {

enum class Role { system, user, assistant, tool };
std::string to_string(Role r);
Role role_from_string(std::string_view s);

struct ToolCallRequest {
    std::string id;
    std::string name;
    std::string arguments;  // raw JSON text as produced by the model
    bool operator==(const ToolCallRequest&) const = default;
};

struct ChatMessage {
    Role role = Role::user;
    std::string content;
    std::vector<ToolCallRequest> tool_calls;
    std::optional<std::string> tool_call_id;

    static ChatMessage system(std::string text) { return {Role::system, std::move(text), {}, std::nullopt}; }
    static ChatMessage user(std::string text) { return {Role::user, std::move(text), {}, std::nullopt}; }
    static ChatMessage assistant(std::string text, std::vector<ToolCallRequest> calls = {}) {
        return {Role::assistant, std::move(text), std::move(calls), std::nullopt};
    }
    static ChatMessage tool(std::string call_id, std::string text) {
        return {Role::tool, std::move(text), {}, std::move(call_id)};
    }

    bool has_tool_calls() const { return !tool_calls.empty(); }
    bool operator==(const ChatMessage&) const = default;
};

void to_json(Json& j, const ToolCallRequest& c);
void from_json(const Json& j, ToolCallRequest& c);
void to_json(Json& j, const ChatMessage& m);
void from_json(const Json& j, ChatMessage& m);

enum class BackendKind { scripted, http };

struct BackendConfig {
    BackendKind kind = BackendKind::scripted;
    std::optional<std::string> endpoint;
    std::string model_name = "scripted";
    long context_budget = 32768;
    long max_completion_tokens = 1024;
    double temperature = 0.0;
    int max_in_flight = 4;
    int max_attempts = 3;
    int backoff_ms = 500;

    // Throws GeoError("InvalidConfig") when an invariant does not hold.
    void validate() const;
};

// Raised when a call's input would exceed the context budget.
class ContextOverflow : public GeoError {
public:
    ContextOverflow(long required, long budget)
        : GeoError("ContextOverflow", "input needs " + std::to_string(required) + " tokens, budget is " +
                                          std::to_string(budget)),
          required_(required),
          budget_(budget) {}
    long required() const noexcept { return required_; }
    long budget() const noexcept { return budget_; }

private:
    long required_;
    long budget_;
};

class TransportError : public GeoError {
public:
    explicit TransportError(const std::string& message) : GeoError("TransportError", message) {}
};

// Token cost of one message: content plus every tool call name and argument text.
long message_tokens(const ChatMessage& m);
long messages_tokens(const std::vector<ChatMessage>& messages);

}  // namespace geosquad
