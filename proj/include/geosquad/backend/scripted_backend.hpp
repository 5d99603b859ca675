// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "geosquad/backend/backend.hpp"

namespace geosquad {

struct ScriptedToolCall {
    std::string name;
    Json args = Json::object();
    // Gold step this call reproduces; perturbations address calls by it.
    // Negative means "assign from table order".
    int step = -1;
    bool operator==(const ScriptedToolCall&) const = default;
};

// One assistant turn: tool calls, or final text when `tool_calls` is empty.
struct ScriptedReply {
    std::vector<ScriptedToolCall> tool_calls;
    std::string text;
    bool operator==(const ScriptedReply&) const = default;
};

// A rule fires when the first system message contains `system_contains` and
// the latest user message contains `user_contains` (empty matches anything).
// The n-th assistant turn after that user message plays replies[n].
struct ScriptedRule {
    std::string system_contains;
    std::string user_contains;
    std::vector<ScriptedReply> replies;
    bool operator==(const ScriptedRule&) const = default;
};

struct Perturbation {
    enum class Kind { none, drop_step, swap_steps, wrong_args };
    Kind kind = Kind::none;
    int step = 0;        // drop_step k / swap_steps i; negative counts from the end
    int other_step = 0;  // swap_steps j
    std::string tool;    // wrong_args target
    bool operator==(const Perturbation&) const = default;
};

// Parses "none", "drop_step:K", "swap_steps:I,J", "wrong_args:TOOL".
Perturbation parse_perturbation(std::string_view text);
std::string to_string(const Perturbation& p);

struct ScriptedBehavior {
    std::vector<ScriptedRule> rules;
    std::string default_reply = "done";
    Perturbation perturbation;
    bool operator==(const ScriptedBehavior&) const = default;
};

void to_json(Json& j, const ScriptedBehavior& b);
void from_json(const Json& j, ScriptedBehavior& b);

// Rule table with step indices assigned and the perturbation applied.
ScriptedBehavior apply_perturbation(const ScriptedBehavior& behavior);

// Replays a behavior table. Every reply is a pure function of the message
// history and the table.
class ScriptedBackend : public ModelBackend {
public:
    explicit ScriptedBackend(ScriptedBehavior behavior);

    Completion complete(const std::vector<ChatMessage>& messages, const std::vector<ToolSpec>& tools,
                        const BackendConfig& config) override;
    bool scripted() const override { return true; }

    const ScriptedBehavior& effective_behavior() const { return behavior_; }

private:
    ScriptedBehavior behavior_;
};

}  // namespace geosquad
