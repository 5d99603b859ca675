// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "geosquad/agents/prompts.hpp"
#include "geosquad/backend/backend.hpp"
#include "geosquad/core/types.hpp"
#include "geosquad/registry/memory_store.hpp"
#include "geosquad/registry/tool_registry.hpp"
#include "geosquad/sandbox/workspace.hpp"

namespace geosquad {

inline constexpr int kDefaultMaxToolRounds = 8;
inline constexpr long kDigestTokenLimit = 200;

struct AgentSpec {
    std::string name;
    std::string system_template;
    std::vector<ToolSpec> toolkit;
    int max_tool_rounds = kDefaultMaxToolRounds;
    // The monolithic baseline: owns every tool, so a missing input is its own
    // problem rather than a dependency on someone else.
    bool monolith = false;
};

AgentSpec make_agent_spec(const ToolRegistry& registry, const std::string& agent, const PromptSet& prompts,
                          int max_tool_rounds = kDefaultMaxToolRounds);
AgentSpec make_single_agent_spec(const ToolRegistry& registry, const PromptSet& prompts,
                                 int max_tool_rounds = kDefaultMaxToolRounds);

struct AgentResult {
    std::string agent;
    AgentStatus status = AgentStatus::done;
    std::string summary;
    std::optional<DependencyHint> dependency_hint;
    std::vector<ToolCall> tool_calls;
    TokenUsage token_usage;
    std::vector<std::string> handles;  // datasets and results produced
    int tool_rounds = 0;
};

// Everything a subtask run needs besides the agent definition and the prompt.
struct AgentRuntime {
    const ToolRegistry& registry;
    ModelBackend& backend;
    const BackendConfig& config;
    Workspace& workspace;
    const ToolSelectionStore* ts = nullptr;     // null: TS disabled
    const WorkflowMemoryStore* wm = nullptr;    // only read for the monolith
};

// System message (role plus guidance) then user message (subprompt plus the
// context digest when there is one).
std::vector<ChatMessage> build_agent_prompt(const AgentSpec& agent, const std::string& subprompt,
                                            const std::string& guidance, const std::string& context);

// TS (and for the monolith, WM) guidance for a subprompt; "" when disabled
// or the store has nothing for the agent.
std::string agent_guidance(const AgentSpec& agent, const std::string& subprompt, const AgentRuntime& rt);

// Bounded function-calling loop. ContextOverflow propagates.
AgentResult run_subtask(const AgentSpec& agent, const std::string& subprompt, const std::string& context,
                        AgentRuntime& rt);

// Live-model dependency convention: "NEEDS_DEPENDENCY(Agent): reason".
std::optional<DependencyHint> parse_dependency_flag(const std::string& text);

// Status and handles of earlier results, newest kept first when trimming,
// capped at kDigestTokenLimit tokens.
std::string context_digest(const std::vector<AgentResult>& results);

}  // namespace geosquad
