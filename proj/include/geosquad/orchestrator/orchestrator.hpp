// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "geosquad/agents/agent.hpp"
#include "geosquad/agents/prompts.hpp"
#include "geosquad/backend/backend.hpp"
#include "geosquad/core/types.hpp"
#include "geosquad/registry/memory_store.hpp"
#include "geosquad/registry/tool_registry.hpp"
#include "geosquad/sandbox/sandbox.hpp"
#include "geosquad/sandbox/workspace.hpp"

namespace geosquad {

struct StrategyConfig {
    Strategy strategy = Strategy::hybrid;
    int max_revisions = 3;
    int max_ledger_rounds = 20;
    bool ts_enabled = false;
    bool wm_enabled = false;
    int max_tool_rounds = kDefaultMaxToolRounds;

    void validate() const;
};

struct CompletionVerdict {
    bool complete = false;
    std::string missing;
    std::optional<std::string> revision_directive;
};

using EventSink = std::function<void(const Json& event)>;

// Shared, read-only inputs of a run plus the backend it talks to.
struct OrchestratorContext {
    const ToolRegistry& registry;
    ModelBackend& backend;
    const BackendConfig& config;
    const PromptSet& prompts;
    const ToolSelectionStore* ts = nullptr;
    const WorkflowMemoryStore* wm = nullptr;
    EventSink events;
};

// Per-position outcome of the current schedule.
struct ScheduleState {
    Schedule schedule;
    std::vector<std::optional<AgentResult>> results;  // one slot per subtask

    // Index of the first position that is not done, or size when all are.
    std::size_t first_open() const;
};

// Planner call (one reprompt on unreadable output). Throws UnparseableSchedule.
Schedule plan(const TaskPrompt& task, const OrchestratorContext& ctx, TokenUsage& usage);

// Runs subtasks from `from` onward, halting after the first result that is
// not done. Results land in state.results and history.
void execute_schedule(ScheduleState& state, std::size_t from, const TaskPrompt& task, const OrchestratorContext& ctx,
                      Workspace& ws, const StrategyConfig& strategy, std::vector<AgentResult>& history,
                      ExecutionTrace& trace);

bool requests_plot(const std::string& text);

// The scripted-run rule: every position done, plus a Map step when the
// request asks for a plot.
CompletionVerdict rule_verdict(const TaskPrompt& task, const ScheduleState& state);

// One model call; scripted backends get rule_verdict for the answer.
CompletionVerdict check_completion(const TaskPrompt& task, const ScheduleState& state, const OrchestratorContext& ctx,
                                   TokenUsage& usage);

// Next revision. A dependency hint on the failing step inserts the hinted
// agent in front of it; otherwise the model (or the fallback rule) supplies
// the remaining steps. Throws GeoError("MaxRevisions") at the limit and
// GeoError("ContractError") on a complete verdict.
Schedule revise(const ScheduleState& state, const CompletionVerdict& verdict, const TaskPrompt& task,
                const OrchestratorContext& ctx, int max_revisions, TokenUsage& usage);

// Never throws for run-time failures: they become the trace's terminal state.
ExecutionTrace run_task(const TaskPrompt& task, const StrategyConfig& strategy, const OrchestratorContext& ctx,
                        Workspace& ws);

}  // namespace geosquad
