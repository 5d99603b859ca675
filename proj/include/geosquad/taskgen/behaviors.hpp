// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "geosquad/backend/scripted_backend.hpp"
#include "geosquad/core/types.hpp"
#include "geosquad/taskgen/templates.hpp"

namespace geosquad {

// Phrases of the default prompt templates that scripted rules key on.
inline constexpr const char* kPlannerMarker = "Decompose user request";
inline constexpr const char* kSingleAgentMarker = "with access to all tools";
std::string agent_marker(const std::string& agent);

struct BehaviorOptions {
    // The planner leaves the Database subtasks out, so the first data step
    // fails with a missing dependency.
    bool omit_database = false;
    Perturbation perturbation;
};

// Gold-faithful playback of one task: the planner answers with the gold
// subtasks, each agent issues its gold calls one per turn and then a short
// summary, and the monolithic agent issues every gold call in order.
ScriptedBehavior compile_behavior(const TaskPrompt& task, const GoldSolution& gold, const BehaviorOptions& options = {});

// Behavior for a free-text request, when the text is an instance of one of
// the templates.
std::optional<ScriptedBehavior> behavior_for_prompt(const std::string& text, const std::vector<TaskTemplate>& templates,
                                                    const BehaviorOptions& options = {});

}  // namespace geosquad
