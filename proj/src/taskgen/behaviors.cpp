// SPDX-License-Identifier: Apache-2.0
#include "geosquad/taskgen/behaviors.hpp"

#include <algorithm>

#include "geosquad/orchestrator/schedule_parser.hpp"

namespace geosquad {

std::string agent_marker(const std::string& agent) { return "acting as the " + agent + " agent"; }

ScriptedBehavior compile_behavior(const TaskPrompt& task, const GoldSolution& gold, const BehaviorOptions& options) {
    ScriptedBehavior b;
    b.perturbation = options.perturbation;
    const auto subtasks = gold_subtasks(gold.steps);
    const auto bounds = subtask_boundaries(gold.steps);

    std::vector<SubTask> planned;
    for (const auto& st : subtasks) {
        if (options.omit_database && st.agent == "Database") continue;
        planned.push_back(st);
    }
    if (planned.empty()) planned = subtasks;  // nothing left to omit around
    b.rules.push_back({kPlannerMarker, task.text, {ScriptedReply{{}, format_schedule(planned)}}});

    for (std::size_t k = 0; k < subtasks.size(); ++k) {
        const auto& st = subtasks[k];
        const bool repeated = std::count_if(subtasks.begin(), subtasks.end(),
                                            [&](const SubTask& o) { return o.agent == st.agent; }) > 1;
        ScriptedRule rule{agent_marker(st.agent), repeated ? st.prompt : std::string{}, {}};
        for (std::size_t i = bounds[k]; i < bounds[k + 1]; ++i) {
            const auto& g = gold.steps[i];
            rule.replies.push_back({{{g.tool_name, g.canonical_args, static_cast<int>(i)}}, ""});
        }
        rule.replies.push_back({{}, st.agent + " done"});
        b.rules.push_back(std::move(rule));
    }

    ScriptedRule single{kSingleAgentMarker, task.text, {}};
    for (std::size_t i = 0; i < gold.steps.size(); ++i) {
        const auto& g = gold.steps[i];
        single.replies.push_back({{{g.tool_name, g.canonical_args, static_cast<int>(i)}}, ""});
    }
    single.replies.push_back({{}, "All steps done"});
    b.rules.push_back(std::move(single));
    return b;
}

std::optional<ScriptedBehavior> behavior_for_prompt(const std::string& text, const std::vector<TaskTemplate>& templates,
                                                    const BehaviorOptions& options) {
    auto inst = match_prompt(text, templates);
    if (!inst) return std::nullopt;
    TaskPrompt task;
    task.id = "chat";
    task.domain = inst->domain;
    task.text = text;
    GoldSolution gold{"chat", inst->steps, {}};
    return compile_behavior(task, gold, options);
}

}  // namespace geosquad
