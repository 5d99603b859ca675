// SPDX-License-Identifier: Apache-2.0
#include "geosquad/orchestrator/orchestrator.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "geosquad/backend/chat.hpp"
#include "geosquad/core/json_io.hpp"
#include "geosquad/orchestrator/schedule_parser.hpp"

namespace geosquad {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
    return out;
}

void emit(const OrchestratorContext& ctx, Json event) {
    if (ctx.events) ctx.events(event);
}

Json schedule_event(const Schedule& s) {
    return Json{{"type", "schedule"}, {"revision", s.revision}, {"subtasks", s.subtasks}};
}

Completion call(const OrchestratorContext& ctx, std::vector<ChatMessage> messages, TokenUsage& usage) {
    Completion c = ctx.backend.complete(messages, {}, ctx.config);
    usage.add(c.usage);
    return c;
}

std::string result_line(const AgentResult& r) { return r.agent + " " + to_string(r.status) + ": " + r.summary; }

std::string final_answer(const std::vector<AgentResult>& history) {
    std::vector<std::string> lines;
    for (const auto& r : history) {
        if (r.status == AgentStatus::done) lines.push_back(r.agent + ": " + r.summary);
    }
    return join(lines, "\n");
}

SubTask dependency_subtask(const DependencyHint& hint, const TaskPrompt& task) {
    return {hint.agent, "Provide what the next step is missing (" + hint.reason + ") for the request: " + task.text};
}

class RunContext {
public:
    RunContext(const TaskPrompt& task, const StrategyConfig& strategy, const OrchestratorContext& ctx, Workspace& ws)
        : task_(task), strategy_(strategy), ctx_(ctx), ws_(ws) {}

    ExecutionTrace run() {
        trace_.task_id = task_.id;
        trace_.strategy = strategy_.strategy;
        try {
            switch (strategy_.strategy) {
                case Strategy::single_agent: single_agent(); break;
                case Strategy::composition_only: composition(); break;
                case Strategy::ledger_loop: ledger(); break;
                case Strategy::hybrid: hybrid(); break;
            }
        } catch (const ContextOverflow& e) {
            trace_.terminal = Terminal::context_overflow;
            trace_.error = e.what();
        } catch (const UnparseableSchedule& e) {
            trace_.terminal = Terminal::budget_exhausted;
            trace_.error = e.what();
        } catch (const GeoError& e) {
            // transport failures and contract violations end the run
            trace_.terminal = Terminal::budget_exhausted;
            trace_.error = e.what();
        }
        trace_.final_answer = final_answer(history_);
        emit(ctx_, Json{{"type", "final"}, {"terminal", to_string(trace_.terminal)},
                        {"final_answer", trace_.final_answer}, {"error", trace_.error}});
        return std::move(trace_);
    }

private:
    void push_schedule(const Schedule& s) {
        trace_.schedules.push_back(s);
        emit(ctx_, schedule_event(s));
    }

    ScheduleState start() {
        ScheduleState state;
        state.schedule = plan(task_, ctx_, trace_.token_usage);
        state.results.assign(state.schedule.subtasks.size(), std::nullopt);
        push_schedule(state.schedule);
        return state;
    }

    void single_agent() {
        AgentRuntime rt{ctx_.registry, ctx_.backend, ctx_.config, ws_, strategy_.ts_enabled ? ctx_.ts : nullptr,
                        strategy_.wm_enabled ? ctx_.wm : nullptr};
        const AgentSpec spec = make_single_agent_spec(ctx_.registry, ctx_.prompts, strategy_.max_tool_rounds);
        emit(ctx_, Json{{"type", "agent_start"}, {"agent", spec.name}, {"prompt", task_.text}, {"position", 0}, {"revision", 0}});
        AgentResult r = run_subtask(spec, task_.text, "", rt);
        record(r, 0, 0);
        trace_.terminal = r.status == AgentStatus::done ? Terminal::completed : Terminal::budget_exhausted;
    }

    void composition() {
        ScheduleState state = start();
        run_steps(state, 0, false);
        trace_.terminal = state.first_open() == state.results.size() ? Terminal::completed : Terminal::max_revisions;
    }

    void hybrid() {
        ScheduleState state = start();
        std::size_t from = 0;
        while (true) {
            run_steps(state, from, false);
            const CompletionVerdict verdict = check_completion(task_, state, ctx_, trace_.token_usage);
            emit(ctx_, Json{{"type", "verdict"}, {"complete", verdict.complete}, {"missing", verdict.missing},
                            {"revision", state.schedule.revision}});
            if (verdict.complete) {
                trace_.terminal = Terminal::completed;
                return;
            }
            if (state.schedule.revision >= strategy_.max_revisions) {
                trace_.terminal = Terminal::max_revisions;
                return;
            }
            const std::size_t open = state.first_open();
            Schedule next = revise(state, verdict, task_, ctx_, strategy_.max_revisions, trace_.token_usage);
            ScheduleState revised;
            revised.schedule = next;
            revised.results.assign(next.subtasks.size(), std::nullopt);
            // the completed prefix carries over untouched
            for (std::size_t i = 0; i < open && i < revised.results.size(); ++i) revised.results[i] = state.results[i];
            state = std::move(revised);
            push_schedule(state.schedule);
            from = open;
        }
    }

    void ledger() {
        ScheduleState state = start();
        std::size_t pos = 0;
        int rounds = 0;
        while (pos < state.schedule.subtasks.size()) {
            if (rounds >= strategy_.max_ledger_rounds) {
                trace_.terminal = Terminal::budget_exhausted;
                return;
            }
            ++rounds;
            run_steps(state, pos, true);
            const AgentResult& r = *state.results[pos];

            std::vector<SubTask> subtasks = state.schedule.subtasks;
            bool changed = false;
            if (r.status == AgentStatus::done) {
                ++pos;
            } else if (r.dependency_hint) {
                subtasks.insert(subtasks.begin() + static_cast<long>(pos), dependency_subtask(*r.dependency_hint, task_));
                changed = true;
            }
            // failed without a hint: the same step is tried again next round

            // Progress-ledger update after every agent result.
            std::vector<std::string> ledger_lines;
            for (std::size_t i = 0; i < history_.size(); ++i) {
                ledger_lines.push_back(std::to_string(i + 1) + ". " + result_line(history_[i]));
            }
            const std::vector<SubTask> remaining(subtasks.begin() + static_cast<long>(pos), subtasks.end());
            const std::string system = fill_template(
                ctx_.prompts.ledger_system,
                {{"request", task_.text}, {"ledger", join(ledger_lines, "\n")}, {"remaining", format_schedule(remaining)}});
            Completion c = call(ctx_, {ChatMessage::system(system), ChatMessage::user("Request: " + task_.text)},
                                trace_.token_usage);
            try {
                auto replacement = parse_schedule(c.message.content, ctx_.registry.agents());
                subtasks.resize(pos);
                subtasks.insert(subtasks.end(), replacement.begin(), replacement.end());
                changed = true;
            } catch (const UnparseableSchedule&) {
                // "continue" or anything unreadable keeps the remaining plan
            }
            if (changed) {
                ScheduleState next;
                next.schedule.subtasks = std::move(subtasks);
                next.schedule.revision = state.schedule.revision + 1;
                next.results.assign(next.schedule.subtasks.size(), std::nullopt);
                for (std::size_t i = 0; i < pos && i < next.results.size(); ++i) next.results[i] = state.results[i];
                state = std::move(next);
                push_schedule(state.schedule);
            }
        }
        trace_.terminal = Terminal::completed;
    }

    void record(const AgentResult& r, int revision, int position) {
        for (const auto& c : r.tool_calls) trace_.executed_steps.push_back(c);
        trace_.token_usage.merge(r.token_usage);
        trace_.step_records.push_back({revision, position, r.agent, r.status, r.summary, r.dependency_hint});
        history_.push_back(r);
    }

    // Lets execute_schedule be reused for the one-step ledger rounds.
    void run_steps(ScheduleState& state, std::size_t from, bool single) {
        ScheduleState one = state;
        if (single) one.schedule.subtasks.resize(from + 1);
        one.results.resize(one.schedule.subtasks.size());
        execute_schedule(one, from, task_, ctx_, ws_, strategy_, history_, trace_);
        for (std::size_t i = from; i < one.results.size(); ++i) state.results[i] = one.results[i];
    }

    const TaskPrompt& task_;
    const StrategyConfig& strategy_;
    const OrchestratorContext& ctx_;
    Workspace& ws_;
    ExecutionTrace trace_;
    std::vector<AgentResult> history_;
};

}  // namespace

void StrategyConfig::validate() const {
    if (max_revisions < 1) throw GeoError("InvalidConfig", "max_revisions must be positive");
    if (max_ledger_rounds < 1) throw GeoError("InvalidConfig", "max_ledger_rounds must be positive");
    if (max_tool_rounds < 1) throw GeoError("InvalidConfig", "max_tool_rounds must be positive");
}

std::size_t ScheduleState::first_open() const {
    for (std::size_t i = 0; i < results.size(); ++i) {
        if (!results[i] || results[i]->status != AgentStatus::done) return i;
    }
    return results.size();
}

Schedule plan(const TaskPrompt& task, const OrchestratorContext& ctx, TokenUsage& usage) {
    const auto roster = ctx.registry.agents();
    if (roster.empty()) throw GeoError("ContractError", "no agents registered");
    std::string guidance;
    if (ctx.wm && ctx.wm->size() > 0) guidance = format_guidance({}, ctx.wm->retrieve(task.text, kDefaultWorkflowK));
    std::string system = fill_template(ctx.prompts.planner_system, {{"agents", join(roster, ", ")}, {"guidance", guidance}});
    while (!system.empty() && (system.back() == '\n' || system.back() == ' ')) system.pop_back();

    std::vector<ChatMessage> messages{ChatMessage::system(system), ChatMessage::user("Request: " + task.text)};
    for (int attempt = 0;; ++attempt) {
        Completion c = call(ctx, messages, usage);
        try {
            return Schedule{parse_schedule(c.message.content, roster), 0};
        } catch (const UnparseableSchedule& e) {
            if (attempt >= 1) throw UnparseableSchedule(std::string("planner output unreadable after reprompt: ") + e.what());
            messages.push_back(c.message);
            messages.push_back(ChatMessage::user(ctx.prompts.planner_reminder));
        }
    }
}

void execute_schedule(ScheduleState& state, std::size_t from, [[maybe_unused]] const TaskPrompt& task,
                      const OrchestratorContext& ctx, Workspace& ws, const StrategyConfig& strategy, std::vector<AgentResult>& history,
                      ExecutionTrace& trace) {
    AgentRuntime rt{ctx.registry, ctx.backend, ctx.config, ws, strategy.ts_enabled ? ctx.ts : nullptr, nullptr};
    std::map<std::string, AgentSpec> specs;
    state.results.resize(state.schedule.subtasks.size());
    for (std::size_t i = from; i < state.schedule.subtasks.size(); ++i) {
        const SubTask& st = state.schedule.subtasks[i];
        auto it = specs.find(st.agent);
        if (it == specs.end()) {
            it = specs.emplace(st.agent, make_agent_spec(ctx.registry, st.agent, ctx.prompts, strategy.max_tool_rounds)).first;
        }
        emit(ctx, Json{{"type", "agent_start"}, {"agent", st.agent}, {"prompt", st.prompt},
                       {"position", i}, {"revision", state.schedule.revision}});
        // An empty digest on the first step: the agent sees only its subprompt.
        AgentResult r = run_subtask(it->second, st.prompt, context_digest(history), rt);
        for (const auto& c : r.tool_calls) {
            emit(ctx, Json{{"type", "tool_call"}, {"agent", c.agent}, {"tool", c.tool}, {"args", c.args},
                           {"status", c.result_status == ToolStatus::ok ? "ok" : "error"}});
            trace.executed_steps.push_back(c);
        }
        emit(ctx, Json{{"type", "agent_done"}, {"agent", r.agent}, {"status", to_string(r.status)},
                       {"summary", r.summary}, {"position", i}, {"revision", state.schedule.revision}});
        trace.token_usage.merge(r.token_usage);
        trace.step_records.push_back({state.schedule.revision, static_cast<int>(i), r.agent, r.status, r.summary,
                                      r.dependency_hint});
        const bool halt = r.status != AgentStatus::done;
        history.push_back(r);
        state.results[i] = std::move(r);
        if (halt) return;
    }
}

bool requests_plot(const std::string& text) {
    const std::string t = lower(text);
    for (const char* word : {"plot", "map", "show", "display", "visuali"}) {
        if (t.find(word) != std::string::npos) return true;
    }
    return false;
}

CompletionVerdict rule_verdict(const TaskPrompt& task, const ScheduleState& state) {
    CompletionVerdict v;
    const std::size_t open = state.first_open();
    if (open < state.results.size()) {
        const auto& slot = state.results[open];
        const std::string agent = state.schedule.subtasks[open].agent;
        if (slot && slot->dependency_hint) {
            v.missing = agent + " needs " + slot->dependency_hint->agent + ": " + slot->dependency_hint->reason;
            v.revision_directive = slot->dependency_hint->agent;
        } else if (slot) {
            v.missing = agent + " " + to_string(slot->status) + ": " + slot->summary;
        } else {
            v.missing = agent + " did not run";
        }
        return v;
    }
    if (requests_plot(task.text)) {
        bool mapped = false;
        for (std::size_t i = 0; i < state.results.size(); ++i) {
            if (state.schedule.subtasks[i].agent == "Map" && state.results[i]) mapped = true;
        }
        if (!mapped) {
            v.missing = "the request asks for a plot and no Map step ran";
            v.revision_directive = "Map";
            return v;
        }
    }
    v.complete = true;
    return v;
}

CompletionVerdict check_completion(const TaskPrompt& task, const ScheduleState& state, const OrchestratorContext& ctx,
                                   TokenUsage& usage) {
    bool any = false;
    for (const auto& r : state.results) any = any || r.has_value();
    if (!any) throw GeoError("ContractError", "check_completion needs at least one result");

    std::vector<std::string> lines;
    for (std::size_t i = 0; i < state.results.size(); ++i) {
        if (state.results[i]) lines.push_back(result_line(*state.results[i]));
    }
    const std::string system = fill_template(ctx.prompts.check_system, {{"request", task.text}, {"results", join(lines, "\n")}});
    Completion c = call(ctx, {ChatMessage::system(system), ChatMessage::user("Request: " + task.text)}, usage);

    CompletionVerdict rule = rule_verdict(task, state);
    if (ctx.backend.scripted()) return rule;

    const std::string reply = c.message.content;
    CompletionVerdict v;
    const auto pos = reply.find("INCOMPLETE");
    if (pos != std::string::npos) {
        std::string missing = reply.substr(pos + 10);
        missing.erase(0, missing.find_first_not_of(": \n"));
        v.missing = missing.empty() ? "unspecified" : missing;
        v.revision_directive = rule.revision_directive;
    } else if (reply.find("COMPLETE") != std::string::npos) {
        v.complete = true;
    } else {
        v.missing = "unverifiable";
        v.revision_directive = rule.revision_directive;
    }
    return v;
}

Schedule revise(const ScheduleState& state, const CompletionVerdict& verdict, const TaskPrompt& task,
                const OrchestratorContext& ctx, int max_revisions, TokenUsage& usage) {
    if (verdict.complete) throw GeoError("ContractError", "revise called on a complete verdict");
    if (state.schedule.revision >= max_revisions) throw GeoError("MaxRevisions", "revision limit reached");

    const std::size_t open = state.first_open();
    Schedule next;
    next.revision = state.schedule.revision + 1;
    const auto& subtasks = state.schedule.subtasks;

    if (open < state.results.size() && state.results[open] && state.results[open]->dependency_hint) {
        next.subtasks = subtasks;
        next.subtasks.insert(next.subtasks.begin() + static_cast<long>(open),
                             dependency_subtask(*state.results[open]->dependency_hint, task));
        return next;
    }

    next.subtasks.assign(subtasks.begin(), subtasks.begin() + static_cast<long>(open));
    const std::vector<SubTask> remaining(subtasks.begin() + static_cast<long>(open), subtasks.end());
    if (!ctx.backend.scripted()) {
        const std::string system = fill_template(
            ctx.prompts.revise_system,
            {{"request", task.text}, {"schedule", format_schedule(subtasks)}, {"missing", verdict.missing}});
        Completion c = call(ctx, {ChatMessage::system(system), ChatMessage::user("Request: " + task.text)}, usage);
        try {
            auto steps = parse_schedule(c.message.content, ctx.registry.agents());
            next.subtasks.insert(next.subtasks.end(), steps.begin(), steps.end());
            return next;
        } catch (const UnparseableSchedule&) {
            // fall through to the rule
        }
    }
    // Rule: retry the open step, or append the missing plot.
    next.subtasks.insert(next.subtasks.end(), remaining.begin(), remaining.end());
    if (remaining.empty() && verdict.revision_directive == std::optional<std::string>("Map")) {
        next.subtasks.push_back({"Map", "Plot the results of the request on the map: " + task.text});
    }
    return next;
}

ExecutionTrace run_task(const TaskPrompt& task, const StrategyConfig& strategy, const OrchestratorContext& ctx,
                        Workspace& ws) {
    return RunContext(task, strategy, ctx, ws).run();
}

}  // namespace geosquad
