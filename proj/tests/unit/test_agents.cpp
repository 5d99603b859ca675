// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <deque>
#include <fstream>
#include <random>

#include "fixtures.hpp"
#include "geosquad/agents/agent.hpp"
#include "geosquad/backend/chat.hpp"
#include "geosquad/backend/tokenizer.hpp"
#include "geosquad/orchestrator/schedule_parser.hpp"
#include "geosquad/registry/tool_registry.hpp"

using namespace geosquad;
using geosquad::testing::shared_registry;
using geosquad::testing::shared_sandbox;

namespace {

// Replies from a queue; "done" once it runs dry.
class QueueBackend : public ModelBackend {
public:
    Completion complete(const std::vector<ChatMessage>& messages, const std::vector<ToolSpec>& tools,
                        const BackendConfig& config) override {
        const long prompt = check_context_budget(messages, tools, config);
        seen.push_back(messages);
        ChatMessage reply = ChatMessage::assistant("done");
        if (!replies.empty()) {
            reply = replies.front();
            replies.pop_front();
        }
        CallUsage u{prompt, message_tokens(reply), prompt + message_tokens(reply)};
        return {reply, u, std::nullopt};
    }
    void call(const std::string& tool, const std::string& args) {
        replies.push_back(ChatMessage::assistant("", {{"c" + std::to_string(n++), tool, args}}));
    }
    std::deque<ChatMessage> replies;
    std::vector<std::vector<ChatMessage>> seen;
    int n = 0;
};

struct Harness {
    QueueBackend backend;
    BackendConfig config;
    Workspace ws{shared_sandbox()};
    AgentRuntime rt{shared_registry(), backend, config, ws};
};

}  // namespace

TEST(ScheduleParser, ReadsListsInsideProseAndFences) {
    const auto s = parse_schedule(
        "Sure, here is the plan.\n```python\nschedule = [Database(Load NDVI for Gympie),\n"
        "  DataOps('Filter to March (2024)'), Forest(\"Check canopy\")]\n```\nLet me know.");
    ASSERT_EQ(s.size(), 3u);
    EXPECT_EQ(s[0].agent, "Database");
    EXPECT_EQ(s[0].prompt, "Load NDVI for Gympie");
    EXPECT_EQ(s[1].prompt, "Filter to March (2024)");
    EXPECT_EQ(s[2].agent, "Forestry");
    EXPECT_EQ(s[2].prompt, "Check canopy");
}

TEST(ScheduleParser, BarePromptsMayNestParentheses) {
    const auto s = parse_schedule("schedule = [Climate(find heat (above 305 K) zones (LST))]");
    ASSERT_EQ(s.size(), 1u);
    EXPECT_EQ(s[0].prompt, "find heat (above 305 K) zones (LST)");
}

TEST(ScheduleParser, PrefersTheScheduleAssignment) {
    const auto s = parse_schedule("Agents [a, b] are idle. schedule = [Map(plot it)]");
    ASSERT_EQ(s.size(), 1u);
    EXPECT_EQ(s[0].agent, "Map");
}

TEST(ScheduleParser, RejectsUnreadableOutput) {
    EXPECT_THROW(parse_schedule("I cannot help with that."), UnparseableSchedule);
    EXPECT_THROW(parse_schedule("schedule = []"), UnparseableSchedule);
    EXPECT_THROW(parse_schedule("schedule = [Database(load"), UnparseableSchedule);
    EXPECT_THROW(parse_schedule("schedule = [Database()]"), UnparseableSchedule);
    EXPECT_THROW(parse_schedule("schedule = [Weather(rain)]", shared_registry().agents()), UnparseableSchedule);
    EXPECT_NO_THROW(parse_schedule("schedule = [Weather(rain)]"));
}

TEST(ScheduleParser, FormatThenParseIsIdentity) {
    std::mt19937 rng(17);
    const auto agents = shared_registry().agents();
    const std::vector<std::string> words{"load", "ndvi", "for", "gympie", "2024-03", "above", "0.2", "(soon)", "map"};
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<SubTask> subtasks(1 + rng() % 6);
        for (auto& st : subtasks) {
            st.agent = agents[rng() % agents.size()];
            const int n = 1 + static_cast<int>(rng() % 6);
            for (int i = 0; i < n; ++i) st.prompt += (i ? " " : "") + words[rng() % words.size()];
        }
        ASSERT_EQ(parse_schedule(format_schedule(subtasks), agents), subtasks) << format_schedule(subtasks);
    }
}

TEST(Agents, DependencyFlagConvention) {
    auto h = parse_dependency_flag("I can't continue. NEEDS_DEPENDENCY(database): ndvi not loaded\nthanks");
    ASSERT_TRUE(h);
    EXPECT_EQ(h->agent, "Database");
    EXPECT_EQ(h->reason, "ndvi not loaded");
    EXPECT_EQ(parse_dependency_flag("NEEDS_DEPENDENCY(Map)")->reason, "dependency flagged");
    EXPECT_FALSE(parse_dependency_flag("NEEDS_DEPENDENCY(Weather): x"));
    EXPECT_FALSE(parse_dependency_flag("all good"));
}

TEST(Agents, ContextDigestKeepsNewestWithinLimit) {
    EXPECT_EQ(context_digest({}), "");
    std::vector<AgentResult> results;
    for (int i = 0; i < 80; ++i) {
        AgentResult r;
        r.agent = i % 2 ? "DataOps" : "Database";
        r.handles = {"handle" + std::to_string(i)};
        results.push_back(r);
    }
    const std::string d = context_digest(results);
    EXPECT_LE(count_tokens(d), kDigestTokenLimit);
    EXPECT_NE(d.find("handle79"), std::string::npos);
    EXPECT_EQ(d.find("handle0;"), std::string::npos);
    EXPECT_EQ(context_digest({results[0]}), "Database done; handles: handle0");
}

TEST(Agents, SpecsAndPrompts) {
    const auto& prompts = PromptSet::defaults();
    const AgentSpec spec = make_agent_spec(shared_registry(), "forest", prompts);
    EXPECT_EQ(spec.name, "Forestry");
    EXPECT_EQ(spec.toolkit, shared_registry().toolkit("Forestry"));
    EXPECT_THROW(make_agent_spec(shared_registry(), "Weather", prompts), GeoError);
    const AgentSpec mono = make_single_agent_spec(shared_registry(), prompts);
    EXPECT_TRUE(mono.monolith);
    EXPECT_EQ(mono.toolkit.size(), 521u);

    const auto msgs = build_agent_prompt(spec, "Find candidates", "", "");
    ASSERT_EQ(msgs.size(), 2u);
    EXPECT_NE(msgs[0].content.find("acting as the Forestry agent"), std::string::npos);
    EXPECT_EQ(msgs[1].content, "Task: Find candidates");
    EXPECT_EQ(build_agent_prompt(spec, "x", "", "Database done")[1].content, "Task: x\nContext: Database done");
}

TEST(Agents, FillTemplateLeavesUnknownSlots) {
    EXPECT_EQ(fill_template("{a} and {b} {", {{"a", "x"}}), "x and {b} {");
}

TEST(Agents, PromptDirectoryOverridesSomeFields) {
    geosquad::testing::TempDir dir("prompts");
    std::ofstream(dir.path() / "planner_reminder.txt") << "Answer with a schedule list only.\n";
    const PromptSet p = PromptSet::load(dir.path());
    EXPECT_EQ(p.planner_reminder, "Answer with a schedule list only.");
    EXPECT_EQ(p.agent_system, PromptSet::defaults().agent_system);
}

TEST(Agents, GuidanceOnlyWhenStoresAreOn) {
    const auto stores = compile_memories(geosquad::testing::shared_dataset().exemplars,
                                         geosquad::testing::shared_dataset().exemplar_golds);
    Harness h;
    const AgentSpec spec = make_agent_spec(shared_registry(), "Agriculture", PromptSet::defaults());
    EXPECT_EQ(agent_guidance(spec, "low NDVI clusters in Gympie", h.rt), "");
    h.rt.ts = &stores.ts;
    h.rt.wm = &stores.wm;
    const std::string g = agent_guidance(spec, "low NDVI clusters in Gympie", h.rt);
    EXPECT_NE(g.find("TS:"), std::string::npos);
    EXPECT_EQ(g.find("WM:"), std::string::npos);  // workflow memory is for the monolith
    const std::string m = agent_guidance(make_single_agent_spec(shared_registry(), PromptSet::defaults()),
                                         "low NDVI clusters in Gympie", h.rt);
    EXPECT_NE(m.find("WM:"), std::string::npos);
}

TEST(Agents, SubtaskRunsToolsThenSummarises) {
    Harness h;
    h.backend.call("load_product", R"({"product":"ndvi","region":"gympie","date_range":"2024-03"})");
    h.backend.replies.push_back(ChatMessage::assistant("Loaded NDVI"));
    const AgentSpec spec = make_agent_spec(shared_registry(), "Database", PromptSet::defaults());
    const AgentResult r = run_subtask(spec, "Load NDVI", "", h.rt);
    EXPECT_EQ(r.status, AgentStatus::done);
    EXPECT_EQ(r.summary, "Loaded NDVI");
    ASSERT_EQ(r.tool_calls.size(), 1u);
    EXPECT_EQ(r.tool_calls[0].agent, "Database");
    EXPECT_EQ(r.tool_calls[0].result_status, ToolStatus::ok);
    EXPECT_EQ(r.handles, std::vector<std::string>{"ndvi"});
    EXPECT_EQ(r.tool_rounds, 1);
    EXPECT_EQ(r.token_usage.calls.size(), 2u);
    // the tool result goes back to the model under the call's id
    ASSERT_EQ(h.backend.seen.size(), 2u);
    EXPECT_EQ(h.backend.seen[1].back().role, Role::tool);
    EXPECT_EQ(h.backend.seen[1].back().tool_call_id, std::optional<std::string>("c0"));
    EXPECT_EQ(h.ws.recorder().size(), shared_sandbox().region_cells("gympie").size());
}

TEST(Agents, MissingInputBecomesADependencyHint) {
    Harness h;
    h.backend.call("low_ndvi_clusters", R"({"dataset":"ndvi","threshold":0.2})");
    const AgentSpec spec = make_agent_spec(shared_registry(), "Agriculture", PromptSet::defaults());
    const AgentResult r = run_subtask(spec, "clusters", "", h.rt);
    EXPECT_EQ(r.status, AgentStatus::needs_dependency);
    ASSERT_TRUE(r.dependency_hint);
    EXPECT_EQ(r.dependency_hint->agent, "Database");
    EXPECT_EQ(r.summary.rfind("NEEDS_DEPENDENCY(Database)", 0), 0u);
}

TEST(Agents, MonolithKeepsGoingAfterAMissingInput) {
    Harness h;
    h.backend.call("low_ndvi_clusters", R"({"dataset":"ndvi","threshold":0.2})");
    h.backend.replies.push_back(ChatMessage::assistant("gave up"));
    const AgentResult r = run_subtask(make_single_agent_spec(shared_registry(), PromptSet::defaults()), "x", "", h.rt);
    EXPECT_EQ(r.status, AgentStatus::done);
    EXPECT_EQ(r.tool_calls.size(), 1u);
}

TEST(Agents, OutOfToolkitCallsAreReportedToTheModel) {
    Harness h;
    h.backend.call("load_product", R"({"product":"ndvi","region":"gympie","date_range":"2024"})");
    h.backend.replies.push_back(ChatMessage::assistant("ok"));
    const AgentResult r =
        run_subtask(make_agent_spec(shared_registry(), "Map", PromptSet::defaults()), "x", "", h.rt);
    EXPECT_EQ(r.status, AgentStatus::done);
    ASSERT_EQ(r.tool_calls.size(), 1u);
    EXPECT_EQ(payload_error_code(r.tool_calls[0].result_payload), "UnknownTool");
    EXPECT_EQ(h.ws.recorder().size(), 0u);
}

TEST(Agents, MalformedArgumentsTwiceFails) {
    Harness h;
    h.backend.call("load_product", "[1,2]");
    h.backend.call("load_product", "{not json");
    const AgentResult r =
        run_subtask(make_agent_spec(shared_registry(), "Database", PromptSet::defaults()), "x", "", h.rt);
    EXPECT_EQ(r.status, AgentStatus::failed);
    EXPECT_EQ(r.tool_calls.size(), 2u);
    EXPECT_NE(h.backend.seen[1].back().content.find("Fix the arguments"), std::string::npos);
}

TEST(Agents, ToolRoundsAreBounded) {
    Harness h;
    for (int i = 0; i < 5; ++i) h.backend.call("map_snapshot", "{}");
    AgentSpec spec = make_agent_spec(shared_registry(), "Map", PromptSet::defaults(), 3);
    const AgentResult r = run_subtask(spec, "x", "", h.rt);
    EXPECT_EQ(r.status, AgentStatus::failed);
    EXPECT_EQ(r.tool_rounds, 3);
    EXPECT_EQ(r.tool_calls.size(), 3u);
}

TEST(Agents, FlaggedDependencyInPlainText) {
    Harness h;
    h.backend.replies.push_back(ChatMessage::assistant("NEEDS_DEPENDENCY(DataOps): need a March subset"));
    const AgentResult r =
        run_subtask(make_agent_spec(shared_registry(), "Climate", PromptSet::defaults()), "x", "", h.rt);
    EXPECT_EQ(r.status, AgentStatus::needs_dependency);
    EXPECT_EQ(r.dependency_hint->agent, "DataOps");
    // naming itself is a plain failure
    h.backend.replies.push_back(ChatMessage::assistant("NEEDS_DEPENDENCY(Climate): confused"));
    EXPECT_EQ(run_subtask(make_agent_spec(shared_registry(), "Climate", PromptSet::defaults()), "x", "", h.rt).status,
              AgentStatus::failed);
}

TEST(Agents, ContextOverflowPropagates) {
    Harness h;
    h.config.context_budget = 600;
    EXPECT_THROW(run_subtask(make_single_agent_spec(shared_registry(), PromptSet::defaults()), "x", "", h.rt),
                 ContextOverflow);
}
