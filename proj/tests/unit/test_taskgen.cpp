// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <set>

#include "fixtures.hpp"
#include "geosquad/sandbox/workspace.hpp"
#include "geosquad/core/json_io.hpp"
#include "geosquad/orchestrator/schedule_parser.hpp"
#include "geosquad/taskgen/behaviors.hpp"

using namespace geosquad;
using geosquad::testing::shared_dataset;
using geosquad::testing::shared_registry;
using geosquad::testing::shared_sandbox;

TEST(Taskgen, DefaultSizes) {
    const auto& d = shared_dataset();
    EXPECT_EQ(d.tasks.size(), 200u);
    EXPECT_EQ(d.golds.size(), 200u);
    EXPECT_EQ(d.exemplars.size(), 56u);
    std::map<Domain, int> per;
    for (const auto& t : d.tasks) per[t.domain]++;
    EXPECT_EQ(per.size(), 8u);
    for (const auto& [dom, n] : per) EXPECT_EQ(n, 25) << to_string(dom);
    for (const auto& [agent, n] : d.manifest.exemplar_counts) EXPECT_EQ(n, 7) << agent;
    EXPECT_EQ(d.manifest.fixture_hash, shared_sandbox().fixture_hash());
}

TEST(Taskgen, TextsNeverRepeatAndIdsAreStable) {
    const auto& d = shared_dataset();
    std::set<std::string> texts, ids;
    for (const auto* split : {&d.tasks, &d.exemplars}) {
        for (const auto& t : *split) {
            EXPECT_TRUE(texts.insert(t.text).second) << t.text;
            EXPECT_TRUE(ids.insert(t.id).second) << t.id;
        }
    }
    EXPECT_EQ(d.tasks.front().id, "database-0001");
    EXPECT_EQ(d.exemplars.front().id, "ex-database-01");
    for (std::size_t i = 0; i < d.tasks.size(); ++i) EXPECT_EQ(d.tasks[i].id, d.golds[i].task_id);
}

TEST(Taskgen, GenerationIsDeterministic) {
    const auto a = generate_dataset(default_templates(), shared_sandbox(), 42, 5);
    const auto b = generate_dataset(default_templates(), shared_sandbox(), 42, 5);
    const auto c = generate_dataset(default_templates(), shared_sandbox(), 43, 5);
    EXPECT_EQ(a.tasks, b.tasks);
    EXPECT_EQ(a.golds, b.golds);
    EXPECT_NE(a.tasks, c.tasks);
    EXPECT_EQ(a.tasks.size(), 40u);
}

// Gold access sets come from fixture metadata; the recorder sees what the
// tools actually touched. The two must agree on every task.
TEST(Taskgen, GoldDatapointsMatchToolExecution) {
    const auto& d = shared_dataset();
    for (const auto* golds : {&d.golds, &d.exemplar_golds}) {
        for (const auto& g : *golds) {
            Workspace ws(shared_sandbox());
            for (const auto& s : g.steps) {
                const auto* tool = shared_registry().find(s.agent_name, s.tool_name);
                ASSERT_NE(tool, nullptr) << s.tool_name;
                const auto r = tool->handler(s.canonical_args, ws);
                ASSERT_EQ(r.status, ToolStatus::ok) << g.task_id << " " << s.tool_name << " " << r.payload;
            }
            ASSERT_EQ(ws.recorder().keys(), g.gold_datapoints) << g.task_id;
        }
    }
}

TEST(Taskgen, GoldsAreNonEmptyAndValid) {
    for (const auto& g : shared_dataset().golds) {
        EXPECT_FALSE(g.steps.empty());
        // only catalog lookups touch no datapoints
        const bool reads = std::any_of(g.steps.begin(), g.steps.end(), [](const GoldStep& s) {
            return s.tool_name == "load_product" || s.tool_name == "detect_objects" ||
                   s.tool_name == "classify_landcover";
        });
        EXPECT_EQ(g.gold_datapoints.empty(), !reads) << g.task_id;
    }
}

TEST(Taskgen, ExemplarsCoverEveryRealTool) {
    std::set<std::string> used;
    for (const auto& g : shared_dataset().exemplar_golds) {
        for (const auto& s : g.steps) used.insert(s.tool_name);
    }
    for (const auto& t : real_tool_names()) EXPECT_TRUE(used.count(t)) << t;
}

TEST(Taskgen, MatchPromptInvertsInstantiate) {
    const auto templates = default_templates();
    for (const auto& t : templates) {
        const auto all = enumerate(t);
        ASSERT_FALSE(all.empty()) << t.id;
        for (std::size_t i = 0; i < all.size(); i += 5) {
            const auto m = match_prompt(all[i].text, templates);
            ASSERT_TRUE(m) << all[i].text;
            EXPECT_EQ(m->text, all[i].text);
            EXPECT_EQ(m->steps, all[i].steps) << all[i].text;
        }
    }
}

TEST(Taskgen, MatchPromptToleratesCaseAndSpacing) {
    const auto& task = shared_dataset().tasks[0];
    std::string shouty = task.text;
    for (auto& c : shouty) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    const auto m = match_prompt("  " + shouty + " ", default_templates());
    ASSERT_TRUE(m);
    EXPECT_EQ(m->steps, shared_dataset().golds[0].steps);
    EXPECT_FALSE(match_prompt("What is the meaning of life?", default_templates()));
}

TEST(Taskgen, UnknownRegionSurvivesMatchingButNotGold) {
    const auto templates = default_templates();
    const auto m = match_prompt("Load NDVI data for Atlantis over 2021-01..2021-06 and show it.", templates);
    ASSERT_TRUE(m);
    EXPECT_EQ(m->bindings.at("region"), "atlantis");
    EXPECT_THROW(gold_datapoints(m->steps, shared_sandbox()), GeoError);
}

TEST(Taskgen, TemplateGaps) {
    auto templates = default_templates();
    std::erase_if(templates, [](const TaskTemplate& t) { return t.domain == Domain::urban; });
    EXPECT_THROW(generate_dataset(templates, shared_sandbox(), 42, 5), TemplateGapError);
    EXPECT_THROW(generate_dataset(default_templates(), shared_sandbox(), 42, 100000), TemplateGapError);
}

TEST(Taskgen, TemplatesRoundTripThroughJson) {
    geosquad::testing::TempDir dir("tpl");
    const auto templates = default_templates();
    write_text_file(dir.path() / "t.json", Json(templates).dump(2));
    const auto loaded = load_templates(dir.path() / "t.json");
    ASSERT_EQ(loaded.size(), templates.size());
    const auto a = generate_dataset(templates, shared_sandbox(), 42, 3);
    const auto b = generate_dataset(loaded, shared_sandbox(), 42, 3);
    EXPECT_EQ(a.tasks, b.tasks);
    EXPECT_EQ(a.golds, b.golds);
}

TEST(Taskgen, WriteThenLoadRoundTrips) {
    geosquad::testing::TempDir dir("ds");
    const auto data = generate_dataset(default_templates(), shared_sandbox(), 42, 4);
    const auto stores = compile_memories(data.exemplars, data.exemplar_golds);
    write_dataset(dir.path(), data, stores, shared_sandbox());
    for (const char* f : {"tasks.jsonl", "golds.jsonl", "exemplars.jsonl", "exemplar_golds.jsonl", "manifest.json",
                          "ts_store.jsonl", "wm_store.jsonl", "fixture.json"}) {
        EXPECT_TRUE(std::filesystem::exists(dir.path() / f)) << f;
    }
    const auto back = load_dataset(dir.path());
    EXPECT_EQ(back.tasks, data.tasks);
    EXPECT_EQ(back.golds, data.golds);
    EXPECT_EQ(back.exemplars, data.exemplars);
    EXPECT_EQ(back.exemplar_golds, data.exemplar_golds);
    EXPECT_EQ(Json(back.manifest), Json(data.manifest));
    EXPECT_EQ(dataset_dir("data", 42), std::filesystem::path("data") / "seed-42");
}

TEST(Taskgen, MemoriesOnePerAgentInvolved) {
    const auto& d = shared_dataset();
    const auto stores = compile_memories(d.exemplars, d.exemplar_golds);
    std::size_t expected = 0;
    for (const auto& g : d.exemplar_golds) {
        std::set<std::string> agents;
        for (const auto& s : g.steps) agents.insert(s.agent_name);
        expected += agents.size();
    }
    EXPECT_EQ(stores.ts.size(), expected);
    EXPECT_EQ(stores.wm.size(), 56u);
}

TEST(Taskgen, SubtasksGroupConsecutiveAgents) {
    const std::vector<GoldStep> steps{{"Database", "load_product", {{"product", "ndvi"}}},
                                      {"DataOps", "filter_region", Json::object()},
                                      {"DataOps", "zonal_stats", Json::object()},
                                      {"Map", "map_snapshot", Json::object()}};
    EXPECT_EQ(subtask_boundaries(steps), (std::vector<std::size_t>{0, 1, 3, 4}));
    const auto st = gold_subtasks(steps);
    ASSERT_EQ(st.size(), 3u);
    EXPECT_EQ(st[1].agent, "DataOps");
    EXPECT_NE(st[1].prompt.find(", then "), std::string::npos);
}

TEST(Behaviors, PlannerRuleReturnsGoldSubtasks) {
    const auto& d = shared_dataset();
    for (std::size_t i = 0; i < d.tasks.size(); i += 13) {
        const auto b = compile_behavior(d.tasks[i], d.golds[i]);
        ASSERT_FALSE(b.rules.empty());
        EXPECT_EQ(b.rules[0].system_contains, kPlannerMarker);
        const auto planned = parse_schedule(b.rules[0].replies[0].text);
        EXPECT_EQ(planned, gold_subtasks(d.golds[i].steps));

        BehaviorOptions omit;
        omit.omit_database = true;
        const auto o = compile_behavior(d.tasks[i], d.golds[i], omit);
        for (const auto& st : parse_schedule(o.rules[0].replies[0].text)) {
            if (planned.size() > 1 || planned[0].agent != "Database") EXPECT_NE(st.agent, "Database");
        }
    }
}

TEST(Behaviors, FreeTextRequestsResolveToTemplates) {
    const auto& task = shared_dataset().tasks[5];
    const auto b = behavior_for_prompt(task.text, default_templates());
    ASSERT_TRUE(b);
    EXPECT_EQ(Json(*b), Json(compile_behavior(task, shared_dataset().golds[5])));
    EXPECT_FALSE(behavior_for_prompt("hello there", default_templates()));
}

TEST(Behaviors, ParaphraseHookIsIdentityWhenOff) {
    BackendConfig config;
    EXPECT_EQ(paraphrase_hook("Load NDVI", nullptr, config, false), "Load NDVI");
    EXPECT_EQ(paraphrase_hook("Load NDVI", nullptr, config, true), "Load NDVI");
}
