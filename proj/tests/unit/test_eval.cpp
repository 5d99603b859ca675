// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <random>
#include <set>

#include "fixtures.hpp"
#include "geosquad/backend/scripted_backend.hpp"
#include "geosquad/eval/metrics.hpp"
#include "geosquad/eval/report.hpp"
#include "geosquad/orchestrator/orchestrator.hpp"
#include "geosquad/taskgen/behaviors.hpp"

using namespace geosquad;
using geosquad::testing::shared_dataset;
using geosquad::testing::shared_registry;
using geosquad::testing::shared_sandbox;

namespace {

// Longest common subsequence by exhaustive search over subsets of `a`.
std::size_t brute_lcs(const std::vector<int>& a, const std::vector<int>& b) {
    std::size_t best = 0;
    for (unsigned mask = 0; mask < (1u << a.size()); ++mask) {
        std::vector<int> sub;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (mask & (1u << i)) sub.push_back(a[i]);
        }
        std::size_t j = 0;
        for (int x : b) {
            if (j < sub.size() && sub[j] == x) ++j;
        }
        if (j == sub.size()) best = std::max(best, sub.size());
    }
    return best;
}

ToolCall call(const std::string& agent, const std::string& tool, Json args, ToolStatus st = ToolStatus::ok) {
    ToolCall c;
    c.agent = agent;
    c.tool = tool;
    c.args = std::move(args);
    c.result_status = st;
    return c;
}

TaskScore score(double correctness, long tokens, std::map<Product, double> eps, Terminal t = Terminal::completed) {
    TaskScore s;
    s.correctness = correctness;
    s.tokens = tokens;
    s.epsilon = std::move(eps);
    s.terminal = t;
    return s;
}

ExecutionTrace replay(std::size_t i, BehaviorOptions opts = {}) {
    const auto& d = shared_dataset();
    ScriptedBackend backend(compile_behavior(d.tasks[i], d.golds[i], opts));
    BackendConfig config;
    OrchestratorContext ctx{shared_registry(), backend, config, PromptSet::defaults()};
    Workspace ws(shared_sandbox());
    StrategyConfig sc;
    return run_task(d.tasks[i], sc, ctx, ws);
}

}  // namespace

TEST(Lcs, MatchesExhaustiveSearch) {
    std::mt19937 rng(3);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<int> a(rng() % 9), b(rng() % 9);
        for (auto& x : a) x = static_cast<int>(rng() % 4);
        for (auto& x : b) x = static_cast<int>(rng() % 4);
        ASSERT_EQ(lcs_length(a, b, std::equal_to<int>{}), brute_lcs(a, b));
    }
    EXPECT_EQ(lcs_length(std::vector<int>{1, 2, 3, 4}, std::vector<int>{2, 4, 3}, std::equal_to<int>{}), 2u);
}

TEST(Correctness, CountsOnlySuccessfulMatchingCallsInOrder) {
    GoldSolution g{"t", {{"Database", "load_product", {{"product", "ndvi"}, {"region", "gympie"}, {"date_range", "2024"}}},
                         {"Agriculture", "low_ndvi_clusters", {{"dataset", "ndvi"}, {"threshold", 0.2}}},
                         {"Map", "map_add_layer", {{"source", "low_ndvi_clusters"}}}},
                   {}};
    std::vector<ToolCall> ex{
        call("Database", "load_product", {{"product", "NDVI"}, {"region", " Gympie"}, {"date_range", "2024-01..2024-12"}}),
        call("Agriculture", "low_ndvi_clusters", {{"dataset", "ndvi"}, {"threshold", "0.2"}}, ToolStatus::error),
        call("Agriculture", "low_ndvi_clusters", {{"dataset", "ndvi"}, {"threshold", "0.2"}}),
        call("Map", "map_add_layer", {{"source", "ndvi"}})};
    EXPECT_DOUBLE_EQ(correctness_rate(ex, g), 2.0 / 3.0);
    ex.push_back(call("map", "map_add_layer", {{"source", "low_ndvi_clusters"}}));
    EXPECT_DOUBLE_EQ(correctness_rate(ex, g), 1.0);
    // out of order: only a subsequence counts
    std::vector<ToolCall> rev(ex.rbegin(), ex.rend());
    EXPECT_DOUBLE_EQ(correctness_rate(rev, g), 1.0 / 3.0);
    EXPECT_FALSE(step_matches(call("DataOps", "load_product", g.steps[0].canonical_args), g.steps[0]));
    EXPECT_THROW(correctness_rate(ex, GoldSolution{"empty", {}, {}}), EmptyGold);
}

// Oracle: the share of gold points never accessed, as a percentage.
TEST(Mspe, AgreesWithMissingShareOnRandomFixtures) {
    std::mt19937 rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        std::set<DataPointKey> gold, acc;
        const int ng = 1 + static_cast<int>(rng() % 40);
        while (static_cast<int>(gold.size()) < ng) {
            gold.insert({Product::lst, {static_cast<int>(rng() % 8), static_cast<int>(rng() % 8)}, "2024-0" + std::to_string(1 + rng() % 9)});
        }
        for (const auto& k : gold) {
            if (rng() % 2) acc.insert(k);
        }
        for (int i = 0; i < 10; ++i) acc.insert({Product::lst, {20 + static_cast<int>(rng() % 5), 0}, "2024-01"});
        acc.insert({Product::ndvi, {0, 0}, "2024-01"});  // other products never count
        std::size_t missing = 0, extras = 0;
        for (const auto& k : gold) missing += acc.count(k) ? 0 : 1;
        for (const auto& k : acc) extras += (k.product == Product::lst && !gold.count(k)) ? 1 : 0;
        const std::vector<DataPointKey> g(gold.begin(), gold.end()), a(acc.begin(), acc.end());
        ASSERT_NEAR(mspe(a, g, Product::lst), 100.0 * missing / gold.size(), 1e-9);
        ASSERT_NEAR(mspe(a, g, Product::lst, true), 100.0 * (missing + extras) / gold.size(), 1e-9);
    }
}

TEST(Mspe, DroppingKOfNGivesExactly100KOverN) {
    std::vector<DataPointKey> gold;
    for (int r = 0; r < 5; ++r) {
        for (int c = 0; c < 4; ++c) gold.push_back({Product::ndvi, {r, c}, "2024-03"});
    }
    for (std::size_t k = 0; k <= gold.size(); ++k) {
        std::vector<DataPointKey> acc(gold.begin() + static_cast<long>(k), gold.end());
        EXPECT_NEAR(mspe(acc, gold, Product::ndvi), 100.0 * k / gold.size(), 1e-9);
    }
    EXPECT_THROW(mspe(gold, gold, Product::lst), EmptyGold);
}

TEST(Score, PerfectReplayScoresPerfectly) {
    const auto& d = shared_dataset();
    for (std::size_t i = 0; i < d.tasks.size(); i += 9) {
        const auto t = replay(i);
        const auto s = score_task(t, d.golds[i], shared_sandbox());
        EXPECT_DOUBLE_EQ(s.correctness, 1.0) << d.tasks[i].id;
        for (const auto& [p, e] : s.epsilon) EXPECT_EQ(e, 0.0) << d.tasks[i].id << " " << to_string(p);
        EXPECT_EQ(s.tokens, t.token_usage.total_tokens);
        // pure: same inputs, same score
        const auto again = score_task(t, d.golds[i], shared_sandbox());
        EXPECT_EQ(again.correctness, s.correctness);
        EXPECT_EQ(again.epsilon, s.epsilon);
    }
}

TEST(Score, DroppedLoadRaisesEpsilon) {
    const auto& d = shared_dataset();
    for (std::size_t i = 0; i < d.tasks.size(); ++i) {
        if (d.golds[i].steps.size() < 2 || d.golds[i].steps[0].tool_name != "load_product") continue;
        BehaviorOptions o;
        o.perturbation = parse_perturbation("drop_step:0");
        ScriptedBackend backend(compile_behavior(d.tasks[i], d.golds[i], o));
        BackendConfig config;
        OrchestratorContext ctx{shared_registry(), backend, config, PromptSet::defaults()};
        Workspace ws(shared_sandbox());
        StrategyConfig sc;
        sc.strategy = Strategy::composition_only;
        const auto s = score_task(run_task(d.tasks[i], sc, ctx, ws), d.golds[i], shared_sandbox());
        EXPECT_LT(s.correctness, 1.0);
        for (const auto& [p, e] : s.epsilon) EXPECT_DOUBLE_EQ(e, 100.0);
        return;
    }
    FAIL() << "no load task";
}

TEST(Score, VisionAnswersAreGradedAgainstAnnotations) {
    const auto& d = shared_dataset();
    std::vector<TaskScore> scores;
    long lcc = 0, lcc_right = 0;
    MatchCounts det;
    for (std::size_t i = 0; i < d.tasks.size(); ++i) {
        if (d.tasks[i].domain != Domain::vision) continue;
        const auto s = score_task(replay(i), d.golds[i], shared_sandbox());
        for (const auto& st : d.golds[i].steps) {
            const auto* scene = shared_sandbox().scene(st.canonical_args.value("scene_id", std::string{}));
            if (st.tool_name == "classify_landcover") {
                ++lcc;
                lcc_right += classify(*scene, shared_sandbox().vision_model()) == scene->landcover ? 1 : 0;
            } else if (st.tool_name == "detect_objects") {
                const std::string cls = st.canonical_args["class"];
                std::vector<Box> truth;
                for (const auto& b : scene->objects) {
                    if (b.cls == cls) truth.push_back(b);
                }
                det += match_boxes(detect(*scene, cls, shared_sandbox().vision_model()), truth);
            }
        }
        scores.push_back(s);
    }
    const auto v = vision_scores(scores);
    ASSERT_TRUE(v.lcc_accuracy);
    ASSERT_TRUE(v.det_f1);
    ASSERT_GT(lcc, 0);
    EXPECT_NEAR(*v.lcc_accuracy, 100.0 * lcc_right / lcc, 1e-9);
    EXPECT_NEAR(*v.det_f1, 100.0 * det.f1(), 1e-9);
}

TEST(Aggregate, AveragesPerTaskFigures) {
    const auto r = aggregate({score(1.0, 1000, {{Product::ndvi, 0.0}}),
                              score(0.5, 3000, {{Product::ndvi, 50.0}, {Product::lst, 10.0}}, Terminal::context_overflow)},
                             Strategy::hybrid, true, false);
    EXPECT_DOUBLE_EQ(r.correctness_rate, 75.0);
    EXPECT_DOUBLE_EQ(r.avg_tokens_k, 2.0);
    EXPECT_DOUBLE_EQ(r.epsilon.at(Product::ndvi), 25.0);
    EXPECT_DOUBLE_EQ(r.epsilon.at(Product::lst), 10.0);
    EXPECT_FALSE(r.epsilon.count(Product::canopy));
    EXPECT_EQ(r.completed, 1);
    EXPECT_EQ(r.context_overflow, 1);
    EXPECT_FALSE(r.lcc_acc);
    EXPECT_TRUE(r.ts);
    EXPECT_EQ(aggregate({score(1.0, 0, {})}, Strategy::ledger_loop, false, false).correctness_rate, 100.0);
    EXPECT_THROW(aggregate({}, Strategy::hybrid, false, false), GeoError);
}

TEST(Report, CsvRoundTripsExactly) {
    std::mt19937 rng(8);
    std::uniform_real_distribution<double> u(0, 100);
    std::vector<BenchmarkReport> reports;
    for (Strategy s : {Strategy::single_agent, Strategy::composition_only, Strategy::ledger_loop, Strategy::hybrid}) {
        BenchmarkReport r;
        r.strategy = s;
        r.ts = rng() % 2;
        r.wm = rng() % 2;
        r.tasks = 200;
        r.correctness_rate = u(rng);
        r.avg_tokens_k = u(rng) / 3.0;
        r.epsilon[Product::ndvi] = u(rng);
        if (rng() % 2) r.epsilon[Product::canopy] = 1.0 / 3.0;
        if (rng() % 2) r.lcc_acc = u(rng);
        r.det_f1 = 96.55172413793103;
        r.completed = 199;
        r.context_overflow = 1;
        reports.push_back(r);
    }
    const std::string csv = render_csv(reports);
    EXPECT_EQ(csv.substr(0, csv.find('\n')).find("strategy,ts,wm,tasks,correctness_rate,avg_tokens_k,eps_ndvi"), 0u);
    EXPECT_EQ(parse_csv(csv), reports);
    EXPECT_NE(csv.find("n/a"), std::string::npos);
    EXPECT_THROW(parse_csv("nope\n"), GeoError);
}

TEST(Report, MarkdownHasOneRowPerReport) {
    BenchmarkReport r;
    r.tasks = 3;
    r.correctness_rate = 66.666666;
    const std::string md = render_markdown({r, r});
    std::size_t lines = 0;
    for (char c : md) lines += c == '\n';
    EXPECT_EQ(lines, 4u);
    EXPECT_NE(md.find("66.67"), std::string::npos);
    EXPECT_NE(md.find("| hybrid"), std::string::npos);
}
