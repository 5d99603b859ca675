// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "fixtures.hpp"
#include "geosquad/backend/schema_render.hpp"
#include "geosquad/backend/tokenizer.hpp"
#include "geosquad/registry/filler.hpp"
#include "geosquad/registry/memory_store.hpp"
#include "geosquad/registry/similarity_index.hpp"
#include "geosquad/sandbox/workspace.hpp"

using namespace geosquad;
using geosquad::testing::shared_registry;

TEST(Registry, FullRosterHas521Tools) {
    const ToolRegistry& r = shared_registry();
    EXPECT_EQ(r.size(), 521u);
    EXPECT_EQ(r.real_tool_count(), 19u);
    EXPECT_EQ(r.agents().size(), 8u);
    for (Domain d : kAllDomains) {
        EXPECT_GE(r.count_for(agent_name(d)), 64u);
        EXPECT_LE(r.count_for(agent_name(d)), 66u);
    }
    std::size_t sum = 0;
    for (const auto& a : r.agents()) sum += r.toolkit(a).size();
    EXPECT_EQ(sum, r.size());
}

// 65 fillers per domain on eight agents is 520; the real tools lift it past 521.
TEST(Registry, FillerArithmetic) {
    std::map<Domain, int> real;
    for (Domain d : kAllDomains) real[d] = 1;
    auto counts = filler_counts_for_total(528, real);
    for (const auto& [d, n] : counts) EXPECT_EQ(n, 65);

    counts = filler_counts_for_total(521, real_tool_counts(canonical_domains()));
    int total = 19;
    for (const auto& [d, n] : counts) total += n;
    EXPECT_EQ(total, 521);
    EXPECT_TRUE(filler_counts_for_total(5, real).size() == 8);
    for (const auto& [d, n] : filler_counts_for_total(5, real)) EXPECT_EQ(n, 0);
}

TEST(Registry, SubsetRosterKeepsPerDomainToolkits) {
    const ToolRegistry sub = build_registry(canonical_domains(3), 521);
    EXPECT_EQ(sub.agents().size(), 3u);
    for (const auto& a : sub.agents()) EXPECT_EQ(sub.toolkit(a), shared_registry().toolkit(a));
}

TEST(Registry, FillersAreDeterministicAndSeedDependent) {
    const auto a = generate_filler_tools(Domain::climate, 20, 1);
    const auto b = generate_filler_tools(Domain::climate, 20, 1);
    const auto c = generate_filler_tools(Domain::climate, 20, 2);
    EXPECT_EQ(a, b);
    EXPECT_NE(a, c);
    std::set<std::string> names;
    for (const auto& t : a) names.insert(t.name);
    EXPECT_EQ(names.size(), a.size());
}

TEST(Registry, LookupRules) {
    ToolRegistry r;
    r.register_tool({"x", "A", "", {}, 0}, [](const Json&, Workspace&) { return tool_ok(Json::object()); });
    r.register_tool({"x", "B", "", {}, 0}, [](const Json&, Workspace&) { return tool_ok(Json::object()); });
    r.register_tool({"y", "B", "d", {}, 0}, [](const Json&, Workspace&) { return tool_ok(Json::object()); });
    EXPECT_THROW(r.register_tool({"x", "A", "", {}, 0}, nullptr), DuplicateTool);
    EXPECT_TRUE(r.contains("A", "x"));
    EXPECT_FALSE(r.contains("A", "y"));
    EXPECT_EQ(r.find_by_name("x"), nullptr);  // ambiguous
    ASSERT_NE(r.find_by_name("y"), nullptr);
    EXPECT_EQ(r.find_by_name("y")->spec.schema_token_cost, schema_token_cost(r.find_by_name("y")->spec));
    EXPECT_EQ(r.manifest().size(), 3u);
}

TEST(Registry, ErrorPayloadsCarryCodes) {
    const auto e = tool_error("MissingProduct", "ndvi not loaded", Json{{"needs", "Database"}});
    EXPECT_EQ(e.status, ToolStatus::error);
    EXPECT_EQ(payload_error_code(e.payload), "MissingProduct");
    EXPECT_EQ(Json::parse(e.payload)["needs"], "Database");
    EXPECT_EQ(payload_error_code(tool_ok(Json{{"a", 1}}).payload), "");
    EXPECT_EQ(payload_error_code("not json"), "");
}

// Each domain's toolkit costs 2050..2500 schema tokens: three fit next to
// a prompt in 8192 tokens, four do not.
TEST(Registry, SchemaCostPerDomainBand) {
    long largest3 = 0;
    std::vector<long> costs;
    for (Domain d : kAllDomains) {
        long sum = 0;
        for (const auto& t : shared_registry().toolkit(agent_name(d))) sum += t.schema_token_cost;
        EXPECT_GE(sum, 2050) << agent_name(d);
        EXPECT_LE(sum, 2500) << agent_name(d);
        costs.push_back(sum);
    }
    std::sort(costs.rbegin(), costs.rend());
    largest3 = costs[0] + costs[1] + costs[2];
    EXPECT_LT(largest3, 8192 - 1000);  // room for the prompt and tool results
    long smallest4 = 0;
    std::sort(costs.begin(), costs.end());
    for (int i = 0; i < 4; ++i) smallest4 += costs[static_cast<std::size_t>(i)];
    EXPECT_GT(smallest4, 8192);
}

namespace {

// Independent TF-IDF cosine, written from the documented formula.
std::vector<double> oracle_scores(const std::vector<std::string>& docs, const std::string& query) {
    const double n = static_cast<double>(docs.size());
    std::vector<std::map<std::string, int>> tf(docs.size());
    std::map<std::string, int> df;
    for (std::size_t i = 0; i < docs.size(); ++i) {
        for (const auto& w : word_terms(docs[i])) tf[i][w]++;
        for (const auto& [w, c] : tf[i]) df[w]++;
    }
    auto weigh = [&](const std::map<std::string, int>& counts) {
        std::map<std::string, double> v;
        double norm = 0;
        for (const auto& [w, c] : counts) {
            if (!df.count(w)) continue;
            const double x = (1.0 + std::log(c)) * (std::log((1.0 + n) / (1.0 + df[w])) + 1.0);
            v[w] = x;
            norm += x * x;
        }
        for (auto& [w, x] : v) x /= std::sqrt(norm);
        return v;
    };
    std::map<std::string, int> qc;
    for (const auto& w : word_terms(query)) qc[w]++;
    const auto q = weigh(qc);
    std::vector<double> out;
    for (std::size_t i = 0; i < docs.size(); ++i) {
        const auto d = weigh(tf[i]);
        double s = 0;
        for (const auto& [w, x] : q) {
            if (d.count(w)) s += x * d.at(w);
        }
        out.push_back(s);
    }
    return out;
}

}  // namespace

TEST(SimilarityIndex, MatchesOracleCosine) {
    const std::vector<std::string> docs{"NDVI crop rotation in Brisbane", "heatwave zones over Sydney",
                                        "crop crop yields and NDVI", "aerosol hotspots Brisbane"};
    SimilarityIndex idx;
    for (const auto& d : docs) idx.add(d);
    for (const std::string q : {"crop NDVI", "Brisbane aerosol", "zones", "unrelated words", "crop crop brisbane"}) {
        const auto got = idx.scores(q);
        const auto want = oracle_scores(docs, q);
        ASSERT_EQ(got.size(), want.size());
        for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], want[i], 1e-12) << q << " doc " << i;
    }
    const auto top = idx.top_k("crop NDVI", 2);
    ASSERT_EQ(top.size(), 2u);
    EXPECT_GE(top[0].second, top[1].second);
}

TEST(SimilarityIndex, SelfAndDisjoint) {
    SimilarityIndex idx;
    idx.add("alpha beta gamma");
    idx.add("delta epsilon");
    EXPECT_NEAR(idx.scores("alpha beta gamma")[0], 1.0, 1e-12);
    EXPECT_EQ(idx.scores("zeta eta")[0], 0.0);
    EXPECT_EQ(idx.scores("zeta eta")[1], 0.0);
    EXPECT_EQ(idx.top_k("", 5).size(), 2u);
}

TEST(MemoryStore, RetrieveAndGuidanceFormat) {
    ToolSelectionStore ts;
    EXPECT_THROW(ts.retrieve("Climate", "x", 1), EmptyStore);
    ts.add({"Find heatwave zones in Sydney", "Climate", {"heatwave_zones"}});
    ts.add({"Load NDVI for Brisbane", "Database", {"load_product", "describe_dataset"}});
    EXPECT_EQ(ts.size(), 2u);
    EXPECT_EQ(ts.size_for("Climate"), 1u);
    const auto hits = ts.retrieve("Climate", "heatwave zones", 3);
    ASSERT_EQ(hits.size(), 1u);
    EXPECT_EQ(hits[0].exemplar.tools_used.front(), "heatwave_zones");
    EXPECT_THROW(ts.retrieve("Urban", "x", 1), EmptyStore);

    WorkflowMemoryStore wm;
    EXPECT_THROW(wm.retrieve("x", 1), EmptyStore);
    wm.add({"Load NDVI for Brisbane and plot it", {"Database", "Map"}, {{"Database", "load"}, {"Map", "plot"}}});
    const auto wh = wm.retrieve("plot NDVI", 2);
    const std::string g = format_guidance(hits, wh);
    EXPECT_NE(g.find("Similar prompt: \"Find heatwave zones in Sydney\""), std::string::npos);
    EXPECT_NE(g.find("Tools used: heatwave_zones()"), std::string::npos);
    EXPECT_NE(g.find("Agents involved: Database, Map"), std::string::npos);
    EXPECT_EQ(format_guidance({}, {}), "");
}
