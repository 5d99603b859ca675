// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <functional>
#include <numeric>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "geosquad/sandbox/analysis.hpp"
#include "geosquad/sandbox/vision.hpp"
#include "geosquad/sandbox/workspace.hpp"

using namespace geosquad;
using geosquad::testing::shared_registry;
using geosquad::testing::shared_sandbox;

namespace {

ToolResult call(Workspace& ws, const std::string& agent, const std::string& tool, const Json& args) {
    const auto* t = shared_registry().find(agent, tool);
    if (!t) throw std::runtime_error("no tool " + agent + "." + tool);
    return t->handler(args, ws);
}

bool connected4(const std::vector<Cell>& cells) {
    if (cells.empty()) return false;
    std::set<Cell> left(cells.begin(), cells.end());
    std::vector<Cell> stack{cells.front()};
    left.erase(cells.front());
    while (!stack.empty()) {
        const Cell c = stack.back();
        stack.pop_back();
        for (Cell n : {Cell{c.row - 1, c.col}, Cell{c.row + 1, c.col}, Cell{c.row, c.col - 1}, Cell{c.row, c.col + 1}}) {
            if (left.erase(n)) stack.push_back(n);
        }
    }
    return left.empty();
}

}  // namespace

TEST(Sandbox, GenerationIsAPureFunctionOfTheSeed) {
    const Sandbox a = Sandbox::generate(SandboxConfig{});
    SandboxConfig other;
    other.seed = 8;
    const Sandbox b = Sandbox::generate(other);
    EXPECT_EQ(a.fixture_hash(), shared_sandbox().fixture_hash());
    EXPECT_NE(a.fixture_hash(), b.fixture_hash());
    EXPECT_EQ(a.fixture_metadata().dump(), shared_sandbox().fixture_metadata().dump());
}

TEST(Sandbox, ValuesStayInsideProductRanges) {
    for (Product p : kRasterProducts) {
        const auto& r = shared_sandbox().product(p);
        const auto& info = product_info(p);
        EXPECT_EQ(r.dates(), product_dates(p));
        for (double v : r.values()) {
            ASSERT_GE(v, info.min_value) << to_string(p);
            ASSERT_LE(v, info.max_value) << to_string(p);
        }
    }
}

TEST(Sandbox, RegionsAndScenes) {
    const Sandbox& s = shared_sandbox();
    EXPECT_EQ(s.regions().size(), 8u);
    EXPECT_EQ(s.region_cells("Brisbane"), s.region_cells("brisbane"));
    EXPECT_EQ(s.region_cells("brisbane").size(), 8u * 8u + 2u * 4u);
    EXPECT_THROW(s.region_cells("atlantis"), GeoError);
    EXPECT_EQ(s.scenes().size(), 64u);
    for (const auto& region : s.regions()) {
        const auto scenes = s.scenes_in(region.name);
        EXPECT_EQ(scenes.size(), 8u);
        const auto& cells = s.region_cells(region.name);
        for (const auto* sc : scenes) {
            EXPECT_TRUE(std::binary_search(cells.begin(), cells.end(), sc->cell));
            EXPECT_GE(sc->objects.size(), 1u);
            EXPECT_LE(sc->objects.size(), 6u);
            for (const auto& b : sc->objects) EXPECT_LT(b.y + b.h, kSceneSize / 2 + 1);
        }
    }
    EXPECT_NE(s.scene("brisbane-01"), nullptr);
    EXPECT_EQ(s.scene("brisbane-99"), nullptr);
}

// One motif per (region, family): a connected 3..6 cell patch inside the
// region whose cells carry the planted values.
TEST(Sandbox, MotifsArePlantedWhereRecorded) {
    const Sandbox& s = shared_sandbox();
    std::map<std::string, int> per_kind;
    for (const auto& m : s.motifs()) {
        per_kind[to_string(m.product) + "/" + m.kind]++;
        EXPECT_GE(m.cells.size(), 3u);
        EXPECT_LE(m.cells.size(), 6u);
        EXPECT_TRUE(connected4(m.cells)) << m.kind << " in " << m.region;
        const auto& region = s.region_cells(m.region);
        const auto& r = s.product(m.product);
        for (const auto& c : m.cells) {
            EXPECT_TRUE(std::binary_search(region.begin(), region.end(), c));
            for (std::size_t d = 0; d < r.dates().size(); ++d) {
                const double v = r.at(d, c);
                switch (m.product) {
                    case Product::ndvi: EXPECT_TRUE(v >= 0.08 && v <= 0.12) << v; break;
                    case Product::ref_b2: EXPECT_TRUE(v >= 0.55 && v <= 0.65) << v; break;
                    case Product::lst: EXPECT_TRUE(v >= 311 && v <= 314) << v; break;
                    case Product::aod550: EXPECT_TRUE(v >= 0.7 && v <= 1.0) << v; break;
                    case Product::built_s: EXPECT_TRUE(v >= 150000 && v <= 250000) << v; break;
                    case Product::population: EXPECT_TRUE(v >= 12000 && v <= 20000) << v; break;
                    case Product::canopy: EXPECT_TRUE(v >= 5 && v <= 15) << v; break;
                    case Product::treeloss: EXPECT_EQ(v, 1.0); break;
                    default: break;
                }
            }
        }
    }
    for (const auto& [kind, n] : per_kind) EXPECT_EQ(n, 8) << kind;
}

// The low-NDVI patch is the only sub-0.2 area: background NDVI stays above.
TEST(Sandbox, BackgroundStaysClearOfMotifThresholds) {
    const Sandbox& s = shared_sandbox();
    const auto& ndvi = s.product(Product::ndvi);
    std::set<Cell> planted;
    for (const auto& m : s.motifs()) {
        if (m.product == Product::ndvi) planted.insert(m.cells.begin(), m.cells.end());
    }
    for (int r = 0; r < s.rows(); ++r) {
        for (int c = 0; c < s.cols(); ++c) {
            if (planted.count({r, c})) continue;
            ASSERT_GT(ndvi.mean_over(ndvi.dates(), {r, c}), 0.35);
        }
    }
}

TEST(Analysis, DatesInRange) {
    const auto months = product_dates(Product::ndvi);
    EXPECT_EQ(dates_in_range(months, {"2024-03", "2024-05"}),
              (std::vector<std::string>{"2024-03", "2024-04", "2024-05"}));
    EXPECT_EQ(dates_in_range(months, {"2024", "2024"}).size(), 12u);
    EXPECT_THROW(dates_in_range(months, {"2023-12", "2024-02"}), GeoError);
    EXPECT_EQ(dates_in_range(product_dates(Product::canopy), {"2020", "2020"}), std::vector<std::string>{"2020"});
}

// Union-find oracle for 4-connected components on random cell sets.
TEST(Analysis, ComponentsMatchUnionFind) {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        std::set<Cell> set;
        const int n = 1 + static_cast<int>(rng() % 60);
        for (int i = 0; i < n; ++i) set.insert({static_cast<int>(rng() % 10), static_cast<int>(rng() % 10)});
        std::vector<Cell> cells(set.begin(), set.end());
        std::vector<int> parent(cells.size());
        std::iota(parent.begin(), parent.end(), 0);
        std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
        for (std::size_t i = 0; i < cells.size(); ++i) {
            for (std::size_t j = i + 1; j < cells.size(); ++j) {
                if (std::abs(cells[i].row - cells[j].row) + std::abs(cells[i].col - cells[j].col) == 1) {
                    parent[find(static_cast<int>(i))] = find(static_cast<int>(j));
                }
            }
        }
        std::map<int, std::vector<Cell>> groups;
        for (std::size_t i = 0; i < cells.size(); ++i) groups[find(static_cast<int>(i))].push_back(cells[i]);
        std::set<std::vector<Cell>> want;
        for (auto& [k, g] : groups) want.insert(g);

        const auto got = connected_components(cells);
        std::set<std::vector<Cell>> got_set;
        for (auto g : got) {
            std::sort(g.begin(), g.end());
            got_set.insert(g);
        }
        ASSERT_EQ(got_set, want);
        for (std::size_t i = 1; i < got.size(); ++i) {
            ASSERT_GE(got[i - 1].size(), got[i].size());
            if (got[i - 1].size() == got[i].size()) {
                ASSERT_LT(*std::min_element(got[i - 1].begin(), got[i - 1].end()),
                          *std::min_element(got[i].begin(), got[i].end()));
            }
        }
    }
}

TEST(Analysis, ThresholdCellsMatchBruteForce) {
    const Sandbox& s = shared_sandbox();
    const auto& lst = s.product(Product::lst);
    const auto& cells = s.region_cells("sydney");
    const std::vector<std::string> dates{"2024-06", "2024-07"};
    const auto got = threshold_cells(lst, dates, cells, Comparator::gt, 305.0);
    std::vector<Cell> want;
    for (const auto& c : cells) {
        if ((lst.at(5, c) + lst.at(6, c)) / 2.0 > 305.0) want.push_back(c);
    }
    EXPECT_EQ(got, want);
    EXPECT_FALSE(got.empty());
    EXPECT_EQ(comparator_from_string("≥"), Comparator::ge);
    EXPECT_THROW(comparator_from_string("~"), GeoError);
}

TEST(Analysis, LowNdviClusterIsThePlantedPatch) {
    const Sandbox& s = shared_sandbox();
    for (const auto& region : s.regions()) {
        const auto motifs = s.motifs_for(Product::ndvi, region.name);
        ASSERT_EQ(motifs.size(), 1u);
        const auto& ndvi = s.product(Product::ndvi);
        const auto clusters = low_value_clusters(ndvi, ndvi.dates(), s.region_cells(region.name), 0.2, 2);
        ASSERT_EQ(clusters.size(), 1u) << region.name;
        auto c = clusters[0];
        std::sort(c.begin(), c.end());
        EXPECT_EQ(c, motifs[0].cells);
    }
}

TEST(Analysis, ReforestationSeparatesScarsFromClearings) {
    const Sandbox& s = shared_sandbox();
    const auto& canopy = s.product(Product::canopy);
    const auto& loss = s.product(Product::treeloss);
    for (const auto& region : s.regions()) {
        const auto& cells = s.region_cells(region.name);
        const auto with_loss = reforestation_cells(canopy, loss, cells, 30, true);
        const auto any = reforestation_cells(canopy, loss, cells, 30, false);
        EXPECT_FALSE(with_loss.empty());
        EXPECT_GT(any.size(), with_loss.size()) << region.name;  // clearings have no loss
        for (const auto& c : with_loss) EXPECT_EQ(loss.at(0, c), 1.0);
    }
    EXPECT_THROW(reforestation_cells(loss, canopy, s.region_cells("gympie"), 30, true), GeoError);
}

// Recorder soundness: every handler's access set is exactly its selection.
TEST(Tools, LoadRecordsExactlyTheSelection) {
    Workspace ws(shared_sandbox());
    const auto r = call(ws, "Database", "load_product",
                        {{"product", "NDVI"}, {"region", "Gympie"}, {"date_range", "2024-02..2024-04"}});
    ASSERT_EQ(r.status, ToolStatus::ok) << r.payload;
    std::vector<DataPointKey> want;
    for (const auto& c : shared_sandbox().region_cells("gympie")) {
        for (const char* d : {"2024-02", "2024-03", "2024-04"}) want.push_back({Product::ndvi, c, d});
    }
    std::sort(want.begin(), want.end());
    EXPECT_EQ(r.accessed, want);
    EXPECT_EQ(ws.recorder().keys(), want);

    // analysis and map tools read handles and record nothing new
    for (auto [agent, tool, args] : std::vector<std::tuple<std::string, std::string, Json>>{
             {"Database", "describe_dataset", {{"dataset", "ndvi"}}},
             {"DataOps", "zonal_stats", {{"dataset", "ndvi"}}},
             {"DataOps", "filter_dates", {{"dataset", "ndvi"}, {"date_range", "2024-03"}}},
             {"Agriculture", "low_ndvi_clusters", {{"dataset", "ndvi"}, {"threshold", 0.2}}},
             {"Map", "map_add_layer", {{"source", "low_ndvi_clusters"}}},
             {"Map", "map_snapshot", Json::object()}}) {
        const auto res = call(ws, agent, tool, args);
        EXPECT_EQ(res.status, ToolStatus::ok) << tool << ": " << res.payload;
        EXPECT_TRUE(res.accessed.empty()) << tool;
    }
    EXPECT_EQ(ws.recorder().keys(), want);
    EXPECT_EQ(ws.dataset("ndvi")->dates, std::vector<std::string>{"2024-03"});
}

TEST(Tools, ErrorsCarryCodesAndDependencyHints) {
    Workspace ws(shared_sandbox());
    auto r = call(ws, "Agriculture", "low_ndvi_clusters", {{"dataset", "ndvi"}, {"threshold", 0.2}});
    EXPECT_EQ(r.status, ToolStatus::error);
    EXPECT_EQ(payload_error_code(r.payload), "MissingProduct");
    EXPECT_EQ(Json::parse(r.payload)["needs"], "Database");

    r = call(ws, "Map", "map_add_layer", {{"source", "heatwave_zones"}});
    EXPECT_EQ(Json::parse(r.payload)["needs"], "Climate");

    r = call(ws, "Database", "load_product", {{"product", "ndvi"}, {"region", "atlantis"}, {"date_range", "2024"}});
    EXPECT_EQ(payload_error_code(r.payload), "UnknownRegion");
    r = call(ws, "Database", "load_product", {{"product", "ndvi"}, {"region", "gympie"}, {"date_range", "2023"}});
    EXPECT_EQ(payload_error_code(r.payload), "DateOutOfRange");
    r = call(ws, "Database", "load_product", {{"product", "ndvi"}});
    EXPECT_EQ(payload_error_code(r.payload), "InvalidArguments");
    r = call(ws, "Vision", "detect_objects", {{"scene_id", "gympie-01"}, {"class", "ship"}});
    EXPECT_EQ(payload_error_code(r.payload), "MissingProduct");
    EXPECT_TRUE(ws.recorder().keys().empty());
}

TEST(Tools, WrongProductIsRejected) {
    Workspace ws(shared_sandbox());
    call(ws, "Database", "load_product", {{"product", "lst"}, {"region", "gympie"}, {"date_range", "2024-01"}});
    const auto r = call(ws, "Agriculture", "low_ndvi_clusters", {{"dataset", "lst"}, {"threshold", 0.2}});
    EXPECT_EQ(r.status, ToolStatus::error);
}

TEST(Tools, MapLayersKeepOrderAndSnapshotIsIdempotent) {
    Workspace ws(shared_sandbox());
    call(ws, "Database", "load_product", {{"product", "ndvi"}, {"region", "sydney"}, {"date_range", "2024"}});
    call(ws, "Database", "load_product", {{"product", "lst"}, {"region", "sydney"}, {"date_range", "2024-01"}});
    call(ws, "Map", "map_add_layer", {{"source", "ndvi"}});
    EXPECT_EQ(ws.map().layers.size(), 1u);
    call(ws, "Map", "map_add_layer", {{"source", "lst"}, {"style", "Heat"}});
    ASSERT_EQ(ws.map().layers.size(), 2u);
    EXPECT_EQ(ws.map().layers[0].product, "ndvi");
    EXPECT_EQ(ws.map().layers[0].date, "2024-01..2024-12");
    EXPECT_EQ(ws.map().layers[1].style, "heat");
    const auto a = call(ws, "Map", "map_snapshot", Json::object());
    const auto b = call(ws, "Map", "map_snapshot", Json::object());
    EXPECT_EQ(a.payload, b.payload);
    EXPECT_EQ(ws.map().layers.size(), 2u);
    call(ws, "Map", "map_add_marker", {{"region", "Sydney"}});
    EXPECT_EQ(ws.map().annotations.size(), 1u);
}

TEST(Vision, IouAndGreedyMatching) {
    const Box a{0, 0, 10, 10, "ship"};
    EXPECT_DOUBLE_EQ(iou(a, a), 1.0);
    EXPECT_DOUBLE_EQ(iou(a, {5, 0, 10, 10, "ship"}), 50.0 / 150.0);
    EXPECT_DOUBLE_EQ(iou(a, {20, 20, 5, 5, "ship"}), 0.0);

    // one truth, two candidates: only the better one matches
    const auto m = match_boxes({{1, 0, 10, 10, "ship"}, {3, 0, 10, 10, "ship"}}, {a});
    EXPECT_EQ(m.tp, 1);
    EXPECT_EQ(m.fp, 1);
    EXPECT_EQ(m.fn, 0);
    // class must agree
    EXPECT_EQ(match_boxes({{0, 0, 10, 10, "vehicle"}}, {a}).tp, 0);
    EXPECT_DOUBLE_EQ(MatchCounts{}.f1(), 1.0);
    EXPECT_DOUBLE_EQ((MatchCounts{0, 0, 3}).f1(), 0.0);
    EXPECT_DOUBLE_EQ((MatchCounts{2, 1, 1}).f1(), 4.0 / 6.0);
}

TEST(Vision, PerfectModelReproducesAnnotations) {
    const auto perfect = ConfusionModel::perfect();
    for (const auto& scene : shared_sandbox().scenes()) {
        EXPECT_EQ(classify(scene, perfect), scene.landcover);
        for (const auto& cls : object_classes()) {
            std::vector<Box> truth;
            for (const auto& b : scene.objects) {
                if (b.cls == cls) truth.push_back(b);
            }
            const auto pred = detect(scene, cls, perfect);
            const auto m = match_boxes(pred, truth);
            EXPECT_EQ(m.fp + m.fn, 0) << scene.scene_id;
        }
    }
}

// Recall 0.5, precision 1: F1 follows from enumerating the kept boxes.
TEST(Vision, HalfRecallF1FromEnumeration) {
    ConfusionModel half;
    for (const auto& c : object_classes()) {
        half.recall[c] = 0.5;
        half.precision[c] = 1.0;
    }
    MatchCounts total;
    long kept = 0, objects = 0;
    for (const auto& scene : shared_sandbox().scenes()) {
        for (std::size_t i = 0; i < scene.objects.size(); ++i) kept += detection_kept(half, scene, i) ? 1 : 0;
        objects += static_cast<long>(scene.objects.size());
        for (const auto& cls : object_classes()) {
            std::vector<Box> truth;
            for (const auto& b : scene.objects) {
                if (b.cls == cls) truth.push_back(b);
            }
            total += match_boxes(detect(scene, cls, half), truth);
        }
    }
    EXPECT_EQ(total.tp, kept);
    EXPECT_EQ(total.fp, 0);
    EXPECT_EQ(total.fn, objects - kept);
    const double f1 = 2.0 * kept / (2.0 * kept + (objects - kept));
    EXPECT_DOUBLE_EQ(total.f1(), f1);
    EXPECT_GT(kept, objects / 4);
    EXPECT_LT(kept, objects * 3 / 4);
}

TEST(Vision, ZeroPredictionsScoreZero) {
    const auto& scene = shared_sandbox().scenes().front();
    EXPECT_DOUBLE_EQ(match_boxes({}, scene.objects).f1(), 0.0);
}
