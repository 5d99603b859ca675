// SPDX-License-Identifier: Apache-2.0
#include "geosquad/sandbox/vision.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "geosquad/core/hash.hpp"
#include "geosquad/core/json_io.hpp"

namespace geosquad {

namespace {

std::uint64_t scene_hash(const VisionAnnotation& s) { return fnv1a64(s.scene_id); }

std::uint64_t class_hash(const std::string& cls) { return fnv1a64(cls); }

}  // namespace

void to_json(Json& j, const Box& b) { j = Json{{"x", b.x}, {"y", b.y}, {"w", b.w}, {"h", b.h}, {"class", b.cls}}; }

void from_json(const Json& j, Box& b) {
    b.x = j.at("x").get<int>();
    b.y = j.at("y").get<int>();
    b.w = j.at("w").get<int>();
    b.h = j.at("h").get<int>();
    b.cls = j.value("class", std::string{});
}

double iou(const Box& a, const Box& b) {
    const int x0 = std::max(a.x, b.x);
    const int y0 = std::max(a.y, b.y);
    const int x1 = std::min(a.x + a.w, b.x + b.w);
    const int y1 = std::min(a.y + a.h, b.y + b.h);
    const double inter = static_cast<double>(std::max(0, x1 - x0)) * std::max(0, y1 - y0);
    const double uni = static_cast<double>(a.w) * a.h + static_cast<double>(b.w) * b.h - inter;
    return uni <= 0 ? 0.0 : inter / uni;
}

void to_json(Json& j, const VisionAnnotation& a) {
    j = Json{{"scene_id", a.scene_id},
             {"region", a.region},
             {"cell", a.cell},
             {"objects", a.objects},
             {"landcover", a.landcover}};
}

void from_json(const Json& j, VisionAnnotation& a) {
    a.scene_id = j.at("scene_id").get<std::string>();
    a.region = j.value("region", std::string{});
    a.cell = j.value("cell", Cell{});
    a.objects = j.value("objects", std::vector<Box>{});
    a.landcover = j.at("landcover").get<std::string>();
}

double ConfusionModel::recall_for(const std::string& cls) const {
    auto it = recall.find(cls);
    return it == recall.end() ? 0.85 : it->second;
}

double ConfusionModel::precision_for(const std::string& cls) const {
    auto it = precision.find(cls);
    return it == precision.end() ? 0.9 : it->second;
}

ConfusionModel ConfusionModel::perfect() {
    ConfusionModel m;
    for (const auto& c : object_classes()) {
        m.recall[c] = 1.0;
        m.precision[c] = 1.0;
    }
    m.lcc_accuracy = 1.0;
    return m;
}

void to_json(Json& j, const ConfusionModel& m) {
    j = Json{{"recall", m.recall}, {"precision", m.precision}, {"lcc_accuracy", m.lcc_accuracy}, {"seed", m.seed}};
}

void from_json(const Json& j, ConfusionModel& m) {
    m.recall = j.value("recall", std::map<std::string, double>{});
    m.precision = j.value("precision", std::map<std::string, double>{});
    m.lcc_accuracy = j.value("lcc_accuracy", 0.8);
    m.seed = j.value("seed", std::uint64_t{11});
}

std::vector<VisionAnnotation> generate_scenes(std::uint64_t seed, const std::vector<RegionMask>& regions, int rows,
                                              int cols, int per_region) {
    std::vector<VisionAnnotation> out;
    const auto& classes = object_classes();
    const auto& covers = landcover_classes();
    for (std::size_t r = 0; r < regions.size(); ++r) {
        const auto cells = regions[r].cells(rows, cols);
        if (cells.empty()) continue;
        for (int s = 0; s < per_region; ++s) {
            auto draw = [&](std::uint64_t a, std::uint64_t b = 0) { return mix({seed, 0x5CE9E, r, std::uint64_t(s), a, b}); };
            VisionAnnotation scene;
            char id[64];
            std::snprintf(id, sizeof id, "%s-%02d", regions[r].name.c_str(), s);
            scene.scene_id = id;
            scene.region = regions[r].name;
            scene.cell = cells[draw(1) % cells.size()];
            scene.landcover = covers[draw(2) % covers.size()];
            // Objects on a 4x2 slot layout in the upper half so they never overlap.
            const int count = 1 + static_cast<int>(draw(3) % 6);
            for (int k = 0; k < count; ++k) {
                const int slot_x = (k % 4) * 128;
                const int slot_y = (k / 4) * 128;
                Box b;
                b.w = 24 + static_cast<int>(draw(4, k) % 64);
                b.h = 24 + static_cast<int>(draw(5, k) % 64);
                b.x = slot_x + 8 + static_cast<int>(draw(6, k) % static_cast<std::uint64_t>(120 - 8 - b.w));
                b.y = slot_y + 8 + static_cast<int>(draw(7, k) % static_cast<std::uint64_t>(120 - 8 - b.h));
                b.cls = classes[draw(8, k) % classes.size()];
                scene.objects.push_back(b);
            }
            out.push_back(std::move(scene));
        }
    }
    return out;
}

bool detection_kept(const ConfusionModel& model, const VisionAnnotation& scene, std::size_t index) {
    const Box& b = scene.objects.at(index);
    return unit_interval(mix({model.seed, scene_hash(scene), index, class_hash(b.cls)})) < model.recall_for(b.cls);
}

std::vector<Box> detect(const VisionAnnotation& scene, const std::string& cls, const ConfusionModel& model) {
    std::vector<Box> out;
    for (std::size_t i = 0; i < scene.objects.size(); ++i) {
        const Box& b = scene.objects[i];
        if (b.cls != cls || !detection_kept(model, scene, i)) continue;
        Box p = b;
        // small localisation error, IoU stays well above 0.5
        p.x += 1 + static_cast<int>(mix({model.seed, scene_hash(scene), i, 0xB0}) % 3);
        out.push_back(p);
    }
    // False positives so that expected precision matches the model.
    const double precision = std::clamp(model.precision_for(cls), 1e-6, 1.0);
    const auto extra = static_cast<std::size_t>(std::lround(static_cast<double>(out.size()) * (1.0 - precision) / precision));
    for (std::size_t k = 0; k < extra && k < 8; ++k) {
        Box fp;
        fp.cls = cls;
        fp.w = 32;
        fp.h = 32;
        fp.x = static_cast<int>(k % 4) * 128 + 16;
        fp.y = kSceneSize / 2 + static_cast<int>(k / 4) * 128 + 16;
        out.push_back(fp);
    }
    return out;
}

std::string classify(const VisionAnnotation& scene, const ConfusionModel& model) {
    const auto& covers = landcover_classes();
    if (unit_interval(mix({model.seed, scene_hash(scene), 0x1CC})) < model.lcc_accuracy) return scene.landcover;
    auto it = std::find(covers.begin(), covers.end(), scene.landcover);
    const std::size_t idx = it == covers.end() ? 0 : static_cast<std::size_t>(it - covers.begin());
    return covers[(idx + 1) % covers.size()];
}

double MatchCounts::f1() const {
    const long denom = 2 * tp + fp + fn;
    return denom == 0 ? 1.0 : 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
}

MatchCounts match_boxes(const std::vector<Box>& predicted, const std::vector<Box>& truth, double threshold) {
    std::vector<std::tuple<double, std::size_t, std::size_t>> pairs;
    for (std::size_t p = 0; p < predicted.size(); ++p) {
        for (std::size_t t = 0; t < truth.size(); ++t) {
            if (predicted[p].cls != truth[t].cls) continue;
            const double v = iou(predicted[p], truth[t]);
            if (v >= threshold) pairs.emplace_back(v, p, t);
        }
    }
    std::sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) {
        if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) > std::get<0>(b);
        return std::tie(std::get<1>(a), std::get<2>(a)) < std::tie(std::get<1>(b), std::get<2>(b));
    });
    std::vector<bool> used_p(predicted.size()), used_t(truth.size());
    MatchCounts m;
    for (const auto& [v, p, t] : pairs) {
        if (used_p[p] || used_t[t]) continue;
        used_p[p] = used_t[t] = true;
        ++m.tp;
    }
    m.fp = static_cast<long>(predicted.size()) - m.tp;
    m.fn = static_cast<long>(truth.size()) - m.tp;
    return m;
}

}  // namespace geosquad
