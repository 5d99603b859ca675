// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "geosquad/core/types.hpp"
#include "geosquad/sandbox/regions.hpp"

namespace geosquad {

inline constexpr int kSceneSize = 512;

inline const std::vector<std::string>& object_classes() {
    static const std::vector<std::string> classes{"airplane", "ship", "vehicle", "building"};
    return classes;
}

inline const std::vector<std::string>& landcover_classes() {
    static const std::vector<std::string> classes{"cropland", "forest", "urban", "water", "grassland", "bare"};
    return classes;
}

struct Box {
    int x = 0;
    int y = 0;
    int w = 0;
    int h = 0;
    std::string cls;
    bool operator==(const Box&) const = default;
};

void to_json(Json& j, const Box& b);
void from_json(const Json& j, Box& b);

double iou(const Box& a, const Box& b);

// Ground truth for one scene. Annotated objects sit in the upper half of the
// scene; the confusion model puts its false positives in the lower half.
struct VisionAnnotation {
    std::string scene_id;
    std::string region;
    Cell cell;  // grid cell the scene is centred on
    std::vector<Box> objects;
    std::string landcover;
    bool operator==(const VisionAnnotation&) const = default;
};

void to_json(Json& j, const VisionAnnotation& a);
void from_json(const Json& j, VisionAnnotation& a);

struct ConfusionModel {
    std::map<std::string, double> recall;     // per class, default 0.85
    std::map<std::string, double> precision;  // per class, default 0.9
    double lcc_accuracy = 0.8;
    std::uint64_t seed = 11;

    double recall_for(const std::string& cls) const;
    double precision_for(const std::string& cls) const;
    static ConfusionModel perfect();
};

void to_json(Json& j, const ConfusionModel& m);
void from_json(const Json& j, ConfusionModel& m);

// `per_region` scenes per region, ids "<region>-NN".
std::vector<VisionAnnotation> generate_scenes(std::uint64_t seed, const std::vector<RegionMask>& regions, int rows,
                                              int cols, int per_region);

// Whether the model keeps ground-truth object `index` of the scene.
bool detection_kept(const ConfusionModel& model, const VisionAnnotation& scene, std::size_t index);

std::vector<Box> detect(const VisionAnnotation& scene, const std::string& cls, const ConfusionModel& model);
std::string classify(const VisionAnnotation& scene, const ConfusionModel& model);

struct MatchCounts {
    long tp = 0;
    long fp = 0;
    long fn = 0;
    MatchCounts& operator+=(const MatchCounts& o) {
        tp += o.tp;
        fp += o.fp;
        fn += o.fn;
        return *this;
    }
    // 1.0 when there is nothing to find and nothing was predicted.
    double f1() const;
};

// Greedy by IoU: the highest-IoU same-class pair at or above `threshold`
// matches first, repeated until no pair is left.
MatchCounts match_boxes(const std::vector<Box>& predicted, const std::vector<Box>& truth, double threshold = 0.5);

}  // namespace geosquad
