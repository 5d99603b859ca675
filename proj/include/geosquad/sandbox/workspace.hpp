// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "geosquad/core/types.hpp"
#include "geosquad/sandbox/sandbox.hpp"

namespace geosquad {

// A selection of cells and dates of one product. Workspaces key datasets by
// product name, which is the handle agents pass back to tools.
struct Dataset {
    Product product = Product::ndvi;
    std::string region;
    std::vector<std::string> dates;
    std::vector<Cell> cells;  // sorted
};

// Output of an analysis tool, keyed by the tool name that produced it.
struct ResultSet {
    std::string name;
    Product product = Product::ndvi;
    std::vector<std::vector<Cell>> clusters;  // empty for plain cell sets
    std::vector<Cell> cells;                  // union, sorted
    std::string region;
    std::string date;  // date span of the source selection
};

// "2024-03" for one date, "2024-01..2024-12" for several.
std::string date_span(const std::vector<std::string>& dates);

struct MapLayer {
    std::string source;
    std::string product;
    std::string region;
    std::string date;
    std::string style;
    std::vector<Cell> cells;
    bool operator==(const MapLayer&) const = default;
};

struct MapAnnotation {
    std::string kind;  // "marker" or "highlight"
    std::string label;
    std::vector<Cell> cells;
    bool operator==(const MapAnnotation&) const = default;
};

struct MapState {
    std::vector<MapLayer> layers;
    std::vector<MapAnnotation> annotations;
    bool operator==(const MapState&) const = default;
};

void to_json(Json& j, const MapLayer& l);
void from_json(const Json& j, MapLayer& l);
void to_json(Json& j, const MapAnnotation& a);
void from_json(const Json& j, MapAnnotation& a);
void to_json(Json& j, const MapState& m);
void from_json(const Json& j, MapState& m);

// Append-only record of the datapoints handlers touched during one run.
class AccessRecorder {
public:
    void record(const DataPointKey& key) { keys_.insert(key); }
    void record(const std::vector<DataPointKey>& keys) { keys_.insert(keys.begin(), keys.end()); }
    std::vector<DataPointKey> keys() const { return {keys_.begin(), keys_.end()}; }
    std::size_t size() const { return keys_.size(); }

private:
    std::set<DataPointKey> keys_;
};

// Per-task mutable state over a shared read-only sandbox.
class Workspace {
public:
    explicit Workspace(const Sandbox& sandbox) : sandbox_(&sandbox) {}

    const Sandbox& sandbox() const { return *sandbox_; }

    void put_dataset(Dataset d) { datasets_[to_string(d.product)] = std::move(d); }
    const Dataset* dataset(const std::string& handle) const;
    void put_result(ResultSet r) { results_[r.name] = std::move(r); }
    const ResultSet* result(const std::string& name) const;

    void mark_scenes_loaded(const std::string& region) { scene_regions_.insert(region); }
    bool scenes_loaded(const std::string& region) const { return scene_regions_.count(region) != 0; }

    AccessRecorder& recorder() { return recorder_; }
    const AccessRecorder& recorder() const { return recorder_; }
    MapState& map() { return map_; }
    const MapState& map() const { return map_; }

private:
    const Sandbox* sandbox_;
    std::map<std::string, Dataset> datasets_;
    std::map<std::string, ResultSet> results_;
    std::set<std::string> scene_regions_;
    AccessRecorder recorder_;
    MapState map_;
};

}  // namespace geosquad
