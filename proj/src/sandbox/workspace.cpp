// SPDX-License-Identifier: Apache-2.0
#include "geosquad/sandbox/workspace.hpp"

#include "geosquad/core/json_io.hpp"

namespace geosquad {

void to_json(Json& j, const MapLayer& l) {
    j = Json{{"source", l.source}, {"product", l.product}, {"region", l.region},
             {"date", l.date},     {"style", l.style},     {"cells", l.cells}};
}

void from_json(const Json& j, MapLayer& l) {
    l.source = j.at("source").get<std::string>();
    l.product = j.value("product", std::string{});
    l.region = j.value("region", std::string{});
    l.date = j.value("date", std::string{});
    l.style = j.value("style", std::string{});
    l.cells = j.value("cells", std::vector<Cell>{});
}

void to_json(Json& j, const MapAnnotation& a) { j = Json{{"kind", a.kind}, {"label", a.label}, {"cells", a.cells}}; }

void from_json(const Json& j, MapAnnotation& a) {
    a.kind = j.at("kind").get<std::string>();
    a.label = j.value("label", std::string{});
    a.cells = j.value("cells", std::vector<Cell>{});
}

void to_json(Json& j, const MapState& m) { j = Json{{"layers", m.layers}, {"annotations", m.annotations}}; }

void from_json(const Json& j, MapState& m) {
    m.layers = j.value("layers", std::vector<MapLayer>{});
    m.annotations = j.value("annotations", std::vector<MapAnnotation>{});
}

const Dataset* Workspace::dataset(const std::string& handle) const {
    auto it = datasets_.find(handle);
    return it == datasets_.end() ? nullptr : &it->second;
}

std::string date_span(const std::vector<std::string>& dates) {
    if (dates.empty()) return "";
    if (dates.size() == 1) return dates.front();
    return dates.front() + ".." + dates.back();
}

const ResultSet* Workspace::result(const std::string& name) const {
    auto it = results_.find(name);
    return it == results_.end() ? nullptr : &it->second;
}

}  // namespace geosquad
