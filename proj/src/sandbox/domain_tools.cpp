// SPDX-License-Identifier: Apache-2.0
#include "geosquad/sandbox/domain_tools.hpp"

#include <algorithm>

#include "geosquad/core/json_io.hpp"
#include "geosquad/registry/filler.hpp"
#include "geosquad/sandbox/analysis.hpp"
#include "geosquad/sandbox/workspace.hpp"

namespace geosquad {

namespace {

constexpr std::size_t kMaxListedCells = 24;

class BadArgs : public GeoError {
public:
    explicit BadArgs(const std::string& m) : GeoError("InvalidArguments", m) {}
};

std::string str_arg(const Json& args, const char* key) {
    if (!args.is_object() || !args.contains(key)) throw BadArgs(std::string("missing argument '") + key + "'");
    const Json& v = args.at(key);
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    throw BadArgs(std::string("argument '") + key + "' must be a string");
}

double num_arg(const Json& args, const char* key, std::optional<double> fallback = std::nullopt) {
    if (!args.is_object() || !args.contains(key)) {
        if (fallback) return *fallback;
        throw BadArgs(std::string("missing argument '") + key + "'");
    }
    const Json& v = args.at(key);
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        try {
            std::size_t used = 0;
            const std::string s = v.get<std::string>();
            const double d = std::stod(s, &used);
            if (used == s.size()) return d;
        } catch (const std::logic_error&) {
        }
    }
    throw BadArgs(std::string("argument '") + key + "' must be a number");
}

bool bool_arg(const Json& args, const char* key, bool fallback) {
    if (!args.is_object() || !args.contains(key)) return fallback;
    const Json& v = args.at(key);
    if (v.is_boolean()) return v.get<bool>();
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s == "true") return true;
        if (s == "false") return false;
    }
    throw BadArgs(std::string("argument '") + key + "' must be true or false");
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

Json cells_json(const std::vector<Cell>& cells) {
    Json out = Json::array();
    for (std::size_t i = 0; i < cells.size() && i < kMaxListedCells; ++i) out.push_back(cells[i]);
    return out;
}

// Dataset lookup that turns an absent handle into a dependency error.
const Dataset& need_dataset(const Workspace& ws, const std::string& handle) {
    const Dataset* d = ws.dataset(lower(handle));
    if (!d) throw GeoError("MissingProduct", lower(handle) + " not loaded");
    return *d;
}

const Dataset& need_product(const Workspace& ws, const std::string& handle, Product expected) {
    const Dataset& d = need_dataset(ws, handle);
    if (d.product != expected) {
        throw GeoError("WrongProduct", "expected " + to_string(expected) + ", got " + to_string(d.product));
    }
    return d;
}

struct ToolDef {
    Domain domain;
    const char* name;
    const char* description;
    std::vector<ToolParam> params;
    std::function<Json(const Json&, Workspace&, std::vector<DataPointKey>&)> run;
};

ToolHandler wrap(const ToolDef& def) {
    return [run = def.run](const Json& args, Workspace& ws) -> ToolResult {
        std::vector<DataPointKey> accessed;
        try {
            Json payload = run(args, ws, accessed);
            ws.recorder().record(accessed);
            return tool_ok(payload, std::move(accessed));
        } catch (const GeoError& e) {
            const std::string what = e.what();
            const std::string message = what.substr(std::min(what.size(), e.code().size() + 2));
            Json extra = Json::object();
            // Which agent could supply the missing input.
            if (e.code() == "MissingProduct") {
                const std::string owner = tool_owner(message.substr(0, message.find(' ')));
                extra["needs"] = owner.empty() ? "Database" : owner;
            }
            return tool_error(e.code(), message, extra);
        }
    };
}

Json threshold_tool(const Json& args, Workspace& ws, Product product, Comparator op, const char* result_name) {
    const Dataset& d = need_product(ws, str_arg(args, "dataset"), product);
    const double value = num_arg(args, "threshold");
    const auto& raster = ws.sandbox().product(product);
    auto cells = threshold_cells(raster, d.dates, d.cells, op, value);
    ResultSet r{result_name, product, {}, cells, d.region, date_span(d.dates)};
    ws.put_result(r);
    return Json{{"result", result_name}, {"region", d.region}, {"count", cells.size()}, {"cells", cells_json(cells)}};
}

ToolParam p(const char* name, const char* type, bool required = true) { return {name, type, required}; }

const std::vector<ToolDef>& tool_defs() {
    static const std::vector<ToolDef> defs = [] {
        std::vector<ToolDef> v;
        // Database
        v.push_back({Domain::database, "load_product", "Load a raster product for a region and date range",
                     {p("product", "product"), p("region", "region"), p("date_range", "date_range")},
                     [](const Json& a, Workspace& ws, std::vector<DataPointKey>& acc) {
                         const std::string name = lower(str_arg(a, "product"));
                         const auto product = try_product(name);
                         if (!product || !is_raster(*product)) throw GeoError("MissingProduct", "no product '" + name + "'");
                         const Dataset& d = load_product(ws, *product, str_arg(a, "region"), str_arg(a, "date_range"));
                         acc = selection_keys(d);
                         return Json{{"dataset", to_string(d.product)}, {"region", d.region},
                                     {"dates", d.dates}, {"cells", d.cells.size()}};
                     }});
        v.push_back({Domain::database, "load_scenes", "List the satellite image scenes of a region",
                     {p("region", "region")},
                     [](const Json& a, Workspace& ws, std::vector<DataPointKey>&) {
                         const auto region = lower(str_arg(a, "region"));
                         ws.sandbox().region_cells(region);
                         Json ids = Json::array();
                         for (const auto* s : ws.sandbox().scenes_in(region)) ids.push_back(s->scene_id);
                         ws.mark_scenes_loaded(region);
                         return Json{{"region", region}, {"scenes", ids}};
                     }});
        v.push_back({Domain::database, "describe_dataset", "Describe a loaded dataset",
                     {p("dataset", "handle")},
                     [](const Json& a, Workspace& ws, std::vector<DataPointKey>&) {
                         const Dataset& d = need_dataset(ws, str_arg(a, "dataset"));
                         const auto& info = product_info(d.product);
                         return Json{{"dataset", to_string(d.product)}, {"region", d.region}, {"dates", d.dates},
                                     {"cells", d.cells.size()}, {"units", info.units}, {"source", info.source}};
                     }});
        // DataOps
        v.push_back({Domain::dataops, "filter_region", "Restrict a dataset to a region",
                     {p("dataset", "handle"), p("region", "region")},
                     [](const Json& a, Workspace& ws, std::vector<DataPointKey>&) {
                         Dataset d = filter_region(need_dataset(ws, str_arg(a, "dataset")), ws.sandbox(), str_arg(a, "region"));
                         Json out{{"dataset", to_string(d.product)}, {"region", d.region}, {"cells", d.cells.size()}};
                         ws.put_dataset(std::move(d));
                         return out;
                     }});
        v.push_back({Domain::dataops, "filter_dates", "Restrict a dataset to a date range",
                     {p("dataset", "handle"), p("date_range", "date_range")},
                     [](const Json& a, Workspace& ws, std::vector<DataPointKey>&) {
                         Dataset d = filter_dates(need_dataset(ws, str_arg(a, "dataset")), str_arg(a, "date_range"));
                         Json out{{"dataset", to_string(d.product)}, {"dates", d.dates}};
                         ws.put_dataset(std::move(d));
                         return out;
                     }});
        v.push_back({Domain::dataops, "zonal_stats", "Mean, min and max of a dataset",
                     {p("dataset", "handle")},
                     [](const Json& a, Workspace& ws, std::vector<DataPointKey>&) {
                         const Dataset& d = need_dataset(ws, str_arg(a, "dataset"));
                         const auto& raster = ws.sandbox().product(d.product);
                         double sum = 0, lo = 0, hi = 0;
                         for (std::size_t i = 0; i < d.cells.size(); ++i) {
                             const double m = raster.mean_over(d.dates, d.cells[i]);
                             sum += m;
                             lo = i == 0 ? m : std::min(lo, m);
                             hi = i == 0 ? m : std::max(hi, m);
                         }
                         const double mean = d.cells.empty() ? 0.0 : sum / static_cast<double>(d.cells.size());
                         return Json{{"dataset", to_string(d.product)}, {"mean", mean}, {"min", lo}, {"max", hi}};
                     }});
        // Agriculture
        v.push_back({Domain::agriculture, "low_ndvi_clusters", "Connected clusters of low NDVI cells",
                     {p("dataset", "handle"), p("threshold", "number"), p("min_cluster_size", "integer", false)},
                     [](const Json& a, Workspace& ws, std::vector<DataPointKey>&) {
                         const Dataset& d = need_product(ws, str_arg(a, "dataset"), Product::ndvi);
                         const double thr = num_arg(a, "threshold");
                         const int min_size = static_cast<int>(num_arg(a, "min_cluster_size", 2.0));
                         auto clusters = low_value_clusters(ws.sandbox().product(Product::ndvi), d.dates, d.cells, thr, min_size);
                         ResultSet r{"low_ndvi_clusters", Product::ndvi, clusters, {}, d.region, date_span(d.dates)};
                         Json list = Json::array();
                         for (const auto& c : clusters) {
                             r.cells.insert(r.cells.end(), c.begin(), c.end());
                             list.push_back(Json{{"size", c.size()}, {"cells", cells_json(c)}});
                         }
                         std::sort(r.cells.begin(), r.cells.end());
                         ws.put_result(std::move(r));
                         return Json{{"result", "low_ndvi_clusters"}, {"region", d.region}, {"clusters", list}};
                     }});
        v.push_back({Domain::agriculture, "reflectance_anomalies", "Cells with unusually high blue reflectance",
                     {p("dataset", "handle"), p("threshold", "number")},
                     [](const Json& a, Workspace& ws, std::vector<DataPointKey>&) {
                         return threshold_tool(a, ws, Product::ref_b2, Comparator::gt, "reflectance_anomalies");
                     }});
        // Climate
        v.push_back({Domain::climate, "heatwave_zones", "Cells whose surface temperature exceeds a threshold",
                     {p("dataset", "handle"), p("threshold", "kelvin")},
                     [](const Json& a, Workspace& ws, std::vector<DataPointKey>&) {
                         return threshold_tool(a, ws, Product::lst, Comparator::gt, "heatwave_zones");
                     }});
        v.push_back({Domain::climate, "aerosol_hotspots", "Cells whose aerosol depth exceeds a threshold",
                     {p("dataset", "handle"), p("threshold", "number")},
                     [](const Json& a, Workspace& ws, std::vector<DataPointKey>&) {
                         return threshold_tool(a, ws, Product::aod550, Comparator::gt, "aerosol_hotspots");
                     }});
        // Urban
        v.push_back({Domain::urban, "overpopulation_hotspots", "Cells whose population exceeds a threshold",
                     {p("dataset", "handle"), p("threshold", "number")},
                     [](const Json& a, Workspace& ws, std::vector<DataPointKey>&) {
                         return threshold_tool(a, ws, Product::population, Comparator::gt, "overpopulation_hotspots");
                     }});
        v.push_back({Domain::urban, "built_density_zones", "Cells whose built-up surface exceeds a threshold",
                     {p("dataset", "handle"), p("threshold", "number")},
                     [](const Json& a, Workspace& ws, std::vector<DataPointKey>&) {
                         return threshold_tool(a, ws, Product::built_s, Comparator::gt, "built_density_zones");
                     }});
        // Forestry
        v.push_back({Domain::forestry, "reforestation_candidates", "Low canopy cells, optionally with recorded loss",
                     {p("canopy", "handle"), p("loss", "handle"), p("canopy_below", "percent"),
                      p("require_loss", "boolean", false)},
                     [](const Json& a, Workspace& ws, std::vector<DataPointKey>&) {
                         const Dataset& canopy = need_product(ws, str_arg(a, "canopy"), Product::canopy);
                         const Dataset& loss = need_product(ws, str_arg(a, "loss"), Product::treeloss);
                         std::vector<Cell> both;
                         std::set_intersection(canopy.cells.begin(), canopy.cells.end(), loss.cells.begin(),
                                               loss.cells.end(), std::back_inserter(both));
                         auto cells = reforestation_cells(ws.sandbox().product(Product::canopy),
                                                          ws.sandbox().product(Product::treeloss), both,
                                                          num_arg(a, "canopy_below"), bool_arg(a, "require_loss", true));
                         ws.put_result({"reforestation_candidates", Product::canopy, {}, cells, canopy.region, date_span(canopy.dates)});
                         return Json{{"result", "reforestation_candidates"}, {"region", canopy.region},
                                     {"count", cells.size()}, {"cells", cells_json(cells)}};
                     }});
        v.push_back({Domain::forestry, "canopy_zones", "Cells whose tree canopy is below a threshold",
                     {p("dataset", "handle"), p("threshold", "percent")},
                     [](const Json& a, Workspace& ws, std::vector<DataPointKey>&) {
                         return threshold_tool(a, ws, Product::canopy, Comparator::lt, "canopy_zones");
                     }});
        // Vision
        v.push_back({Domain::vision, "detect_objects", "Detect objects of a class in a scene",
                     {p("scene_id", "scene"), p("class", "object_class")},
                     [](const Json& a, Workspace& ws, std::vector<DataPointKey>& acc) {
                         const auto id = lower(str_arg(a, "scene_id"));
                         const auto cls = lower(str_arg(a, "class"));
                         const VisionAnnotation* s = ws.sandbox().scene(id);
                         if (!s) throw GeoError("UnknownScene", "no scene '" + id + "'");
                         if (!ws.scenes_loaded(s->region)) throw GeoError("MissingProduct", "scenes not loaded");
                         auto boxes = detect(*s, cls, ws.sandbox().vision_model());
                         acc.push_back({Product::detection, s->cell, "2024"});
                         ws.put_result({"detect_objects", Product::detection, {}, {s->cell}, s->region, "2024"});
                         return Json{{"result", "detect_objects"}, {"scene_id", id}, {"class", cls}, {"boxes", boxes}};
                     }});
        v.push_back({Domain::vision, "classify_landcover", "Land-cover class of a scene",
                     {p("scene_id", "scene")},
                     [](const Json& a, Workspace& ws, std::vector<DataPointKey>& acc) {
                         const auto id = lower(str_arg(a, "scene_id"));
                         const VisionAnnotation* s = ws.sandbox().scene(id);
                         if (!s) throw GeoError("UnknownScene", "no scene '" + id + "'");
                         if (!ws.scenes_loaded(s->region)) throw GeoError("MissingProduct", "scenes not loaded");
                         acc.push_back({Product::lcc, s->cell, "2024"});
                         ws.put_result({"classify_landcover", Product::lcc, {}, {s->cell}, s->region, "2024"});
                         return Json{{"result", "classify_landcover"}, {"scene_id", id},
                                     {"label", classify(*s, ws.sandbox().vision_model())}};
                     }});
        // Map
        v.push_back({Domain::map, "map_add_layer", "Plot a dataset or analysis result on the map",
                     {p("source", "handle"), p("style", "string", false)},
                     [](const Json& a, Workspace& ws, std::vector<DataPointKey>&) {
                         const auto source = lower(str_arg(a, "source"));
                         MapLayer layer;
                         layer.source = source;
                         layer.style = a.is_object() && a.contains("style") ? lower(str_arg(a, "style")) : "default";
                         if (const ResultSet* r = ws.result(source)) {
                             layer.product = to_string(r->product);
                             layer.region = r->region;
                             layer.date = r->date;
                             layer.cells = r->cells;
                         } else if (const Dataset* d = ws.dataset(source)) {
                             layer.product = to_string(d->product);
                             layer.region = d->region;
                             layer.date = date_span(d->dates);
                             layer.cells = d->cells;
                         } else {
                             throw GeoError("MissingProduct", source + " not available");
                         }
                         ws.map().layers.push_back(layer);
                         return Json{{"layers", ws.map().layers.size()}, {"source", source}, {"cells", layer.cells.size()}};
                     }});
        v.push_back({Domain::map, "map_add_marker", "Put a marker on a region",
                     {p("region", "region")},
                     [](const Json& a, Workspace& ws, std::vector<DataPointKey>&) {
                         const auto region = lower(str_arg(a, "region"));
                         const auto& cells = ws.sandbox().region_cells(region);
                         ws.map().annotations.push_back({"marker", region, {cells[cells.size() / 2]}});
                         return Json{{"annotations", ws.map().annotations.size()}, {"region", region}};
                     }});
        v.push_back({Domain::map, "map_snapshot", "Current map layers and annotations", {},
                     [](const Json&, Workspace& ws, std::vector<DataPointKey>&) {
                         Json out{{"layers", Json::array()}, {"annotations", ws.map().annotations.size()}};
                         for (const auto& l : ws.map().layers) out["layers"].push_back(l.source);
                         return out;
                     }});
        return v;
    }();
    return defs;
}

}  // namespace

void register_domain_tools(ToolRegistry& registry, const std::vector<Domain>& domains) {
    for (const auto& def : tool_defs()) {
        if (std::find(domains.begin(), domains.end(), def.domain) == domains.end()) continue;
        registry.register_tool({def.name, agent_name(def.domain), def.description, def.params, 0}, wrap(def));
    }
}

void register_domain_tools(ToolRegistry& registry) { register_domain_tools(registry, canonical_domains()); }

std::map<Domain, int> real_tool_counts(const std::vector<Domain>& domains) {
    std::map<Domain, int> out;
    for (Domain d : domains) out[d] = 0;
    for (const auto& def : tool_defs()) {
        if (out.count(def.domain)) ++out[def.domain];
    }
    return out;
}

std::vector<std::string> real_tool_names() {
    std::vector<std::string> out;
    for (const auto& def : tool_defs()) out.push_back(def.name);
    return out;
}

std::string tool_owner(std::string_view tool) {
    for (const auto& def : tool_defs()) {
        if (tool == def.name) return agent_name(def.domain);
    }
    return {};
}

ToolRegistry build_registry(const std::vector<Domain>& domains, int total_tools, std::uint64_t filler_seed) {
    ToolRegistry registry;
    register_domain_tools(registry, domains);
    // Per-domain counts come from the full roster so a domain subset keeps
    // the same toolkit sizes.
    const auto counts = filler_counts_for_total(total_tools, real_tool_counts(canonical_domains()));
    for (Domain d : domains) register_filler_tools(registry, d, counts.at(d), filler_seed);
    return registry;
}

std::vector<Domain> canonical_domains(std::size_t n) {
    std::vector<Domain> out;
    for (Domain d : kAllDomains) {
        if (out.size() >= n) break;
        out.push_back(d);
    }
    return out;
}

}  // namespace geosquad
