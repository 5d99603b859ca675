// SPDX-License-Identifier: Apache-2.0
#include "geosquad/taskgen/templates.hpp"

#include <algorithm>
#include <cctype>
#include <regex>

#include "geosquad/core/args.hpp"
#include "geosquad/core/json_io.hpp"
#include "geosquad/sandbox/analysis.hpp"

namespace geosquad {

namespace {

using Pool = std::vector<std::string>;

const Pool kRegions{"brisbane", "bundaberg", "gympie", "ipswich", "sydney", "melbourne", "northreach", "westvale"};
const Pool kMonthly{"ndvi", "ref_b2", "lst", "aod550"};
const Pool kYearly{"built_s", "population", "canopy", "treeloss"};
const Pool kRanges{"2024-01..2024-12", "2024-01..2024-06", "2024-07..2024-12", "2024-03..2024-05",
                   "2024-06..2024-08", "2024-09..2024-11", "2024-06"};
const Pool kQuarters{"2024-01..2024-03", "2024-04..2024-06", "2024-07..2024-09",
                     "2024-10..2024-12", "2024-01..2024-06", "2024-07..2024-12"};
const Pool kScenes{"00", "01", "02", "03", "04", "05", "06", "07"};
const Pool kPopulation{"4000", "5000", "6000", "7000", "8000", "9000", "10000", "11000"};
const Pool kBuilt{"60000", "70000", "80000", "90000", "100000", "110000", "120000", "130000"};
const Pool kCanopy{"15", "20", "25", "30", "35", "40", "45", "50"};

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::string capitalize(std::string s) {
    if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
    return s;
}

std::string substitute(const std::string& text, const Bindings& b) {
    std::string out;
    std::size_t i = 0;
    while (i < text.size()) {
        if (text[i] == '{') {
            const auto close = text.find('}', i);
            if (close == std::string::npos) throw GeoError("InvalidTemplate", "unclosed slot in '" + text + "'");
            const std::string key = text.substr(i + 1, close - i - 1);
            auto it = b.find(key);
            if (it == b.end()) throw GeoError("InvalidTemplate", "unbound slot {" + key + "} in '" + text + "'");
            out += it->second;
            i = close + 1;
        } else {
            out += text[i++];
        }
    }
    return out;
}

Json substitute_args(const Json& args, const Bindings& b) {
    Json out = Json::object();
    for (const auto& [k, v] : args.items()) out[k] = v.is_string() ? Json(substitute(v.get<std::string>(), b)) : v;
    return normalize_args(out);
}

StepTemplate step(const char* agent, const char* tool, Json args = Json::object()) { return {agent, tool, std::move(args)}; }

StepTemplate load(const char* product = "{product}", const char* range = "{date_range}") {
    return step("Database", "load_product", {{"product", product}, {"region", "{region}"}, {"date_range", range}});
}

StepTemplate plot(const char* source) { return step("Map", "map_add_layer", {{"source", source}}); }

std::string fmt_number(const Json& v) {
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    const double d = v.get<double>();
    if (d == static_cast<double>(static_cast<long long>(d))) return std::to_string(static_cast<long long>(d));
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", d);
    return buf;
}

std::string arg_text(const Json& args, const char* key) {
    if (!args.contains(key)) return {};
    const Json& v = args.at(key);
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number()) return fmt_number(v);
    return v.dump();
}

std::string label_of(const std::string& product) {
    auto p = try_product(product);
    return p ? product_label(*p) : product;
}

// Subprompt phrase for one gold step.
std::string phrase(const GoldStep& s) {
    const Json& a = s.canonical_args;
    const std::string& t = s.tool_name;
    if (t == "load_product") {
        return "Load " + label_of(arg_text(a, "product")) + " data for " + capitalize(arg_text(a, "region")) + " over " +
               arg_text(a, "date_range");
    }
    if (t == "load_scenes") return "Load the image scenes of " + capitalize(arg_text(a, "region"));
    if (t == "describe_dataset") return "Describe the " + arg_text(a, "dataset") + " dataset";
    if (t == "filter_region") return "Filter " + capitalize(arg_text(a, "region"));
    if (t == "filter_dates") return "Filter " + arg_text(a, "dataset") + " to " + arg_text(a, "date_range");
    if (t == "zonal_stats") return "Compute zonal statistics of " + arg_text(a, "dataset");
    if (t == "low_ndvi_clusters") {
        return "Recommend crop rotation areas from low-NDVI clusters below " + arg_text(a, "threshold") +
               " with at least " + arg_text(a, "min_cluster_size") + " cells";
    }
    if (t == "reflectance_anomalies") return "Find reflectance anomalies above " + arg_text(a, "threshold");
    if (t == "heatwave_zones") return "Identify heatwave zones above " + arg_text(a, "threshold") + " K";
    if (t == "aerosol_hotspots") return "Locate aerosol hotspots above " + arg_text(a, "threshold");
    if (t == "overpopulation_hotspots") return "Report overpopulation hotspots above " + arg_text(a, "threshold") + " persons";
    if (t == "built_density_zones") return "Find built-up zones above " + arg_text(a, "threshold") + " m2";
    if (t == "reforestation_candidates") {
        return "Recommend reforestation areas with canopy below " + arg_text(a, "canopy_below") + "%" +
               (arg_text(a, "require_loss") == "true" ? " and recorded tree loss" : " regardless of tree loss");
    }
    if (t == "canopy_zones") return "Find canopy zones below " + arg_text(a, "threshold") + "%";
    if (t == "detect_objects") return "Detect " + arg_text(a, "class") + " objects in scene " + arg_text(a, "scene_id");
    if (t == "classify_landcover") return "Classify the land cover of scene " + arg_text(a, "scene_id");
    if (t == "map_add_layer") return "Plot " + arg_text(a, "source") + " on the map";
    if (t == "map_add_marker") return "Mark " + capitalize(arg_text(a, "region")) + " on the map";
    if (t == "map_snapshot") return "Take a map snapshot";
    return "Run " + t;
}

std::string regex_escape(const std::string& s) {
    static const std::string special = R"(\^$.|?*+()[]{})";
    std::string out;
    for (char c : s) {
        if (special.find(c) != std::string::npos) out += '\\';
        out += c;
    }
    return out;
}

std::string normalize_text(std::string s) {
    s = lower(std::move(s));
    std::string out;
    bool space = false;
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            space = true;
            continue;
        }
        if (space && !out.empty()) out += ' ';
        space = false;
        out += c;
    }
    while (!out.empty() && (out.back() == '.' || out.back() == '!' || out.back() == '?')) out.pop_back();
    return out;
}

}  // namespace

std::string product_label(Product p) {
    switch (p) {
        case Product::ndvi: return "NDVI";
        case Product::ref_b2: return "blue-band reflectance";
        case Product::lst: return "land surface temperature";
        case Product::aod550: return "aerosol optical depth";
        case Product::built_s: return "built-up surface";
        case Product::population: return "population";
        case Product::canopy: return "tree canopy";
        case Product::treeloss: return "tree loss";
        case Product::detection: return "object detection";
        case Product::lcc: return "land cover";
    }
    return "data";
}

void to_json(Json& j, const TaskTemplate& t) {
    Json slots = Json::array();
    for (const auto& [name, pool] : t.slots) slots.push_back(Json{{"name", name}, {"values", pool}});
    Json steps = Json::array();
    for (const auto& s : t.steps) steps.push_back(Json{{"agent", s.agent}, {"tool", s.tool}, {"args", s.args}});
    j = Json{{"id", t.id}, {"domain", to_string(t.domain)}, {"text", t.text}, {"slots", slots}, {"steps", steps}};
}

void from_json(const Json& j, TaskTemplate& t) {
    t.id = j.at("id").get<std::string>();
    t.domain = domain_from_string(j.at("domain").get<std::string>());
    t.text = j.at("text").get<std::string>();
    t.slots.clear();
    for (const auto& s : j.at("slots")) t.slots.emplace_back(s.at("name").get<std::string>(), s.at("values").get<Pool>());
    t.steps.clear();
    for (const auto& s : j.at("steps")) {
        t.steps.push_back({s.at("agent").get<std::string>(), s.at("tool").get<std::string>(), s.value("args", Json::object())});
    }
}

std::vector<TaskTemplate> load_templates(const std::filesystem::path& json_file) {
    return Json::parse(read_text_file(json_file)).get<std::vector<TaskTemplate>>();
}

std::vector<TaskTemplate> default_templates() {
    std::vector<TaskTemplate> v;
    const auto D = [&](const char* id, Domain d, const char* text, std::vector<std::pair<std::string, Pool>> slots,
                       std::vector<StepTemplate> steps) { v.push_back({id, d, text, std::move(slots), std::move(steps)}); };

    D("db-describe", Domain::database, "Load {product_label} data for {Region} over {date_range} and describe the dataset.",
      {{"product", kMonthly}, {"region", kRegions}, {"date_range", kRanges}},
      {load(), step("Database", "describe_dataset", {{"dataset", "{product}"}})});
    D("db-describe-2020", Domain::database, "Load {product_label} data for {Region} for 2020 and describe the dataset.",
      {{"product", kYearly}, {"region", kRegions}},
      {load("{product}", "2020"), step("Database", "describe_dataset", {{"dataset", "{product}"}})});
    D("db-plot", Domain::database, "Load {product_label} data for {Region} over {date_range} and show it.",
      {{"product", kMonthly}, {"region", kRegions}, {"date_range", kRanges}}, {load(), plot("{product}")});
    D("db-scenes", Domain::database, "List the satellite image scenes available for {Region}.", {{"region", kRegions}},
      {step("Database", "load_scenes", {{"region", "{region}"}})});

    D("ops-zonal", Domain::dataops, "Compute zonal statistics of {product_label} over {Region} for {date_range}.",
      {{"product", kMonthly}, {"region", kRegions}, {"date_range", kRanges}},
      {load(), step("DataOps", "filter_region", {{"dataset", "{product}"}, {"region", "{region}"}}),
       step("DataOps", "zonal_stats", {{"dataset", "{product}"}})});
    D("ops-quarter", Domain::dataops,
      "Take the 2024 {product_label} record of {Region}, keep only {date_range} and compute zonal statistics.",
      {{"product", kMonthly}, {"region", kRegions}, {"date_range", kQuarters}},
      {load("{product}", "2024-01..2024-12"),
       step("DataOps", "filter_dates", {{"dataset", "{product}"}, {"date_range", "{date_range}"}}),
       step("DataOps", "zonal_stats", {{"dataset", "{product}"}})});
    D("ops-zonal-2020", Domain::dataops, "Compute zonal statistics of {product_label} over {Region} for 2020.",
      {{"product", kYearly}, {"region", kRegions}},
      {load("{product}", "2020"), step("DataOps", "filter_region", {{"dataset", "{product}"}, {"region", "{region}"}}),
       step("DataOps", "zonal_stats", {{"dataset", "{product}"}})});

    D("map-marker", Domain::map, "Plot {product_label} for {Region} over {date_range} and put a marker on {Region}.",
      {{"product", kMonthly}, {"region", kRegions}, {"date_range", kRanges}},
      {load(), plot("{product}"), step("Map", "map_add_marker", {{"region", "{region}"}})});
    D("map-snapshot", Domain::map, "Plot {product_label} for {Region} over {date_range} and take a map snapshot.",
      {{"product", kMonthly}, {"region", kRegions}, {"date_range", kRanges}},
      {load(), plot("{product}"), step("Map", "map_snapshot")});
    D("map-marker-2020", Domain::map, "Plot {product_label} for {Region} for 2020 and put a marker on {Region}.",
      {{"product", kYearly}, {"region", kRegions}},
      {load("{product}", "2020"), plot("{product}"), step("Map", "map_add_marker", {{"region", "{region}"}})});

    D("agri-rotation", Domain::agriculture,
      "From NDVI, recommend crop rotation areas in {Region} over {date_range} using clusters below {threshold} with at "
      "least {min_size} cells, and plot them.",
      {{"region", kRegions}, {"date_range", kRanges}, {"threshold", {"0.2", "0.25", "0.3", "0.35"}}, {"min_size", {"2", "3"}}},
      {load("ndvi"), step("DataOps", "filter_region", {{"dataset", "ndvi"}, {"region", "{region}"}}),
       step("Agriculture", "low_ndvi_clusters",
            {{"dataset", "ndvi"}, {"threshold", "{threshold}"}, {"min_cluster_size", "{min_size}"}}),
       plot("low_ndvi_clusters")});
    D("agri-reflectance", Domain::agriculture,
      "Find blue-band reflectance anomalies above {threshold} in {Region} over {date_range}.",
      {{"region", kRegions}, {"date_range", kRanges}, {"threshold", {"0.3", "0.35", "0.4"}}},
      {load("ref_b2"), step("Agriculture", "reflectance_anomalies", {{"dataset", "ref_b2"}, {"threshold", "{threshold}"}})});

    D("climate-heatwave", Domain::climate,
      "Identify dangerous heatwave regions in {Region} over {date_range} where land surface temperature exceeds "
      "{threshold} K, and plot them.",
      {{"region", kRegions}, {"date_range", kRanges}, {"threshold", {"303", "305", "308", "310"}}},
      {load("lst"), step("Climate", "heatwave_zones", {{"dataset", "lst"}, {"threshold", "{threshold}"}}),
       plot("heatwave_zones")});
    D("climate-aerosol", Domain::climate, "Locate aerosol hotspots with AOD above {threshold} in {Region} over {date_range}.",
      {{"region", kRegions}, {"date_range", kRanges}, {"threshold", {"0.4", "0.5", "0.6"}}},
      {load("aod550"), step("DataOps", "filter_region", {{"dataset", "aod550"}, {"region", "{region}"}}),
       step("Climate", "aerosol_hotspots", {{"dataset", "aod550"}, {"threshold", "{threshold}"}})});

    D("urban-pop-plot", Domain::urban,
      "Report overpopulation hotspots in {Region} with more than {threshold} persons per cell in 2020, and plot them.",
      {{"region", kRegions}, {"threshold", kPopulation}},
      {load("population", "2020"),
       step("Urban", "overpopulation_hotspots", {{"dataset", "population"}, {"threshold", "{threshold}"}}),
       plot("overpopulation_hotspots")});
    D("urban-pop", Domain::urban, "Report overpopulation hotspots in {Region} with more than {threshold} persons per cell in 2020.",
      {{"region", kRegions}, {"threshold", kPopulation}},
      {load("population", "2020"),
       step("Urban", "overpopulation_hotspots", {{"dataset", "population"}, {"threshold", "{threshold}"}})});
    D("urban-pop-marker", Domain::urban,
      "Report overpopulation hotspots above {threshold} persons per cell in {Region} for 2020 and mark {Region} on the map.",
      {{"region", kRegions}, {"threshold", kPopulation}},
      {load("population", "2020"),
       step("Urban", "overpopulation_hotspots", {{"dataset", "population"}, {"threshold", "{threshold}"}}),
       step("Map", "map_add_marker", {{"region", "{region}"}})});
    D("urban-built-plot", Domain::urban,
      "Find dense built-up zones in {Region} above {threshold} m2 per cell in 2020, and plot them.",
      {{"region", kRegions}, {"threshold", kBuilt}},
      {load("built_s", "2020"), step("Urban", "built_density_zones", {{"dataset", "built_s"}, {"threshold", "{threshold}"}}),
       plot("built_density_zones")});
    D("urban-built", Domain::urban, "Find dense built-up zones in {Region} above {threshold} m2 per cell in 2020.",
      {{"region", kRegions}, {"threshold", kBuilt}},
      {load("built_s", "2020"), step("Urban", "built_density_zones", {{"dataset", "built_s"}, {"threshold", "{threshold}"}})});

    const auto refo = [&](const char* id, const char* text, const char* require, bool plotted) {
        std::vector<StepTemplate> steps{load("canopy", "2020"), load("treeloss", "2020"),
                                        step("Forestry", "reforestation_candidates",
                                             {{"canopy", "canopy"}, {"loss", "treeloss"},
                                              {"canopy_below", "{canopy_below}"}, {"require_loss", require}})};
        if (plotted) steps.push_back(plot("reforestation_candidates"));
        D(id, Domain::forestry, text, {{"region", kRegions}, {"canopy_below", kCanopy}}, steps);
    };
    refo("forest-refo-loss",
         "Recommend reforestation areas in {Region} where canopy is below {canopy_below}% and tree loss was recorded, "
         "and plot them.",
         "true", true);
    refo("forest-refo-any",
         "Recommend reforestation areas in {Region} where canopy is below {canopy_below}% regardless of tree loss, and "
         "plot them.",
         "false", true);
    refo("forest-refo-list",
         "List reforestation candidates in {Region} with canopy below {canopy_below}% and recorded tree loss.", "true",
         false);
    D("forest-canopy-plot", Domain::forestry, "Plot canopy zones below {canopy_below}% tree cover for {Region}.",
      {{"region", kRegions}, {"canopy_below", kCanopy}},
      {load("canopy", "2020"), step("Forestry", "canopy_zones", {{"dataset", "canopy"}, {"threshold", "{canopy_below}"}}),
       plot("canopy_zones")});
    D("forest-canopy", Domain::forestry, "Find canopy zones below {canopy_below}% tree cover in {Region}.",
      {{"region", kRegions}, {"canopy_below", kCanopy}},
      {load("canopy", "2020"), step("Forestry", "canopy_zones", {{"dataset", "canopy"}, {"threshold", "{canopy_below}"}})});

    const Pool classes = object_classes();
    D("vision-detect-plot", Domain::vision, "Detect {class}s in scene {scene} of {Region} and plot them.",
      {{"region", kRegions}, {"scene_no", kScenes}, {"class", classes}},
      {step("Database", "load_scenes", {{"region", "{region}"}}),
       step("Vision", "detect_objects", {{"scene_id", "{scene}"}, {"class", "{class}"}}), plot("detect_objects")});
    D("vision-detect", Domain::vision, "Count the {class}s visible in scene {scene} of {Region}.",
      {{"region", kRegions}, {"scene_no", kScenes}, {"class", classes}},
      {step("Database", "load_scenes", {{"region", "{region}"}}),
       step("Vision", "detect_objects", {{"scene_id", "{scene}"}, {"class", "{class}"}})});
    D("vision-lcc", Domain::vision, "Classify the land cover of scene {scene} in {Region}.",
      {{"region", kRegions}, {"scene_no", kScenes}},
      {step("Database", "load_scenes", {{"region", "{region}"}}),
       step("Vision", "classify_landcover", {{"scene_id", "{scene}"}})});
    return v;
}

Bindings with_derived(Bindings b) {
    if (b.count("region")) {
        b["region"] = lower(b["region"]);
        b["Region"] = capitalize(b["region"]);
    }
    if (b.count("product")) b["product_label"] = label_of(b["product"]);
    if (b.count("scene_no") && b.count("region")) b["scene"] = b["region"] + "-" + b["scene_no"];
    return b;
}

TemplateInstance instantiate(const TaskTemplate& t, const Bindings& base) {
    TemplateInstance inst;
    inst.template_id = t.id;
    inst.domain = t.domain;
    inst.bindings = with_derived(base);
    inst.text = substitute(t.text, inst.bindings);
    for (const auto& s : t.steps) inst.steps.push_back({s.agent, s.tool, substitute_args(s.args, inst.bindings)});
    return inst;
}

std::vector<TemplateInstance> enumerate(const TaskTemplate& t) {
    std::vector<TemplateInstance> out;
    std::vector<std::size_t> idx(t.slots.size(), 0);
    for (const auto& [name, pool] : t.slots) {
        if (pool.empty()) return out;
    }
    while (true) {
        Bindings b;
        for (std::size_t i = 0; i < t.slots.size(); ++i) b[t.slots[i].first] = t.slots[i].second[idx[i]];
        out.push_back(instantiate(t, b));
        std::size_t k = t.slots.size();
        while (k > 0) {
            --k;
            if (++idx[k] < t.slots[k].second.size()) break;
            idx[k] = 0;
            if (k == 0) return out;
        }
        if (t.slots.empty()) return out;
    }
}

std::optional<TemplateInstance> match_prompt(const std::string& text, const std::vector<TaskTemplate>& templates) {
    const std::string target = normalize_text(text);
    for (const auto& t : templates) {
        // Template text to a regex with one capture per slot occurrence.
        std::string pattern;
        std::vector<std::string> names;
        const std::string tt = normalize_text(t.text);
        std::size_t i = 0;
        while (i < tt.size()) {
            if (tt[i] == '{') {
                const auto close = tt.find('}', i);
                names.push_back(tt.substr(i + 1, close - i - 1));
                pattern += "(.+?)";
                i = close + 1;
            } else {
                const auto next = tt.find('{', i);
                const auto lit = tt.substr(i, next == std::string::npos ? std::string::npos : next - i);
                pattern += regex_escape(lit);
                i = next == std::string::npos ? tt.size() : next;
            }
        }
        std::smatch m;
        if (!std::regex_match(target, m, std::regex(pattern))) continue;

        // Slot names were lowercased with the text; map back to base slots.
        Bindings base;
        bool consistent = true;
        for (std::size_t k = 0; k < names.size() && consistent; ++k) {
            const std::string value = m[k + 1].str();
            const std::string& name = names[k];
            std::string key;
            std::string v = value;
            if (name == "region") {
                key = "region";
            } else if (name == "product_label") {
                key = "product";
                v.clear();
                for (Product p : kRasterProducts) {
                    if (lower(product_label(p)) == value) v = to_string(p);
                }
                if (v.empty()) consistent = false;
            } else if (name == "scene") {
                const auto dash = value.rfind('-');
                if (dash == std::string::npos) {
                    consistent = false;
                    continue;
                }
                key = "scene_no";
                v = value.substr(dash + 1);
                if (base.count("region") && base["region"] != value.substr(0, dash)) consistent = false;
                base["region"] = value.substr(0, dash);
            } else {
                key = name;
            }
            if (key.empty()) continue;
            if (base.count(key) && base[key] != v) consistent = false;
            base[key] = v;
        }
        if (!consistent) continue;
        bool complete = true;
        for (const auto& [name, pool] : t.slots) complete = complete && base.count(name);
        if (!complete) continue;
        TemplateInstance inst = instantiate(t, base);
        if (normalize_text(inst.text) != target) continue;
        return inst;
    }
    return std::nullopt;
}

std::vector<DataPointKey> gold_datapoints(const std::vector<GoldStep>& steps, const Sandbox& sandbox) {
    std::vector<DataPointKey> out;
    for (const auto& s : steps) {
        const Json& a = s.canonical_args;
        if (s.tool_name == "load_product") {
            const Product p = product_from_string(arg_text(a, "product"));
            const auto range = parse_date_range(arg_text(a, "date_range"));
            if (!range) throw GeoError("DateOutOfRange", "unreadable date range in gold");
            const auto dates = dates_in_range(product_dates(p), *range);
            for (const auto& c : sandbox.region_cells(arg_text(a, "region"))) {
                for (const auto& d : dates) out.push_back({p, c, d});
            }
        } else if (s.tool_name == "detect_objects" || s.tool_name == "classify_landcover") {
            const auto* scene = sandbox.scene(arg_text(a, "scene_id"));
            if (!scene) throw GeoError("UnknownScene", "no scene '" + arg_text(a, "scene_id") + "'");
            const Product p = s.tool_name == "detect_objects" ? Product::detection : Product::lcc;
            out.push_back({p, scene->cell, product_dates(p).front()});
        }
    }
    normalize_keys(out);
    return out;
}

std::vector<std::size_t> subtask_boundaries(const std::vector<GoldStep>& steps) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < steps.size(); ++i) {
        if (i == 0 || steps[i].agent_name != steps[i - 1].agent_name) out.push_back(i);
    }
    out.push_back(steps.size());
    return out;
}

std::vector<SubTask> gold_subtasks(const std::vector<GoldStep>& steps) {
    std::vector<SubTask> out;
    const auto bounds = subtask_boundaries(steps);
    for (std::size_t b = 0; b + 1 < bounds.size(); ++b) {
        std::string prompt;
        for (std::size_t i = bounds[b]; i < bounds[b + 1]; ++i) {
            std::string p = phrase(steps[i]);
            if (!prompt.empty()) {
                p[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(p[0])));
                prompt += ", then ";
            }
            prompt += p;
        }
        out.push_back({steps[bounds[b]].agent_name, prompt});
    }
    return out;
}

}  // namespace geosquad
