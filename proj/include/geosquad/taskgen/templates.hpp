// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "geosquad/core/types.hpp"
#include "geosquad/sandbox/sandbox.hpp"

namespace geosquad {

class TemplateGapError : public GeoError {
public:
    explicit TemplateGapError(const std::string& m) : GeoError("TemplateGapError", m) {}
};

struct StepTemplate {
    std::string agent;
    std::string tool;
    Json args = Json::object();  // string values may hold {slot} references
};

// A seed prompt with slots. Base slots are enumerated from `slots`; the
// derived slots {Region}, {product_label} and {scene} are computed from them.
struct TaskTemplate {
    std::string id;
    Domain domain = Domain::database;
    std::string text;
    std::vector<std::pair<std::string, std::vector<std::string>>> slots;
    std::vector<StepTemplate> steps;
};

void to_json(Json& j, const TaskTemplate& t);
void from_json(const Json& j, TaskTemplate& t);

std::vector<TaskTemplate> default_templates();
std::vector<TaskTemplate> load_templates(const std::filesystem::path& json_file);

using Bindings = std::map<std::string, std::string>;

struct TemplateInstance {
    std::string template_id;
    Domain domain = Domain::database;
    Bindings bindings;
    std::string text;
    std::vector<GoldStep> steps;
};

// Human label of a product as used in prompt text ("NDVI", "land surface temperature").
std::string product_label(Product p);

// Adds the derived slots to a set of base bindings.
Bindings with_derived(Bindings b);
TemplateInstance instantiate(const TaskTemplate& t, const Bindings& base);
// Every combination of the template's slot pools, in pool order.
std::vector<TemplateInstance> enumerate(const TaskTemplate& t);

// Reads a prompt back into a template instance. Regions outside the sandbox
// are kept as written so the run fails the way a real request would.
std::optional<TemplateInstance> match_prompt(const std::string& text, const std::vector<TaskTemplate>& templates);

// The datapoints the gold steps select, computed from fixture metadata
// (region masks, product coverage, scene annotations) without running tools.
// Throws UnknownRegion / UnknownScene for names outside the fixture.
std::vector<DataPointKey> gold_datapoints(const std::vector<GoldStep>& steps, const Sandbox& sandbox);

// Subtask prompts: consecutive gold steps of one agent form one subtask.
std::vector<SubTask> gold_subtasks(const std::vector<GoldStep>& steps);
// Index of the first gold step of each subtask, plus a final entry = size.
std::vector<std::size_t> subtask_boundaries(const std::vector<GoldStep>& steps);

}  // namespace geosquad
