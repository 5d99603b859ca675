// SPDX-License-Identifier: Apache-2.0
#include "geosquad/backend/schema_render.hpp"

#include <algorithm>

#include "geosquad/backend/tokenizer.hpp"

namespace geosquad {

std::string render_tool_schema(const ToolSpec& tool) {
    std::string out = tool.agent + "." + tool.name + "(";
    for (std::size_t i = 0; i < tool.params.size(); ++i) {
        const auto& p = tool.params[i];
        if (i > 0) out += ", ";
        out += p.name;
        out += p.required ? ": " : "?: ";
        out += p.type;
    }
    out += ") - ";
    out += tool.description;
    return out;
}

int schema_token_cost(const ToolSpec& tool) { return static_cast<int>(count_tokens(render_tool_schema(tool))); }

std::string render_tool_schemas(const std::vector<ToolSpec>& tools) {
    std::vector<const ToolSpec*> sorted;
    sorted.reserve(tools.size());
    for (const auto& t : tools) sorted.push_back(&t);
    std::sort(sorted.begin(), sorted.end(), [](const ToolSpec* a, const ToolSpec* b) {
        return std::tie(a->agent, a->name) < std::tie(b->agent, b->name);
    });
    std::string out;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (i > 0) {
            if (sorted[i - 1]->agent == sorted[i]->agent && sorted[i - 1]->name == sorted[i]->name) {
                throw DuplicateTool(sorted[i]->agent, sorted[i]->name);
            }
            out += '\n';
        }
        out += render_tool_schema(*sorted[i]);
    }
    return out;
}

}  // namespace geosquad
