// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "geosquad/core/types.hpp"

namespace geosquad {

class DuplicateTool : public GeoError {
public:
    DuplicateTool(const std::string& agent, const std::string& name)
        : GeoError("DuplicateTool", agent + "." + name + " is already registered") {}
};

// Single-line canonical rendering of one tool:
//   Agent.name(param: type, optional?: type) - description
std::string render_tool_schema(const ToolSpec& tool);

// count_tokens(render_tool_schema(tool)).
int schema_token_cost(const ToolSpec& tool);

// Newline-joined renderings sorted by (agent, name). Throws DuplicateTool.
std::string render_tool_schemas(const std::vector<ToolSpec>& tools);

}  // namespace geosquad
