// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "geosquad/core/types.hpp"
#include "geosquad/registry/tool_registry.hpp"

namespace geosquad {

// The sandbox-backed tools, grouped by owning agent.
void register_domain_tools(ToolRegistry& registry, const std::vector<Domain>& domains);
void register_domain_tools(ToolRegistry& registry);

std::map<Domain, int> real_tool_counts(const std::vector<Domain>& domains);

// Names of the real tools in registration order.
std::vector<std::string> real_tool_names();

// Agent that owns a real tool, "" when the name is not one.
std::string tool_owner(std::string_view tool);

// Real tools plus fillers. `total_tools` is the size of the full eight-agent
// registry; a subset of domains gets the same per-domain toolkits.
ToolRegistry build_registry(const std::vector<Domain>& domains, int total_tools, std::uint64_t filler_seed = 0x5EED);

// kAllDomains as a vector, or its first n entries.
std::vector<Domain> canonical_domains(std::size_t n = 8);

}  // namespace geosquad
