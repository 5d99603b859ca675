// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "geosquad/core/types.hpp"
#include "geosquad/registry/tool_registry.hpp"

namespace geosquad {

// Deterministic stand-in tools that occupy realistic schema space in an
// agent's toolkit. Their vocabulary stays clear of the benchmark tasks.
std::vector<ToolSpec> generate_filler_tools(Domain domain, int count, std::uint64_t seed);

// Registers generated fillers; their handlers return {"status":"ok"} and touch no data.
void register_filler_tools(ToolRegistry& registry, Domain domain, int count, std::uint64_t seed);

// Filler count per domain so that real + filler tools across `domains`
// reach `total`. The remainder goes to the earliest domains.
std::map<Domain, int> filler_counts_for_total(int total, const std::map<Domain, int>& real_counts);

}  // namespace geosquad
