// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "geosquad/core/types.hpp"

namespace geosquad {

// What validation needs to know about the sandbox: grid extent and the
// dates each product covers.
struct GridBounds {
    int rows = 0;
    int cols = 0;
    std::map<Product, std::vector<std::string>> coverage;

    bool contains(const DataPointKey& key) const;
};

// Answers whether (agent, tool) resolves in a registry.
using ToolResolver = std::function<bool(const std::string& agent, const std::string& tool)>;

struct ValidationError {
    std::string task_id;
    std::string message;
};

// Empty result iff every task has exactly one gold, every gold step resolves
// and every gold datapoint lies within bounds.
std::vector<ValidationError> validate_dataset(const std::vector<TaskPrompt>& tasks,
                                              const std::vector<GoldSolution>& golds,
                                              const ToolResolver& resolves, const GridBounds& bounds);

}  // namespace geosquad
