// SPDX-License-Identifier: Apache-2.0
#include "geosquad/core/validate.hpp"

#include <algorithm>
#include <set>

namespace geosquad {

bool GridBounds::contains(const DataPointKey& key) const {
    if (key.cell.row < 0 || key.cell.row >= rows || key.cell.col < 0 || key.cell.col >= cols) return false;
    auto it = coverage.find(key.product);
    if (it == coverage.end()) return false;
    return std::find(it->second.begin(), it->second.end(), key.date) != it->second.end();
}

std::vector<ValidationError> validate_dataset(const std::vector<TaskPrompt>& tasks,
                                              const std::vector<GoldSolution>& golds,
                                              const ToolResolver& resolves, const GridBounds& bounds) {
    std::vector<ValidationError> errors;
    std::map<std::string, int> gold_count;
    for (const auto& g : golds) ++gold_count[g.task_id];

    std::set<std::string> seen;
    for (const auto& t : tasks) {
        if (t.id.empty()) errors.push_back({t.id, "empty task id"});
        if (!seen.insert(t.id).second) errors.push_back({t.id, "duplicate task id"});
        if (t.text.empty()) errors.push_back({t.id, "empty task text"});
        const int n = gold_count.count(t.id) ? gold_count[t.id] : 0;
        if (n != 1) errors.push_back({t.id, "expected exactly one gold solution, found " + std::to_string(n)});
    }
    for (const auto& g : golds) {
        if (!seen.count(g.task_id)) errors.push_back({g.task_id, "gold solution without a task"});
        if (g.steps.empty()) errors.push_back({g.task_id, "gold solution has no steps"});
        for (const auto& s : g.steps) {
            if (!resolves(s.agent_name, s.tool_name)) {
                errors.push_back({g.task_id, "unknown tool '" + s.tool_name + "' for agent '" + s.agent_name + "'"});
            }
        }
        for (const auto& k : g.gold_datapoints) {
            if (!bounds.contains(k)) {
                errors.push_back({g.task_id, "datapoint out of bounds: " + to_string(k.product) + " (" +
                                                 std::to_string(k.cell.row) + "," + std::to_string(k.cell.col) +
                                                 ") " + k.date});
            }
        }
    }
    return errors;
}

}  // namespace geosquad
