// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "geosquad/core/types.hpp"

namespace geosquad {

class UnparseableSchedule : public GeoError {
public:
    explicit UnparseableSchedule(const std::string& m) : GeoError("UnparseableSchedule", m) {}
};

// Reads "schedule = [Agent(prompt), Agent('prompt'), ...]" out of model text.
// Tolerates surrounding prose, code fences, quoted or bare prompts, nested
// parentheses in bare prompts and newlines between items. Agent names are
// canonicalised ("Forest" -> "Forestry"). Throws UnparseableSchedule when no
// list is found, the list is empty or an agent is not in `roster` (when
// roster is non-empty).
std::vector<SubTask> parse_schedule(std::string_view text, const std::vector<std::string>& roster = {});

// Inverse of parse_schedule for prompts without quotes or brackets.
std::string format_schedule(const std::vector<SubTask>& subtasks);

}  // namespace geosquad
