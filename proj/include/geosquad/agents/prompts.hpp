// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <map>
#include <string>

namespace geosquad {

// Prompt templates with {placeholder} slots. The scripted behaviors match on
// fixed phrases of the defaults ("acting as the X agent", "Decompose user
// request", ...), so replacements should keep those phrases.
struct PromptSet {
    std::string agent_system;   // {agent}, {guidance}
    std::string single_system;  // {guidance}
    std::string planner_system; // {agents}, {guidance}
    std::string planner_reminder;
    std::string check_system;   // {request}, {results}
    std::string revise_system;  // {request}, {schedule}, {missing}
    std::string ledger_system;  // {request}, {ledger}, {remaining}

    static const PromptSet& defaults();
    // Files named <field>.txt in `dir` override the defaults; absent files
    // keep them.
    static PromptSet load(const std::filesystem::path& dir);
};

// Replaces every {key} with its value; unknown placeholders stay as they are.
std::string fill_template(const std::string& text, const std::map<std::string, std::string>& values);

}  // namespace geosquad
