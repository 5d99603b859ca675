// SPDX-License-Identifier: Apache-2.0
#include "geosquad/agents/prompts.hpp"

#include "geosquad/core/json_io.hpp"

namespace geosquad {

namespace {

std::string strip_final_newline(std::string s) {
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
    return s;
}

}  // namespace

const PromptSet& PromptSet::defaults() {
    static const PromptSet set = load(GEOSQUAD_ASSET_DIR "/prompts");
    return set;
}

PromptSet PromptSet::load(const std::filesystem::path& dir) {
    PromptSet s;
    const std::pair<const char*, std::string PromptSet::*> fields[] = {
        {"agent_system", &PromptSet::agent_system},       {"single_system", &PromptSet::single_system},
        {"planner_system", &PromptSet::planner_system},   {"planner_reminder", &PromptSet::planner_reminder},
        {"check_system", &PromptSet::check_system},       {"revise_system", &PromptSet::revise_system},
        {"ledger_system", &PromptSet::ledger_system},
    };
    const PromptSet* base = nullptr;
    const std::filesystem::path asset_dir = GEOSQUAD_ASSET_DIR "/prompts";
    if (dir != asset_dir) base = &defaults();
    for (const auto& [name, member] : fields) {
        const auto path = dir / (std::string(name) + ".txt");
        if (std::filesystem::exists(path)) {
            s.*member = strip_final_newline(read_text_file(path));
        } else if (base) {
            s.*member = base->*member;
        } else {
            throw GeoError("IoError", "missing prompt asset " + path.string());
        }
    }
    return s;
}

std::string fill_template(const std::string& text, const std::map<std::string, std::string>& values) {
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        if (text[i] == '{') {
            const auto close = text.find('}', i + 1);
            if (close != std::string::npos) {
                auto it = values.find(text.substr(i + 1, close - i - 1));
                if (it != values.end()) {
                    out += it->second;
                    i = close + 1;
                    continue;
                }
            }
        }
        out += text[i++];
    }
    return out;
}

}  // namespace geosquad
