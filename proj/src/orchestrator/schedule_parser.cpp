// SPDX-License-Identifier: Apache-2.0
#include "geosquad/orchestrator/schedule_parser.hpp"

#include <algorithm>
#include <cctype>

namespace geosquad {

namespace {

bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

// Parses the items between '[' at `open` and its matching ']'.
std::optional<std::vector<SubTask>> parse_list(std::string_view s, std::size_t open) {
    std::vector<SubTask> out;
    std::size_t i = open + 1;
    auto skip = [&] {
        while (i < s.size() && (std::isspace(static_cast<unsigned char>(s[i])) || s[i] == ',')) ++i;
    };
    while (true) {
        skip();
        if (i >= s.size()) return std::nullopt;
        if (s[i] == ']') return out;
        const std::size_t name_start = i;
        while (i < s.size() && ident_char(s[i])) ++i;
        if (i == name_start) return std::nullopt;
        std::string agent(s.substr(name_start, i - name_start));
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        if (i >= s.size() || s[i] != '(') return std::nullopt;
        ++i;
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        std::string prompt;
        if (i < s.size() && (s[i] == '"' || s[i] == '\'')) {
            const char q = s[i++];
            while (i < s.size() && s[i] != q) {
                if (s[i] == '\\' && i + 1 < s.size()) ++i;
                prompt += s[i++];
            }
            if (i >= s.size()) return std::nullopt;
            ++i;
            while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
            if (i >= s.size() || s[i] != ')') return std::nullopt;
            ++i;
        } else {
            int depth = 1;
            const std::size_t start = i;
            while (i < s.size()) {
                if (s[i] == '(') ++depth;
                if (s[i] == ')' && --depth == 0) break;
                ++i;
            }
            if (i >= s.size()) return std::nullopt;
            prompt = std::string(s.substr(start, i - start));
            ++i;
        }
        out.push_back({agent, trim(prompt)});
    }
}

}  // namespace

std::vector<SubTask> parse_schedule(std::string_view text, const std::vector<std::string>& roster) {
    // Prefer the list after "schedule =", else the first list that parses.
    std::vector<std::size_t> starts;
    for (std::size_t pos = text.find("schedule"); pos != std::string_view::npos; pos = text.find("schedule", pos + 1)) {
        const auto br = text.find('[', pos);
        if (br != std::string_view::npos) starts.push_back(br);
    }
    for (std::size_t pos = text.find('['); pos != std::string_view::npos; pos = text.find('[', pos + 1)) {
        starts.push_back(pos);
    }
    for (std::size_t open : starts) {
        auto items = parse_list(text, open);
        if (!items || items->empty()) continue;
        for (auto& st : *items) {
            auto d = domain_of_agent(st.agent);
            if (d) st.agent = agent_name(*d);
            if (!roster.empty() && std::find(roster.begin(), roster.end(), st.agent) == roster.end()) {
                throw UnparseableSchedule("unknown agent '" + st.agent + "'");
            }
            if (st.prompt.empty()) throw UnparseableSchedule("empty prompt for " + st.agent);
        }
        return *items;
    }
    throw UnparseableSchedule("no schedule list found");
}

std::string format_schedule(const std::vector<SubTask>& subtasks) {
    std::string out = "schedule = [";
    for (std::size_t i = 0; i < subtasks.size(); ++i) {
        if (i) out += ", ";
        out += subtasks[i].agent + "(" + subtasks[i].prompt + ")";
    }
    return out + "]";
}

}  // namespace geosquad
