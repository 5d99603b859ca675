// SPDX-License-Identifier: Apache-2.0
#include "geosquad/core/types.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace geosquad {

namespace {

template <typename E, std::size_t N>
E lookup(const std::array<std::pair<std::string_view, E>, N>& table, std::string_view s,
         const char* what) {
    for (const auto& [name, value] : table) {
        if (name == s) return value;
    }
    throw GeoError("InvalidValue", std::string("unknown ") + what + " '" + std::string(s) + "'");
}

template <typename E, std::size_t N>
std::string name_of(const std::array<std::pair<std::string_view, E>, N>& table, E e) {
    for (const auto& [name, value] : table) {
        if (value == e) return std::string(name);
    }
    return "?";
}

constexpr std::array<std::pair<std::string_view, Domain>, 8> kDomainNames{{
    {"agriculture", Domain::agriculture},
    {"climate", Domain::climate},
    {"urban", Domain::urban},
    {"forestry", Domain::forestry},
    {"vision", Domain::vision},
    {"database", Domain::database},
    {"dataops", Domain::dataops},
    {"map", Domain::map},
}};

constexpr std::array<std::pair<std::string_view, Domain>, 8> kAgentNames{{
    {"Agriculture", Domain::agriculture},
    {"Climate", Domain::climate},
    {"Urban", Domain::urban},
    {"Forestry", Domain::forestry},
    {"Vision", Domain::vision},
    {"Database", Domain::database},
    {"DataOps", Domain::dataops},
    {"Map", Domain::map},
}};

constexpr std::array<std::pair<std::string_view, Product>, 10> kProductNames{{
    {"ndvi", Product::ndvi},
    {"ref_b2", Product::ref_b2},
    {"lst", Product::lst},
    {"aod550", Product::aod550},
    {"built_s", Product::built_s},
    {"population", Product::population},
    {"canopy", Product::canopy},
    {"treeloss", Product::treeloss},
    {"detection", Product::detection},
    {"lcc", Product::lcc},
}};

constexpr std::array<std::pair<std::string_view, Strategy>, 4> kStrategyNames{{
    {"single_agent", Strategy::single_agent},
    {"composition_only", Strategy::composition_only},
    {"ledger_loop", Strategy::ledger_loop},
    {"hybrid", Strategy::hybrid},
}};

constexpr std::array<std::pair<std::string_view, Terminal>, 4> kTerminalNames{{
    {"completed", Terminal::completed},
    {"budget_exhausted", Terminal::budget_exhausted},
    {"max_revisions", Terminal::max_revisions},
    {"context_overflow", Terminal::context_overflow},
}};

constexpr std::array<std::pair<std::string_view, AgentStatus>, 3> kAgentStatusNames{{
    {"done", AgentStatus::done},
    {"failed", AgentStatus::failed},
    {"needs_dependency", AgentStatus::needs_dependency},
}};

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

}  // namespace

std::string to_string(Domain d) { return name_of(kDomainNames, d); }
Domain domain_from_string(std::string_view s) { return lookup(kDomainNames, s, "domain"); }
std::string agent_name(Domain d) { return name_of(kAgentNames, d); }

std::optional<Domain> domain_of_agent(std::string_view agent) {
    const std::string key = lower(agent);
    for (const auto& [name, value] : kAgentNames) {
        if (lower(name) == key) return value;
    }
    if (key == "forest") return Domain::forestry;
    return std::nullopt;
}

std::string to_string(Product p) { return name_of(kProductNames, p); }
Product product_from_string(std::string_view s) { return lookup(kProductNames, s, "product"); }

std::optional<Product> try_product(std::string_view s) {
    const std::string key = lower(s);
    for (const auto& [name, value] : kProductNames) {
        if (name == key) return value;
    }
    return std::nullopt;
}

bool is_raster(Product p) { return p != Product::detection && p != Product::lcc; }

std::string to_string(Strategy s) { return name_of(kStrategyNames, s); }
Strategy strategy_from_string(std::string_view s) { return lookup(kStrategyNames, s, "strategy"); }
std::string to_string(Terminal t) { return name_of(kTerminalNames, t); }
Terminal terminal_from_string(std::string_view s) { return lookup(kTerminalNames, s, "terminal"); }
std::string to_string(AgentStatus s) { return name_of(kAgentStatusNames, s); }
AgentStatus agent_status_from_string(std::string_view s) {
    return lookup(kAgentStatusNames, s, "agent status");
}

void TokenUsage::add(const CallUsage& c) {
    calls.push_back(c);
    prompt_tokens += c.prompt_tokens;
    completion_tokens += c.completion_tokens;
    total_tokens += c.total_tokens;
}

void TokenUsage::merge(const TokenUsage& other) {
    for (const auto& c : other.calls) add(c);
}

void normalize_keys(std::vector<DataPointKey>& keys) {
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
}

}  // namespace geosquad
