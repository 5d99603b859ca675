// SPDX-License-Identifier: Apache-2.0
#include "geosquad/service/config.hpp"

#include <charconv>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "geosquad/backend/scripted_backend.hpp"
#include "geosquad/core/json_io.hpp"

namespace geosquad {

namespace {

[[noreturn]] void bad(const std::string& msg) { throw GeoError("InvalidConfig", msg); }

// Drops a trailing comment and surrounding quotes.
std::string clean(std::string v) {
    bool quoted = false;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] == '"') quoted = !quoted;
        if (v[i] == '#' && !quoted) {
            v.erase(i);
            break;
        }
    }
    while (!v.empty() && std::isspace(static_cast<unsigned char>(v.back()))) v.pop_back();
    if (v.size() >= 2 && v.front() == '"' && v.back() == '"') v = v.substr(1, v.size() - 2);
    return v;
}

template <typename T>
T number(const std::string& key, const std::string& v) {
    T out{};
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) bad(key + ": expected a number, got '" + v + "'");
    return out;
}

bool boolean(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    bad(key + ": expected true or false, got '" + v + "'");
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& v) {
    std::filesystem::path p(v);
    if (p.is_relative() && !base.empty()) p = base / p;
    return p;
}

}  // namespace

void EngineConfig::validate() const {
    backend.validate();
    strategy.validate();
    if (workers < 1) bad("workers must be at least 1");
    if (total_tools < 19) bad("total_tools must cover the real tools");
    if (!prompts_dir.empty() && !std::filesystem::is_directory(prompts_dir)) {
        bad("prompts_dir " + prompts_dir.string() + " does not exist");
    }
    if (!templates_file.empty() && !std::filesystem::is_regular_file(templates_file)) {
        bad("templates_file " + templates_file.string() + " does not exist");
    }
    try {
        parse_perturbation(perturbation);
    } catch (const GeoError& e) {
        bad(e.what());
    }
}

EngineConfig parse_config(const std::string& text, const std::filesystem::path& base) {
    boost::property_tree::ptree tree;
    std::istringstream in(text);
    try {
        boost::property_tree::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        bad(e.what());
    }
    EngineConfig c;
    for (const auto& [section, body] : tree) {
        if (body.empty() && !body.data().empty()) bad("key '" + section + "' outside a section");
        for (const auto& [key, node] : body) {
            const std::string v = clean(node.data());
            const std::string name = section + "." + key;
            if (section == "backend") {
                if (key == "kind") {
                    if (v == "scripted") c.backend.kind = BackendKind::scripted;
                    else if (v == "http") c.backend.kind = BackendKind::http;
                    else bad(name + ": expected scripted or http");
                } else if (key == "endpoint") {
                    c.backend.endpoint = v;
                } else if (key == "model") {
                    c.backend.model_name = v;
                } else if (key == "context_budget") {
                    c.backend.context_budget = number<long>(name, v);
                } else if (key == "max_completion_tokens") {
                    c.backend.max_completion_tokens = number<long>(name, v);
                } else if (key == "temperature") {
                    c.backend.temperature = number<double>(name, v);
                } else if (key == "max_in_flight") {
                    c.backend.max_in_flight = number<int>(name, v);
                } else if (key == "max_attempts") {
                    c.backend.max_attempts = number<int>(name, v);
                } else if (key == "backoff_ms") {
                    c.backend.backoff_ms = number<int>(name, v);
                } else {
                    bad("unknown key " + name);
                }
            } else if (section == "strategy") {
                if (key == "name") {
                    try {
                        c.strategy.strategy = strategy_from_string(v);
                    } catch (const GeoError&) {
                        bad(name + ": unknown strategy '" + v + "'");
                    }
                } else if (key == "max_revisions") {
                    c.strategy.max_revisions = number<int>(name, v);
                } else if (key == "max_ledger_rounds") {
                    c.strategy.max_ledger_rounds = number<int>(name, v);
                } else if (key == "max_tool_rounds") {
                    c.strategy.max_tool_rounds = number<int>(name, v);
                } else if (key == "ts") {
                    c.strategy.ts_enabled = boolean(name, v);
                } else if (key == "wm") {
                    c.strategy.wm_enabled = boolean(name, v);
                } else {
                    bad("unknown key " + name);
                }
            } else if (section == "engine") {
                if (key == "dataset_dir") c.dataset_dir = resolve(base, v);
                else if (key == "out_dir") c.out_dir = resolve(base, v);
                else if (key == "prompts_dir") c.prompts_dir = v.empty() ? std::filesystem::path{} : resolve(base, v);
                else if (key == "templates_file") c.templates_file = v.empty() ? std::filesystem::path{} : resolve(base, v);
                else if (key == "seed") c.seed = number<std::uint64_t>(name, v);
                else if (key == "sandbox_seed") c.sandbox_seed = number<std::uint64_t>(name, v);
                else if (key == "total_tools") c.total_tools = number<int>(name, v);
                else if (key == "workers") c.workers = number<int>(name, v);
                else bad("unknown key " + name);
            } else if (section == "bench") {
                if (key == "perturbation") c.perturbation = v;
                else if (key == "omit_database") c.omit_database = boolean(name, v);
                else if (key == "penalize_extras") c.penalize_extras = boolean(name, v);
                else bad("unknown key " + name);
            } else {
                bad("unknown section [" + section + "]");
            }
        }
    }
    c.validate();
    return c;
}

EngineConfig load_config(const std::filesystem::path& file) {
    return parse_config(read_text_file(file), file.parent_path());
}

}  // namespace geosquad
