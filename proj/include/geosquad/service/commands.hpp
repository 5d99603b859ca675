// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "geosquad/service/config.hpp"
#include "geosquad/taskgen/taskgen.hpp"

namespace geosquad {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitTemplateGap = 2;
inline constexpr int kExitUsage = 64;

struct CommonOptions {
    std::optional<std::filesystem::path> config;
    std::optional<std::uint64_t> seed;
    std::optional<long> budget;
    std::optional<int> workers;
};

struct GenOptions : CommonOptions {
    int per_agent = kDefaultPerAgent;
    bool full = false;
    std::optional<std::filesystem::path> templates;
};

struct BenchOptions : CommonOptions {
    std::string strategies;  // comma list, "all", entries like "hybrid+ts+wm"; empty: from config
    std::string domains;     // a count or a comma list of domain names; empty: all
    int per_agent = kDefaultPerAgent;
    bool full = false;
    bool ts = false;
    bool wm = false;
    bool allow_failures = false;
    std::optional<std::filesystem::path> out;
    std::optional<std::string> perturbation;
    bool omit_database = false;
};

struct ChatOptions : CommonOptions {
    std::string prompt;
    std::optional<std::string> strategy;  // default hybrid
    bool ts = false;
    bool wm = false;
};

struct ServeOptions : CommonOptions {
    std::string host = "127.0.0.1";
    int port = 8080;
    std::optional<std::filesystem::path> static_dir;
};

// Config file (or defaults) with command-line overrides applied.
EngineConfig resolve_config(const CommonOptions& options);

// "all", or a comma list of strategy names with optional "+ts" / "+wm".
// The --ts / --wm flags switch the memories on for every entry.
std::vector<StrategyConfig> parse_strategy_list(const std::string& text, const StrategyConfig& base);

// A count (first N of the canonical order) or a comma list of names.
std::vector<Domain> parse_domains(const std::string& text);

int cmd_gen(const GenOptions& options, std::ostream& out, std::ostream& err);
int cmd_bench(const BenchOptions& options, std::ostream& out, std::ostream& err);
int cmd_chat(const ChatOptions& options, std::ostream& out, std::ostream& err);
int cmd_serve(const ServeOptions& options, std::ostream& out, std::ostream& err);

}  // namespace geosquad
