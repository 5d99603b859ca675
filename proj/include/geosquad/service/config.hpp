// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "geosquad/backend/chat.hpp"
#include "geosquad/orchestrator/orchestrator.hpp"

namespace geosquad {

// Engine settings. The file is TOML-style: [backend], [strategy], [engine]
// and [bench] sections of `key = value` lines, `#` comments, optional
// double quotes around strings. See README for the key list.
struct EngineConfig {
    BackendConfig backend;
    StrategyConfig strategy;

    std::filesystem::path dataset_dir = "data";  // datasets land in <dir>/seed-N
    std::filesystem::path out_dir = "runs";
    std::filesystem::path prompts_dir;    // empty: built-in prompt assets
    std::filesystem::path templates_file; // empty: built-in templates
    std::uint64_t seed = 42;              // dataset seed
    std::uint64_t sandbox_seed = 7;
    int total_tools = 521;                // registry size across all eight agents
    int workers = 4;

    // Scripted benchmark playback.
    std::string perturbation = "none";
    bool omit_database = false;
    bool penalize_extras = false;

    // Throws GeoError("InvalidConfig").
    void validate() const;
};

// Throws GeoError("InvalidConfig") on unknown sections, unknown keys or bad
// values. Relative paths resolve against `base`.
EngineConfig parse_config(const std::string& text, const std::filesystem::path& base = {});
EngineConfig load_config(const std::filesystem::path& file);

}  // namespace geosquad
