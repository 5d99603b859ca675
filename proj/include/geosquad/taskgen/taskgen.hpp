// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "geosquad/backend/backend.hpp"
#include "geosquad/core/types.hpp"
#include "geosquad/registry/memory_store.hpp"
#include "geosquad/sandbox/sandbox.hpp"
#include "geosquad/taskgen/templates.hpp"

namespace geosquad {

inline constexpr int kExemplarsPerAgent = 7;
inline constexpr int kDefaultPerAgent = 25;
inline constexpr int kFullPerAgent = 250;

struct DatasetManifest {
    std::uint64_t seed = 0;
    std::uint64_t sandbox_seed = 0;
    int per_agent = 0;
    std::map<std::string, int> exemplar_counts;   // by agent
    std::map<std::string, int> benchmark_counts;  // by agent
    std::string fixture_hash;
    int rows = 0;
    int cols = 0;
};

void to_json(Json& j, const DatasetManifest& m);
void from_json(const Json& j, DatasetManifest& m);

struct TaskDataset {
    std::vector<TaskPrompt> tasks;
    std::vector<GoldSolution> golds;
    std::vector<TaskPrompt> exemplars;
    std::vector<GoldSolution> exemplar_golds;
    DatasetManifest manifest;
};

// Per domain: kExemplarsPerAgent exemplars picked round-robin over its
// templates, then `per_agent` benchmark tasks continuing the same rotation.
// Instantiated texts never repeat. Throws TemplateGapError when a domain has
// no templates or too few distinct instances, or when the exemplars leave a
// real tool uncovered.
TaskDataset generate_dataset(const std::vector<TaskTemplate>& templates, const Sandbox& sandbox, std::uint64_t seed,
                             int per_agent);

struct MemoryStores {
    ToolSelectionStore ts;
    WorkflowMemoryStore wm;
};

// One ToolExemplar per (exemplar, agent involved) and one WorkflowExemplar
// per exemplar.
MemoryStores compile_memories(const std::vector<TaskPrompt>& exemplars, const std::vector<GoldSolution>& golds);

// Optional surface rewording of a task text by a model. Identity when
// disabled or when the model answers with nothing.
std::string paraphrase_hook(const std::string& text, ModelBackend* backend, const BackendConfig& config, bool enabled);

std::filesystem::path dataset_dir(const std::filesystem::path& base, std::uint64_t seed);

// tasks.jsonl, golds.jsonl, exemplars.jsonl, exemplar_golds.jsonl,
// manifest.json, ts_store.jsonl, wm_store.jsonl and fixture.json.
void write_dataset(const std::filesystem::path& dir, const TaskDataset& data, const MemoryStores& stores,
                   const Sandbox& sandbox);
TaskDataset load_dataset(const std::filesystem::path& dir);

}  // namespace geosquad
