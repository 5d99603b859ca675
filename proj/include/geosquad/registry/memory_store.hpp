// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "geosquad/core/types.hpp"
#include "geosquad/registry/similarity_index.hpp"

namespace geosquad {

class EmptyStore : public GeoError {
public:
    explicit EmptyStore(const std::string& what) : GeoError("EmptyStore", what) {}
};

// Prompt-to-tools pair used for tool selection guidance inside one agent.
struct ToolExemplar {
    std::string prompt_text;
    std::string agent;
    std::vector<std::string> tools_used;
    bool operator==(const ToolExemplar&) const = default;
};

// Prompt-to-workflow pair used for guidance across agents.
struct WorkflowExemplar {
    std::string prompt_text;
    std::vector<std::string> agents_involved;
    std::vector<SubTask> schedule_sketch;
    bool operator==(const WorkflowExemplar&) const = default;
};

void to_json(Json& j, const ToolExemplar& e);
void from_json(const Json& j, ToolExemplar& e);
void to_json(Json& j, const WorkflowExemplar& e);
void from_json(const Json& j, WorkflowExemplar& e);

template <typename T>
struct Scored {
    T exemplar;
    double score = 0.0;
};

using ToolHit = Scored<ToolExemplar>;
using WorkflowHit = Scored<WorkflowExemplar>;

inline constexpr std::size_t kDefaultToolK = 3;
inline constexpr std::size_t kDefaultWorkflowK = 2;

// Tool-selection store: one similarity index per agent.
class ToolSelectionStore {
public:
    void add(ToolExemplar exemplar);
    std::size_t size() const;
    std::size_t size_for(const std::string& agent) const;

    // Top-k exemplars of `agent`; throws EmptyStore when the agent has none.
    std::vector<ToolHit> retrieve(const std::string& agent, std::string_view query, std::size_t k) const;
    // Top-k over every agent's exemplars together.
    std::vector<ToolHit> retrieve_any(std::string_view query, std::size_t k) const;

    const std::vector<ToolExemplar>& exemplars() const { return all_; }
    static ToolSelectionStore load(const std::filesystem::path& jsonl);

private:
    struct AgentShelf {
        std::vector<ToolExemplar> items;
        SimilarityIndex index;
    };
    std::map<std::string, AgentShelf> shelves_;
    std::vector<ToolExemplar> all_;
    SimilarityIndex all_index_;
};

class WorkflowMemoryStore {
public:
    void add(WorkflowExemplar exemplar);
    std::size_t size() const { return items_.size(); }
    // Throws EmptyStore on an empty store.
    std::vector<WorkflowHit> retrieve(std::string_view query, std::size_t k) const;

    const std::vector<WorkflowExemplar>& exemplars() const { return items_; }
    static WorkflowMemoryStore load(const std::filesystem::path& jsonl);

private:
    std::vector<WorkflowExemplar> items_;
    SimilarityIndex index_;
};

// Few-shot guidance block. Tool hits render as
//   Similar prompt: "..." / Tools used: a(), b()
// and workflow hits as
//   Similar workflow: "..." / Agents involved: A, B
// No hits renders "".
std::string format_guidance(const std::vector<ToolHit>& ts_hits, const std::vector<WorkflowHit>& wm_hits);

}  // namespace geosquad
