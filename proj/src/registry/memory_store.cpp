// SPDX-License-Identifier: Apache-2.0
#include "geosquad/registry/memory_store.hpp"

#include "geosquad/core/json_io.hpp"

namespace geosquad {

void to_json(Json& j, const ToolExemplar& e) {
    j = Json{{"prompt_text", e.prompt_text}, {"agent", e.agent}, {"tools_used", e.tools_used}};
}

void from_json(const Json& j, ToolExemplar& e) {
    e.prompt_text = j.at("prompt_text").get<std::string>();
    e.agent = j.at("agent").get<std::string>();
    e.tools_used = j.at("tools_used").get<std::vector<std::string>>();
}

void to_json(Json& j, const WorkflowExemplar& e) {
    j = Json{{"prompt_text", e.prompt_text},
             {"agents_involved", e.agents_involved},
             {"schedule_sketch", e.schedule_sketch}};
}

void from_json(const Json& j, WorkflowExemplar& e) {
    e.prompt_text = j.at("prompt_text").get<std::string>();
    e.agents_involved = j.at("agents_involved").get<std::vector<std::string>>();
    e.schedule_sketch = j.value("schedule_sketch", std::vector<SubTask>{});
}

void ToolSelectionStore::add(ToolExemplar exemplar) {
    if (exemplar.tools_used.empty()) throw GeoError("InvalidExemplar", "tool exemplar without tools");
    auto& shelf = shelves_[exemplar.agent];
    shelf.index.add(exemplar.prompt_text);
    shelf.items.push_back(exemplar);
    all_index_.add(exemplar.prompt_text);
    all_.push_back(std::move(exemplar));
}

std::size_t ToolSelectionStore::size() const { return all_.size(); }

std::size_t ToolSelectionStore::size_for(const std::string& agent) const {
    auto it = shelves_.find(agent);
    return it == shelves_.end() ? 0 : it->second.items.size();
}

std::vector<ToolHit> ToolSelectionStore::retrieve(const std::string& agent, std::string_view query,
                                                  std::size_t k) const {
    auto it = shelves_.find(agent);
    if (it == shelves_.end() || it->second.items.empty()) throw EmptyStore("no tool exemplars for " + agent);
    std::vector<ToolHit> out;
    for (const auto& [idx, score] : it->second.index.top_k(query, k)) out.push_back({it->second.items[idx], score});
    return out;
}

std::vector<ToolHit> ToolSelectionStore::retrieve_any(std::string_view query, std::size_t k) const {
    if (all_.empty()) throw EmptyStore("tool exemplar store is empty");
    std::vector<ToolHit> out;
    for (const auto& [idx, score] : all_index_.top_k(query, k)) out.push_back({all_[idx], score});
    return out;
}

ToolSelectionStore ToolSelectionStore::load(const std::filesystem::path& jsonl) {
    ToolSelectionStore store;
    for (auto& e : read_jsonl_as<ToolExemplar>(jsonl)) store.add(std::move(e));
    return store;
}

void WorkflowMemoryStore::add(WorkflowExemplar exemplar) {
    if (exemplar.agents_involved.empty()) throw GeoError("InvalidExemplar", "workflow exemplar without agents");
    index_.add(exemplar.prompt_text);
    items_.push_back(std::move(exemplar));
}

std::vector<WorkflowHit> WorkflowMemoryStore::retrieve(std::string_view query, std::size_t k) const {
    if (items_.empty()) throw EmptyStore("workflow memory is empty");
    std::vector<WorkflowHit> out;
    for (const auto& [idx, score] : index_.top_k(query, k)) out.push_back({items_[idx], score});
    return out;
}

WorkflowMemoryStore WorkflowMemoryStore::load(const std::filesystem::path& jsonl) {
    WorkflowMemoryStore store;
    for (auto& e : read_jsonl_as<WorkflowExemplar>(jsonl)) store.add(std::move(e));
    return store;
}

std::string format_guidance(const std::vector<ToolHit>& ts_hits, const std::vector<WorkflowHit>& wm_hits) {
    std::string out;
    if (!ts_hits.empty()) {
        out += "TS:\n";
        for (const auto& hit : ts_hits) {
            out += "Similar prompt: \"" + hit.exemplar.prompt_text + "\"\n";
            out += "Tools used: ";
            for (std::size_t i = 0; i < hit.exemplar.tools_used.size(); ++i) {
                if (i > 0) out += ", ";
                out += hit.exemplar.tools_used[i] + "()";
            }
            out += "\n";
        }
    }
    if (!wm_hits.empty()) {
        out += "WM:\n";
        for (const auto& hit : wm_hits) {
            out += "Similar workflow: \"" + hit.exemplar.prompt_text + "\"\n";
            out += "Agents involved: ";
            for (std::size_t i = 0; i < hit.exemplar.agents_involved.size(); ++i) {
                if (i > 0) out += ", ";
                out += hit.exemplar.agents_involved[i];
            }
            out += "\n";
        }
    }
    return out;
}

}  // namespace geosquad
