// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "geosquad/core/types.hpp"

namespace geosquad {

void to_json(Json& j, const Cell& c);
void from_json(const Json& j, Cell& c);
void to_json(Json& j, const DataPointKey& k);
void from_json(const Json& j, DataPointKey& k);
void to_json(Json& j, const DateRange& d);
void from_json(const Json& j, DateRange& d);
void to_json(Json& j, const TaskPrompt& t);
void from_json(const Json& j, TaskPrompt& t);
void to_json(Json& j, const GoldStep& s);
void from_json(const Json& j, GoldStep& s);
void to_json(Json& j, const GoldSolution& g);
void from_json(const Json& j, GoldSolution& g);
void to_json(Json& j, const ToolParam& p);
void from_json(const Json& j, ToolParam& p);
void to_json(Json& j, const ToolSpec& t);
void from_json(const Json& j, ToolSpec& t);
void to_json(Json& j, const ToolCall& c);
void from_json(const Json& j, ToolCall& c);
void to_json(Json& j, const SubTask& s);
void from_json(const Json& j, SubTask& s);
void to_json(Json& j, const Schedule& s);
void from_json(const Json& j, Schedule& s);
void to_json(Json& j, const CallUsage& u);
void from_json(const Json& j, CallUsage& u);
void to_json(Json& j, const TokenUsage& u);
void from_json(const Json& j, TokenUsage& u);
void to_json(Json& j, const DependencyHint& h);
void from_json(const Json& j, DependencyHint& h);
void to_json(Json& j, const StepRecord& r);
void from_json(const Json& j, StepRecord& r);
void to_json(Json& j, const ExecutionTrace& t);
void from_json(const Json& j, ExecutionTrace& t);

std::vector<Json> read_jsonl(const std::filesystem::path& path);
void write_jsonl(const std::filesystem::path& path, const std::vector<Json>& rows);

template <typename T>
std::vector<T> read_jsonl_as(const std::filesystem::path& path) {
    std::vector<T> out;
    for (const auto& row : read_jsonl(path)) out.push_back(row.get<T>());
    return out;
}

template <typename T>
void write_jsonl_from(const std::filesystem::path& path, const std::vector<T>& items) {
    std::vector<Json> rows;
    rows.reserve(items.size());
    for (const auto& item : items) rows.emplace_back(item);
    write_jsonl(path, rows);
}

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace geosquad
