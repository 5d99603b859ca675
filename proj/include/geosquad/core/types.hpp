// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace geosquad {

using Json = nlohmann::json;

// Base class for every error the engine raises. `code()` is the stable
// identifier that ends up in tool payloads and CLI output.
class GeoError : public std::runtime_error {
public:
    GeoError(std::string code, const std::string& message)
        : std::runtime_error(code + ": " + message), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

enum class Domain { agriculture, climate, urban, forestry, vision, database, dataops, map };

inline constexpr Domain kAllDomains[] = {Domain::database,    Domain::dataops, Domain::map,
                                         Domain::agriculture, Domain::climate, Domain::urban,
                                         Domain::forestry,    Domain::vision};

std::string to_string(Domain d);
Domain domain_from_string(std::string_view s);
// Display name of the agent that owns a domain ("Database", "DataOps", ...).
std::string agent_name(Domain d);
std::optional<Domain> domain_of_agent(std::string_view agent);

enum class Product { ndvi, ref_b2, lst, aod550, built_s, population, canopy, treeloss, detection, lcc };

inline constexpr Product kRasterProducts[] = {Product::ndvi,    Product::ref_b2,     Product::lst,
                                              Product::aod550,  Product::built_s,    Product::population,
                                              Product::canopy,  Product::treeloss};

std::string to_string(Product p);
Product product_from_string(std::string_view s);
std::optional<Product> try_product(std::string_view s);
bool is_raster(Product p);

struct Cell {
    int row = 0;
    int col = 0;
    auto operator<=>(const Cell&) const = default;
};

struct DataPointKey {
    Product product = Product::ndvi;
    Cell cell;
    std::string date;  // "YYYY-MM" or "YYYY"
    auto operator<=>(const DataPointKey&) const = default;
};

struct DateRange {
    std::string first;  // inclusive, ISO month or year
    std::string last;
    bool operator==(const DateRange&) const = default;
};

struct TaskPrompt {
    std::string id;
    Domain domain = Domain::database;
    std::string text;
    std::string region;
    std::optional<DateRange> date_range;
    bool operator==(const TaskPrompt&) const = default;
};

struct GoldStep {
    std::string agent_name;
    std::string tool_name;
    Json canonical_args = Json::object();
    bool operator==(const GoldStep&) const = default;
};

struct GoldSolution {
    std::string task_id;
    std::vector<GoldStep> steps;
    std::vector<DataPointKey> gold_datapoints;  // sorted, unique
    bool operator==(const GoldSolution&) const = default;
};

struct ToolParam {
    std::string name;
    std::string type;  // semantic type: product, region, date_range, number, ...
    bool required = true;
    bool operator==(const ToolParam&) const = default;
};

struct ToolSpec {
    std::string name;
    std::string agent;
    std::string description;
    std::vector<ToolParam> params;
    int schema_token_cost = 0;
    bool operator==(const ToolSpec&) const = default;
};

enum class ToolStatus { ok, error };

struct ToolCall {
    std::string agent;
    std::string tool;
    Json args = Json::object();
    ToolStatus result_status = ToolStatus::ok;
    std::string result_payload;
    std::vector<DataPointKey> accessed;  // sorted, unique
    bool operator==(const ToolCall&) const = default;
};

struct SubTask {
    std::string agent;
    std::string prompt;
    bool operator==(const SubTask&) const = default;
};

struct Schedule {
    std::vector<SubTask> subtasks;
    int revision = 0;
    bool operator==(const Schedule&) const = default;
};

struct CallUsage {
    long prompt_tokens = 0;
    long completion_tokens = 0;
    long total_tokens = 0;
    bool operator==(const CallUsage&) const = default;
};

struct TokenUsage {
    std::vector<CallUsage> calls;
    long prompt_tokens = 0;
    long completion_tokens = 0;
    long total_tokens = 0;

    void add(const CallUsage& c);
    void merge(const TokenUsage& other);
    bool operator==(const TokenUsage&) const = default;
};

enum class Strategy { single_agent, composition_only, ledger_loop, hybrid };
std::string to_string(Strategy s);
Strategy strategy_from_string(std::string_view s);

enum class Terminal { completed, budget_exhausted, max_revisions, context_overflow };
std::string to_string(Terminal t);
Terminal terminal_from_string(std::string_view s);

enum class AgentStatus { done, failed, needs_dependency };
std::string to_string(AgentStatus s);
AgentStatus agent_status_from_string(std::string_view s);

struct DependencyHint {
    std::string agent;
    std::string reason;
    bool operator==(const DependencyHint&) const = default;
};

// Per-subtask outcome kept in the trace so a reader can see which step
// failed and where a revision inserted work.
struct StepRecord {
    int revision = 0;
    int position = 0;
    std::string agent;
    AgentStatus status = AgentStatus::done;
    std::string summary;
    std::optional<DependencyHint> dependency_hint;
    bool operator==(const StepRecord&) const = default;
};

struct ExecutionTrace {
    std::string task_id;
    Strategy strategy = Strategy::hybrid;
    std::vector<ToolCall> executed_steps;
    std::vector<Schedule> schedules;
    std::vector<StepRecord> step_records;
    TokenUsage token_usage;
    std::string final_answer;
    Terminal terminal = Terminal::completed;
    std::string error;
    bool operator==(const ExecutionTrace&) const = default;
};

// Sorts and deduplicates a key list in place.
void normalize_keys(std::vector<DataPointKey>& keys);

}  // namespace geosquad
