// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "geosquad/core/types.hpp"
#include "geosquad/eval/metrics.hpp"

namespace geosquad {

// One row of the results table: a (strategy, TS, WM) combination.
struct BenchmarkReport {
    Strategy strategy = Strategy::hybrid;
    bool ts = false;
    bool wm = false;
    long tasks = 0;
    double correctness_rate = 0.0;  // percent
    double avg_tokens_k = 0.0;
    std::map<Product, double> epsilon;  // absent when no task touched the product
    std::optional<double> lcc_acc;
    std::optional<double> det_f1;
    long completed = 0;
    long context_overflow = 0;

    bool operator==(const BenchmarkReport&) const = default;
};

// Throws GeoError("InvalidValue") for an empty score list.
BenchmarkReport aggregate(const std::vector<TaskScore>& scores, Strategy strategy, bool ts, bool wm);

// Column order of report.csv. Fixed; tools downstream index by name.
const std::vector<std::string>& report_columns();

std::string render_csv(const std::vector<BenchmarkReport>& reports);
std::string render_markdown(const std::vector<BenchmarkReport>& reports);
std::vector<BenchmarkReport> parse_csv(const std::string& text);

}  // namespace geosquad
