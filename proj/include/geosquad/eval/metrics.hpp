// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "geosquad/core/types.hpp"
#include "geosquad/sandbox/sandbox.hpp"
#include "geosquad/sandbox/vision.hpp"

namespace geosquad {

class EmptyGold : public GeoError {
public:
    explicit EmptyGold(const std::string& m) : GeoError("EmptyGold", m) {}
};

// Length of the longest common subsequence under `eq`.
template <typename A, typename B, typename Eq>
std::size_t lcs_length(const std::vector<A>& a, const std::vector<B>& b, Eq eq) {
    std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j) {
            cur[j] = eq(a[i - 1], b[j - 1]) ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

// Same (agent, tool) and equal normalized arguments.
bool step_matches(const ToolCall& call, const GoldStep& gold);

// |LCS(successful calls, gold steps)| / |gold steps|. Throws EmptyGold.
double correctness_rate(const std::vector<ToolCall>& executed, const GoldSolution& gold);

// 100 * (missing gold points of `product`) / |gold points of `product`|.
// With `penalize_extras`, accessed points of the product outside the gold
// set count as errors too (same denominator). Throws EmptyGold.
double mspe(const std::vector<DataPointKey>& accessed, const std::vector<DataPointKey>& gold, Product product,
            bool penalize_extras = false);

// Union of the access sets of every executed call.
std::vector<DataPointKey> trace_accesses(const ExecutionTrace& trace);

struct TaskScore {
    std::string task_id;
    double correctness = 0.0;
    std::map<Product, double> epsilon;  // products present in the gold set
    long tokens = 0;
    Terminal terminal = Terminal::completed;
    std::optional<bool> lcc_correct;     // gold classifies a scene
    std::optional<MatchCounts> detection;  // gold detects objects
};

TaskScore score_task(const ExecutionTrace& trace, const GoldSolution& gold, const Sandbox& sandbox,
                     bool penalize_extras = false);

struct VisionScores {
    std::optional<double> lcc_accuracy;  // percent
    std::optional<double> det_f1;        // percent, micro over boxes
};

VisionScores vision_scores(const std::vector<TaskScore>& scores);

}  // namespace geosquad
