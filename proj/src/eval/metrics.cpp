// SPDX-License-Identifier: Apache-2.0
#include "geosquad/eval/metrics.hpp"

#include <algorithm>
#include <set>

#include "geosquad/core/args.hpp"

namespace geosquad {

namespace {

std::string canonical_agent(const std::string& name) {
    auto d = domain_of_agent(name);
    return d ? agent_name(*d) : name;
}

std::string scene_arg(const Json& args) {
    std::string s = args.value("scene_id", std::string{});
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

}  // namespace

bool step_matches(const ToolCall& call, const GoldStep& gold) {
    if (call.tool != gold.tool_name) return false;
    if (canonical_agent(call.agent) != canonical_agent(gold.agent_name)) return false;
    return args_equal(normalize_args(call.args), normalize_args(gold.canonical_args));
}

double correctness_rate(const std::vector<ToolCall>& executed, const GoldSolution& gold) {
    if (gold.steps.empty()) throw EmptyGold("gold for " + gold.task_id + " has no steps");
    std::vector<ToolCall> ok;
    for (const auto& c : executed) {
        if (c.result_status == ToolStatus::ok) ok.push_back(c);
    }
    const auto n = lcs_length(ok, gold.steps, step_matches);
    return static_cast<double>(n) / static_cast<double>(gold.steps.size());
}

double mspe(const std::vector<DataPointKey>& accessed, const std::vector<DataPointKey>& gold, Product product,
            bool penalize_extras) {
    std::set<DataPointKey> g;
    for (const auto& k : gold) {
        if (k.product == product) g.insert(k);
    }
    if (g.empty()) throw EmptyGold("no gold datapoints for " + to_string(product));
    std::set<DataPointKey> a;
    for (const auto& k : accessed) {
        if (k.product == product) a.insert(k);
    }
    double sum = 0.0;
    for (const auto& k : g) {
        const double e = a.count(k) ? 0.0 : 1.0;
        sum += e * e;
    }
    if (penalize_extras) {
        for (const auto& k : a) {
            if (!g.count(k)) sum += 1.0;
        }
    }
    return 100.0 * sum / static_cast<double>(g.size());
}

std::vector<DataPointKey> trace_accesses(const ExecutionTrace& trace) {
    std::vector<DataPointKey> out;
    for (const auto& c : trace.executed_steps) out.insert(out.end(), c.accessed.begin(), c.accessed.end());
    normalize_keys(out);
    return out;
}

TaskScore score_task(const ExecutionTrace& trace, const GoldSolution& gold, const Sandbox& sandbox,
                     bool penalize_extras) {
    TaskScore s;
    s.task_id = gold.task_id;
    s.correctness = correctness_rate(trace.executed_steps, gold);
    s.tokens = trace.token_usage.total_tokens;
    s.terminal = trace.terminal;

    const auto accessed = trace_accesses(trace);
    std::set<Product> products;
    for (const auto& k : gold.gold_datapoints) products.insert(k.product);
    for (Product p : products) s.epsilon[p] = mspe(accessed, gold.gold_datapoints, p, penalize_extras);

    for (const auto& step : gold.steps) {
        if (step.tool_name == "classify_landcover") {
            const std::string id = scene_arg(step.canonical_args);
            const auto* scene = sandbox.scene(id);
            bool correct = false;
            for (const auto& c : trace.executed_steps) {
                if (c.tool != "classify_landcover" || c.result_status != ToolStatus::ok || scene_arg(c.args) != id) continue;
                const Json payload = Json::parse(c.result_payload, nullptr, false);
                correct = scene && payload.is_object() && payload.value("label", std::string{}) == scene->landcover;
            }
            s.lcc_correct = s.lcc_correct.value_or(true) && correct;
        } else if (step.tool_name == "detect_objects") {
            const std::string id = scene_arg(step.canonical_args);
            const std::string cls = step.canonical_args.value("class", std::string{});
            const auto* scene = sandbox.scene(id);
            std::vector<Box> truth;
            if (scene) {
                for (const auto& b : scene->objects) {
                    if (b.cls == cls) truth.push_back(b);
                }
            }
            std::vector<Box> predicted;
            // the last successful matching call is the agent's answer
            for (const auto& c : trace.executed_steps) {
                if (c.tool != "detect_objects" || c.result_status != ToolStatus::ok || scene_arg(c.args) != id) continue;
                const Json payload = Json::parse(c.result_payload, nullptr, false);
                if (!payload.is_object() || payload.value("class", std::string{}) != cls) continue;
                predicted = payload.value("boxes", std::vector<Box>{});
            }
            MatchCounts m = s.detection.value_or(MatchCounts{});
            m += match_boxes(predicted, truth);
            s.detection = m;
        }
    }
    return s;
}

VisionScores vision_scores(const std::vector<TaskScore>& scores) {
    VisionScores v;
    long lcc_total = 0, lcc_right = 0;
    MatchCounts det;
    bool any_det = false;
    for (const auto& s : scores) {
        if (s.lcc_correct) {
            ++lcc_total;
            lcc_right += *s.lcc_correct ? 1 : 0;
        }
        if (s.detection) {
            det += *s.detection;
            any_det = true;
        }
    }
    if (lcc_total) v.lcc_accuracy = 100.0 * static_cast<double>(lcc_right) / static_cast<double>(lcc_total);
    if (any_det) v.det_f1 = 100.0 * det.f1();
    return v;
}

}  // namespace geosquad
