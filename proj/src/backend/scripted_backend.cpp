// SPDX-License-Identifier: Apache-2.0
#include "geosquad/backend/scripted_backend.hpp"

#include <algorithm>

namespace geosquad {

namespace {

const ChatMessage* first_of(const std::vector<ChatMessage>& messages, Role role) {
    for (const auto& m : messages) {
        if (m.role == role) return &m;
    }
    return nullptr;
}

Json corrupt(const Json& args) {
    Json out = args;
    for (auto& [key, value] : out.items()) {
        if (value.is_string()) {
            value = value.get<std::string>() + "_x";
        } else if (value.is_number()) {
            const double v = value.get<double>();
            value = v == 0.0 ? 1.0 : v * 2.0;
        } else if (value.is_boolean()) {
            value = !value.get<bool>();
        }
    }
    return out;
}

}  // namespace

Perturbation parse_perturbation(std::string_view text) {
    Perturbation p;
    if (text.empty() || text == "none") return p;
    const auto colon = text.find(':');
    const std::string_view kind = text.substr(0, colon);
    const std::string rest = colon == std::string_view::npos ? "" : std::string(text.substr(colon + 1));
    try {
        if (kind == "drop_step") {
            p.kind = Perturbation::Kind::drop_step;
            p.step = std::stoi(rest);
            return p;
        }
        if (kind == "swap_steps") {
            const auto comma = rest.find(',');
            if (comma == std::string::npos) throw GeoError("InvalidConfig", "swap_steps needs I,J");
            p.kind = Perturbation::Kind::swap_steps;
            p.step = std::stoi(rest.substr(0, comma));
            p.other_step = std::stoi(rest.substr(comma + 1));
            return p;
        }
        if (kind == "wrong_args" && !rest.empty()) {
            p.kind = Perturbation::Kind::wrong_args;
            p.tool = rest;
            return p;
        }
    } catch (const std::logic_error&) {
        // falls through to the error below
    }
    throw GeoError("InvalidConfig", "bad perturbation '" + std::string(text) + "'");
}

std::string to_string(const Perturbation& p) {
    switch (p.kind) {
        case Perturbation::Kind::none: return "none";
        case Perturbation::Kind::drop_step: return "drop_step:" + std::to_string(p.step);
        case Perturbation::Kind::swap_steps:
            return "swap_steps:" + std::to_string(p.step) + "," + std::to_string(p.other_step);
        case Perturbation::Kind::wrong_args: return "wrong_args:" + p.tool;
    }
    return "none";
}

void to_json(Json& j, const ScriptedBehavior& b) {
    Json rules = Json::array();
    for (const auto& r : b.rules) {
        Json replies = Json::array();
        for (const auto& reply : r.replies) {
            Json calls = Json::array();
            for (const auto& c : reply.tool_calls) {
                calls.push_back(Json{{"name", c.name}, {"args", c.args}, {"step", c.step}});
            }
            replies.push_back(Json{{"tool_calls", calls}, {"text", reply.text}});
        }
        rules.push_back(Json{{"system_contains", r.system_contains},
                             {"user_contains", r.user_contains},
                             {"replies", replies}});
    }
    j = Json{{"rules", rules}, {"default_reply", b.default_reply}, {"perturbation", to_string(b.perturbation)}};
}

void from_json(const Json& j, ScriptedBehavior& b) {
    b.rules.clear();
    for (const auto& r : j.value("rules", Json::array())) {
        ScriptedRule rule;
        rule.system_contains = r.value("system_contains", std::string{});
        rule.user_contains = r.value("user_contains", std::string{});
        for (const auto& reply : r.value("replies", Json::array())) {
            ScriptedReply sr;
            sr.text = reply.value("text", std::string{});
            for (const auto& c : reply.value("tool_calls", Json::array())) {
                sr.tool_calls.push_back({c.at("name").get<std::string>(), c.value("args", Json::object()),
                                         c.value("step", -1)});
            }
            rule.replies.push_back(std::move(sr));
        }
        b.rules.push_back(std::move(rule));
    }
    b.default_reply = j.value("default_reply", std::string{"done"});
    b.perturbation = parse_perturbation(j.value("perturbation", std::string{"none"}));
}

ScriptedBehavior apply_perturbation(const ScriptedBehavior& behavior) {
    ScriptedBehavior out = behavior;
    int next = 0;
    int max_step = -1;
    for (auto& rule : out.rules) {
        for (auto& reply : rule.replies) {
            for (auto& call : reply.tool_calls) {
                if (call.step < 0) call.step = next;
                next = std::max(next, call.step + 1);
                max_step = std::max(max_step, call.step);
            }
        }
    }
    auto resolve = [&](int k) { return k < 0 ? max_step + 1 + k : k; };
    const Perturbation& p = behavior.perturbation;

    for (auto& rule : out.rules) {
        for (auto& reply : rule.replies) {
            auto& calls = reply.tool_calls;
            switch (p.kind) {
                case Perturbation::Kind::none: break;
                case Perturbation::Kind::drop_step: {
                    const int k = resolve(p.step);
                    calls.erase(std::remove_if(calls.begin(), calls.end(),
                                               [k](const ScriptedToolCall& c) { return c.step == k; }),
                                calls.end());
                    break;
                }
                case Perturbation::Kind::swap_steps: break;  // handled below
                case Perturbation::Kind::wrong_args:
                    for (auto& c : calls) {
                        if (c.name == p.tool) c.args = corrupt(c.args);
                    }
                    break;
            }
        }
        if (p.kind == Perturbation::Kind::drop_step) {
            // A reply that lost all of its calls disappears rather than
            // turning into an early final answer.
            auto& replies = rule.replies;
            const auto original = behavior.rules[static_cast<std::size_t>(&rule - out.rules.data())].replies;
            std::vector<ScriptedReply> kept;
            for (std::size_t i = 0; i < replies.size(); ++i) {
                if (!original[i].tool_calls.empty() && replies[i].tool_calls.empty()) continue;
                kept.push_back(std::move(replies[i]));
            }
            replies = std::move(kept);
        }
    }

    if (p.kind == Perturbation::Kind::swap_steps) {
        const int i = resolve(p.step);
        const int j = resolve(p.other_step);
        // Within each rule the calls tagged i and j exchange name and args.
        for (auto& rule : out.rules) {
            ScriptedToolCall* a = nullptr;
            ScriptedToolCall* b = nullptr;
            for (auto& reply : rule.replies) {
                for (auto& c : reply.tool_calls) {
                    if (c.step == i && !a) a = &c;
                    if (c.step == j && !b) b = &c;
                }
            }
            if (a && b) {
                std::swap(a->name, b->name);
                std::swap(a->args, b->args);
                std::swap(a->step, b->step);
            }
        }
    }
    out.perturbation = Perturbation{};
    return out;
}

ScriptedBackend::ScriptedBackend(ScriptedBehavior behavior) : behavior_(apply_perturbation(behavior)) {}

Completion ScriptedBackend::complete(const std::vector<ChatMessage>& messages, const std::vector<ToolSpec>& tools,
                                     const BackendConfig& config) {
    const long prompt_tokens = check_context_budget(messages, tools, config);

    const ChatMessage* system = first_of(messages, Role::system);
    std::size_t last_user = messages.size();
    for (std::size_t i = messages.size(); i-- > 0;) {
        if (messages[i].role == Role::user) {
            last_user = i;
            break;
        }
    }
    std::size_t turn = 0;
    std::size_t history_assistants = 0;
    for (std::size_t i = 0; i < messages.size(); ++i) {
        if (messages[i].role != Role::assistant) continue;
        ++history_assistants;
        if (last_user == messages.size() || i > last_user) ++turn;
    }
    const std::string& system_text = system ? system->content : std::string{};
    static const std::string empty;
    const std::string& user_text = last_user < messages.size() ? messages[last_user].content : empty;

    ChatMessage reply = ChatMessage::assistant(behavior_.default_reply);
    for (const auto& rule : behavior_.rules) {
        if (system_text.find(rule.system_contains) == std::string::npos) continue;
        if (user_text.find(rule.user_contains) == std::string::npos) continue;
        if (turn < rule.replies.size()) {
            const ScriptedReply& r = rule.replies[turn];
            std::vector<ToolCallRequest> calls;
            for (std::size_t k = 0; k < r.tool_calls.size(); ++k) {
                calls.push_back({"call_" + std::to_string(history_assistants) + "_" + std::to_string(k),
                                 r.tool_calls[k].name, r.tool_calls[k].args.dump()});
            }
            reply = ChatMessage::assistant(r.text, std::move(calls));
        }
        break;
    }

    CallUsage usage;
    usage.prompt_tokens = prompt_tokens;
    usage.completion_tokens = message_tokens(reply);
    usage.total_tokens = usage.prompt_tokens + usage.completion_tokens;
    return {std::move(reply), usage, std::nullopt};
}

}  // namespace geosquad
