// SPDX-License-Identifier: Apache-2.0
#include "geosquad/backend/http_backend.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <thread>

#include <httplib.h>

namespace geosquad {

namespace {

std::string json_type_for(const std::string& semantic) {
    if (semantic == "number") return "number";
    if (semantic == "integer") return "integer";
    if (semantic == "boolean") return "boolean";
    return "string";
}

Json function_schema(const ToolSpec& tool) {
    Json properties = Json::object();
    Json required = Json::array();
    for (const auto& p : tool.params) {
        properties[p.name] = Json{{"type", json_type_for(p.type)}, {"description", p.type}};
        if (p.required) required.push_back(p.name);
    }
    return Json{{"type", "function"},
                {"function",
                 {{"name", tool.name},
                  {"description", tool.description},
                  {"parameters", {{"type", "object"}, {"properties", properties}, {"required", required}}}}}};
}

struct SlotGuard {
    std::counting_semaphore<64>& sem;
    explicit SlotGuard(std::counting_semaphore<64>& s) : sem(s) { sem.acquire(); }
    ~SlotGuard() { sem.release(); }
};

}  // namespace

std::string api_key_from_env() {
    const char* key = std::getenv("GEOSQUAD_API_KEY");
    return key ? std::string(key) : std::string{};
}

HttpBackend::HttpBackend(BackendConfig config, std::string api_key)
    : config_(std::move(config)), api_key_(std::move(api_key)) {
    config_.validate();
    target_ = split_endpoint(*config_.endpoint);
    in_flight_ = std::make_unique<std::counting_semaphore<64>>(std::clamp(config_.max_in_flight, 1, 64));
}

HttpBackend::~HttpBackend() = default;

HttpBackend::Target HttpBackend::split_endpoint(const std::string& endpoint) {
    const auto scheme_end = endpoint.find("://");
    if (scheme_end == std::string::npos) throw GeoError("InvalidConfig", "endpoint needs a scheme: " + endpoint);
    const auto path_start = endpoint.find('/', scheme_end + 3);
    Target t;
    t.scheme_host_port = endpoint.substr(0, path_start);
    std::string path = path_start == std::string::npos ? "" : endpoint.substr(path_start);
    while (!path.empty() && path.back() == '/') path.pop_back();
    const std::string suffix = "/chat/completions";
    if (path.size() < suffix.size() || path.compare(path.size() - suffix.size(), suffix.size(), suffix) != 0) {
        path += suffix;
    }
    t.path = path;
    return t;
}

Json HttpBackend::build_request(const std::vector<ChatMessage>& messages, const std::vector<ToolSpec>& tools,
                                const BackendConfig& config) {
    Json msgs = Json::array();
    for (const auto& m : messages) {
        Json jm{{"role", to_string(m.role)}, {"content", m.content}};
        if (!m.tool_calls.empty()) {
            Json calls = Json::array();
            for (const auto& c : m.tool_calls) {
                calls.push_back(
                    Json{{"id", c.id}, {"type", "function"}, {"function", {{"name", c.name}, {"arguments", c.arguments}}}});
            }
            jm["tool_calls"] = calls;
        }
        if (m.tool_call_id) jm["tool_call_id"] = *m.tool_call_id;
        msgs.push_back(std::move(jm));
    }
    Json body{{"model", config.model_name},
              {"messages", msgs},
              {"temperature", config.temperature},
              {"max_tokens", config.max_completion_tokens}};
    if (!tools.empty()) {
        Json jt = Json::array();
        for (const auto& t : tools) jt.push_back(function_schema(t));
        body["tools"] = jt;
    }
    return body;
}

ChatMessage HttpBackend::parse_response(const Json& body, std::optional<CallUsage>* reported) {
    if (!body.contains("choices") || !body["choices"].is_array() || body["choices"].empty()) {
        throw TransportError("response has no choices");
    }
    const Json& msg = body["choices"][0].value("message", Json::object());
    ChatMessage out = ChatMessage::assistant(msg.contains("content") && msg["content"].is_string()
                                                 ? msg["content"].get<std::string>()
                                                 : std::string{});
    if (msg.contains("tool_calls") && msg["tool_calls"].is_array()) {
        for (const auto& c : msg["tool_calls"]) {
            const Json& fn = c.value("function", Json::object());
            std::string args = "{}";
            if (fn.contains("arguments")) {
                args = fn["arguments"].is_string() ? fn["arguments"].get<std::string>() : fn["arguments"].dump();
            }
            out.tool_calls.push_back({c.value("id", std::string{}), fn.value("name", std::string{}), args});
        }
    }
    if (reported && body.contains("usage") && body["usage"].is_object()) {
        const Json& u = body["usage"];
        CallUsage cu;
        cu.prompt_tokens = u.value("prompt_tokens", 0L);
        cu.completion_tokens = u.value("completion_tokens", 0L);
        cu.total_tokens = u.value("total_tokens", cu.prompt_tokens + cu.completion_tokens);
        *reported = cu;
    }
    return out;
}

Completion HttpBackend::complete(const std::vector<ChatMessage>& messages, const std::vector<ToolSpec>& tools,
                                 const BackendConfig& config) {
    const long prompt_tokens = check_context_budget(messages, tools, config);
    const std::string payload = build_request(messages, tools, config).dump();

    SlotGuard slot(*in_flight_);
    std::string last_error;
    for (int attempt = 1; attempt <= config_.max_attempts; ++attempt) {
        if (attempt > 1) {
            std::this_thread::sleep_for(std::chrono::milliseconds(config_.backoff_ms << (attempt - 2)));
        }
        httplib::Client client(target_.scheme_host_port);
        client.set_connection_timeout(10);
        client.set_read_timeout(120);
        httplib::Headers headers;
        if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);
        auto res = client.Post(target_.path, headers, payload, "application/json");
        if (!res) {
            last_error = "request failed: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status == 429 || res->status >= 500) {
            last_error = "HTTP " + std::to_string(res->status);
            continue;
        }
        if (res->status != 200) {
            throw TransportError("HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 300));
        }
        Json body;
        try {
            body = Json::parse(res->body);
        } catch (const Json::parse_error& e) {
            last_error = std::string("malformed JSON: ") + e.what();
            continue;
        }
        Completion c;
        std::optional<CallUsage> reported;
        c.message = parse_response(body, &reported);
        c.usage.prompt_tokens = prompt_tokens;
        c.usage.completion_tokens = message_tokens(c.message);
        c.usage.total_tokens = c.usage.prompt_tokens + c.usage.completion_tokens;
        c.reported_usage = reported;
        return c;
    }
    throw TransportError("giving up after " + std::to_string(config_.max_attempts) + " attempts: " + last_error);
}

}  // namespace geosquad
