// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <optional>
#include <semaphore>
#include <string>

#include "geosquad/backend/backend.hpp"

namespace geosquad {

// Chat-completions client for any OpenAI-compatible endpoint. Token usage
// uses the local tokenizer; the endpoint's own figures are kept in
// `last_reported_usage` when it sends them.
class HttpBackend : public ModelBackend {
public:
    // `api_key` empty means no Authorization header.
    HttpBackend(BackendConfig config, std::string api_key);
    ~HttpBackend() override;

    Completion complete(const std::vector<ChatMessage>& messages, const std::vector<ToolSpec>& tools,
                        const BackendConfig& config) override;

    // Request body for a call; exposed for wire-format tests.
    static Json build_request(const std::vector<ChatMessage>& messages, const std::vector<ToolSpec>& tools,
                              const BackendConfig& config);
    // Assistant message from a response body. Throws TransportError on a
    // body without choices.
    static ChatMessage parse_response(const Json& body, std::optional<CallUsage>* reported = nullptr);

private:
    struct Target {
        std::string scheme_host_port;
        std::string path;
    };
    static Target split_endpoint(const std::string& endpoint);

    BackendConfig config_;
    std::string api_key_;
    Target target_;
    std::unique_ptr<std::counting_semaphore<64>> in_flight_;
};

// GEOSQUAD_API_KEY, or empty.
std::string api_key_from_env();

}  // namespace geosquad
