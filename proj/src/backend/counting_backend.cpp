// SPDX-License-Identifier: Apache-2.0
#include "geosquad/backend/counting_backend.hpp"

namespace geosquad {

Completion CountingBackend::complete(const std::vector<ChatMessage>& messages, const std::vector<ToolSpec>& tools,
                                     const BackendConfig& config) {
    Completion c = inner_.complete(messages, tools, config);
    std::lock_guard lock(mu_);
    usage_.add(c.usage);
    if (c.reported_usage) reported_.add(*c.reported_usage);
    return c;
}

TokenUsage CountingBackend::usage() const {
    std::lock_guard lock(mu_);
    return usage_;
}

TokenUsage CountingBackend::reported_usage() const {
    std::lock_guard lock(mu_);
    return reported_;
}

}  // namespace geosquad
