// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <mutex>

#include "geosquad/backend/backend.hpp"

namespace geosquad {

// Forwards to another backend and keeps the running TokenUsage of every
// successful call.
class CountingBackend : public ModelBackend {
public:
    explicit CountingBackend(ModelBackend& inner) : inner_(inner) {}

    Completion complete(const std::vector<ChatMessage>& messages, const std::vector<ToolSpec>& tools,
                        const BackendConfig& config) override;
    bool scripted() const override { return inner_.scripted(); }

    TokenUsage usage() const;
    // Endpoint-reported totals; empty when the inner backend never sent any.
    TokenUsage reported_usage() const;

private:
    ModelBackend& inner_;
    mutable std::mutex mu_;
    TokenUsage usage_;
    TokenUsage reported_;
};

}  // namespace geosquad
