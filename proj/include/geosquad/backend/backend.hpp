// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <vector>

#include "geosquad/backend/chat.hpp"
#include "geosquad/core/types.hpp"

namespace geosquad {

struct Completion {
    ChatMessage message;
    CallUsage usage;  // local tokenizer accounting
    std::optional<CallUsage> reported_usage;  // endpoint figures, when sent
};

// Chat completion with tool calling. Implementations must be callable from
// several benchmark workers at once.
class ModelBackend {
public:
    virtual ~ModelBackend() = default;

    // Throws ContextOverflow when the messages plus tool schemas exceed
    // config.context_budget.
    virtual Completion complete(const std::vector<ChatMessage>& messages, const std::vector<ToolSpec>& tools,
                                const BackendConfig& config) = 0;

    // True for replay backends. The orchestrator uses deterministic rules
    // in place of judgment calls when this is set.
    virtual bool scripted() const { return false; }
};

// Input tokens of a call (messages plus schema costs); throws ContextOverflow
// when above budget.
long check_context_budget(const std::vector<ChatMessage>& messages, const std::vector<ToolSpec>& tools,
                          const BackendConfig& config);

}  // namespace geosquad
