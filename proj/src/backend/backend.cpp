// SPDX-License-Identifier: Apache-2.0
#include "geosquad/backend/backend.hpp"

namespace geosquad {

long check_context_budget(const std::vector<ChatMessage>& messages, const std::vector<ToolSpec>& tools,
                          const BackendConfig& config) {
    long required = messages_tokens(messages);
    for (const auto& t : tools) required += t.schema_token_cost;
    if (required > config.context_budget) throw ContextOverflow(required, config.context_budget);
    return required;
}

}  // namespace geosquad
