// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace geosquad {

// Whitespace-and-punctuation token count: one token per maximal run of word
// characters (ASCII alphanumerics, '_' and any non-ASCII byte) and one per
// maximal run of other non-space characters.
long count_tokens(std::string_view text);

// Lowercased word-character runs; punctuation is dropped. Used by the
// retrieval index.
std::vector<std::string> word_terms(std::string_view text);

}  // namespace geosquad
