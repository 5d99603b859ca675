// SPDX-License-Identifier: Apache-2.0
#include "geosquad/backend/tokenizer.hpp"

#include <cctype>

namespace geosquad {

namespace {

enum class CharClass { space, word, punct };

CharClass classify(unsigned char c) {
    if (std::isspace(c)) return CharClass::space;
    if (std::isalnum(c) || c == '_' || c >= 0x80) return CharClass::word;
    return CharClass::punct;
}

}  // namespace

long count_tokens(std::string_view text) {
    long count = 0;
    CharClass prev = CharClass::space;
    for (unsigned char c : text) {
        const CharClass cur = classify(c);
        if (cur != CharClass::space && cur != prev) ++count;
        prev = cur;
    }
    return count;
}

std::vector<std::string> word_terms(std::string_view text) {
    std::vector<std::string> terms;
    std::string current;
    for (unsigned char c : text) {
        if (classify(c) == CharClass::word) {
            current.push_back(static_cast<char>(std::tolower(c)));
        } else if (!current.empty()) {
            terms.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) terms.push_back(std::move(current));
    return terms;
}

}  // namespace geosquad
