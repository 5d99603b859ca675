// SPDX-License-Identifier: Apache-2.0
#include "geosquad/registry/similarity_index.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "geosquad/backend/tokenizer.hpp"

namespace geosquad {

namespace {

std::map<std::string, int> term_counts(std::string_view text) {
    std::map<std::string, int> counts;
    for (auto& t : word_terms(text)) ++counts[t];
    return counts;
}

}  // namespace

void SimilarityIndex::add(std::string_view text) {
    auto counts = term_counts(text);
    for (const auto& [term, _] : counts) ++df_[term];
    docs_.push_back(std::move(counts));
    rebuild();
}

SimilarityIndex::SparseVector SimilarityIndex::weigh(const std::map<std::string, int>& counts) const {
    const double n = static_cast<double>(docs_.size());
    SparseVector v;
    double norm = 0.0;
    for (const auto& [term, tf] : counts) {
        auto it = df_.find(term);
        if (it == df_.end()) continue;
        const double idf = std::log((1.0 + n) / (1.0 + it->second)) + 1.0;
        const double w = (1.0 + std::log(static_cast<double>(tf))) * idf;
        v[term] = w;
        norm += w * w;
    }
    if (norm > 0.0) {
        norm = std::sqrt(norm);
        for (auto& [_, w] : v) w /= norm;
    }
    return v;
}

void SimilarityIndex::rebuild() {
    vectors_.clear();
    vectors_.reserve(docs_.size());
    for (const auto& d : docs_) vectors_.push_back(weigh(d));
}

std::vector<double> SimilarityIndex::scores(std::string_view query) const {
    const SparseVector q = weigh(term_counts(query));
    std::vector<double> out;
    out.reserve(vectors_.size());
    for (const auto& v : vectors_) {
        double dot = 0.0;
        for (const auto& [term, w] : q) {
            auto it = v.find(term);
            if (it != v.end()) dot += w * it->second;
        }
        out.push_back(std::clamp(dot, 0.0, 1.0));
    }
    return out;
}

std::vector<std::pair<std::size_t, double>> SimilarityIndex::top_k(std::string_view query, std::size_t k) const {
    const auto s = scores(query);
    std::vector<std::size_t> order(s.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&s](std::size_t a, std::size_t b) { return s[a] > s[b]; });
    std::vector<std::pair<std::size_t, double>> out;
    for (std::size_t i = 0; i < order.size() && i < k; ++i) out.emplace_back(order[i], s[order[i]]);
    return out;
}

}  // namespace geosquad
