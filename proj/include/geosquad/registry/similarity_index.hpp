// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace geosquad {

// TF-IDF document index with cosine scoring. Term frequency is 1 + ln(tf);
// IDF is ln((1 + N) / (1 + df)) + 1 and is recomputed over the whole
// collection on every insertion. Document vectors are L2-normalized.
class SimilarityIndex {
public:
    void add(std::string_view text);
    std::size_t size() const { return docs_.size(); }

    // Cosine score of `query` against every document, in insertion order.
    // Scores lie in [0, 1]; query terms outside the vocabulary are ignored.
    std::vector<double> scores(std::string_view query) const;

    // Indices of the k best documents, score descending, ties by insertion order.
    std::vector<std::pair<std::size_t, double>> top_k(std::string_view query, std::size_t k) const;

private:
    using SparseVector = std::map<std::string, double>;

    SparseVector weigh(const std::map<std::string, int>& counts) const;
    void rebuild();

    std::vector<std::map<std::string, int>> docs_;
    std::map<std::string, int> df_;
    std::vector<SparseVector> vectors_;
};

}  // namespace geosquad
