// SPDX-License-Identifier: Apache-2.0
#include "geosquad/registry/filler.hpp"

#include <array>
#include <random>

namespace geosquad {

namespace {

struct DomainVocab {
    std::array<const char*, 6> subjects;
    std::array<const char*, 4> nouns;
};

const DomainVocab& vocab_for(Domain d) {
    static const DomainVocab agriculture{{"irrigation", "pasture", "orchard", "harvest", "fertilizer", "soil"},
                                         {"paddock", "farm", "field", "furrow"}};
    static const DomainVocab climate{{"rainfall", "humidity", "wind", "cyclone", "drought", "snowpack"},
                                     {"station", "basin", "front", "cell"}};
    static const DomainVocab urban{{"zoning", "traffic", "transit", "parcel", "housing", "utility"},
                                   {"block", "corridor", "district", "lot"}};
    static const DomainVocab forestry{{"timber", "biomass", "species", "logging", "firebreak", "understory"},
                                      {"stand", "plot", "compartment", "coupe"}};
    static const DomainVocab vision{{"mosaic", "chip", "footprint", "cloudmask", "pansharpen", "orthophoto"},
                                    {"tile", "frame", "strip", "patch"}};
    static const DomainVocab database{{"catalog", "archive", "granule", "metadata", "provenance", "checksum"},
                                      {"record", "table", "collection", "bucket"}};
    static const DomainVocab dataops{{"resample", "reproject", "merge", "interpolate", "rescale", "mosaic"},
                                     {"array", "stack", "cube", "series"}};
    static const DomainVocab map{{"basemap", "legend", "viewport", "bookmark", "symbology", "graticule"},
                                 {"panel", "canvas", "widget", "inset"}};
    switch (d) {
        case Domain::agriculture: return agriculture;
        case Domain::climate: return climate;
        case Domain::urban: return urban;
        case Domain::forestry: return forestry;
        case Domain::vision: return vision;
        case Domain::database: return database;
        case Domain::dataops: return dataops;
        case Domain::map: return map;
    }
    return database;
}

constexpr std::array<const char*, 6> kVerbs{"compute", "export", "summarize", "validate", "index", "compare"};

// {s} subject, {n} noun. Each renders to roughly a dozen tokens.
constexpr std::array<const char*, 6> kDescriptions{
    "Compute {s} summary statistics for the selected {n} within a bounding window.",
    "Export the current {s} table for one {n} as a compact tabular report.",
    "Summarize recent {s} records attached to the chosen {n} in plain text.",
    "Validate stored {s} attributes of a {n} against the reference schema.",
    "Index {s} entries for a {n} so later lookups return faster results.",
    "Compare {s} values between two {n} identifiers and list the differences.",
};

// Second sentence, picked by position. Sized so a domain's toolkit costs
// about 2.1k schema tokens.
constexpr std::array<const char*, 6> kNotes{
    "Returns a status object.",     "Output is plain JSON text.", "Does not modify stored data.",
    "Safe to call repeatedly.",     "Results are cached per session.", "Runs on the local catalog.",
};

struct ParamPool {
    const char* name;
    const char* type;
};

constexpr std::array<ParamPool, 8> kParams{{{"window", "string"},
                                            {"scale", "number"},
                                            {"label", "string"},
                                            {"limit", "integer"},
                                            {"identifier", "string"},
                                            {"verbose", "boolean"},
                                            {"format", "string"},
                                            {"offset", "integer"}}};

std::string fill(std::string text, const std::string& s, const std::string& n) {
    for (auto pos = text.find("{s}"); pos != std::string::npos; pos = text.find("{s}")) text.replace(pos, 3, s);
    for (auto pos = text.find("{n}"); pos != std::string::npos; pos = text.find("{n}")) text.replace(pos, 3, n);
    return text;
}

}  // namespace

std::vector<ToolSpec> generate_filler_tools(Domain domain, int count, std::uint64_t seed) {
    std::vector<ToolSpec> out;
    if (count <= 0) return out;
    const DomainVocab& vocab = vocab_for(domain);
    std::mt19937_64 rng(seed ^ (static_cast<std::uint64_t>(domain) + 1) * 0x9E3779B97F4A7C15ULL);
    auto pick = [&rng](std::size_t n) { return static_cast<std::size_t>(rng() % n); };

    const std::string agent = agent_name(domain);
    const std::string prefix = to_string(domain);
    for (int i = 0; i < count; ++i) {
        const std::string subject = vocab.subjects[pick(vocab.subjects.size())];
        const std::string noun = vocab.nouns[pick(vocab.nouns.size())];
        const std::string verb = kVerbs[pick(kVerbs.size())];
        char idx[16];
        std::snprintf(idx, sizeof idx, "%03d", i);
        ToolSpec spec;
        spec.name = prefix + "_" + verb + "_" + subject + "_" + idx;
        spec.agent = agent;
        spec.description = fill(kDescriptions[pick(kDescriptions.size())], subject, noun) + " " +
                           kNotes[static_cast<std::size_t>(i) % kNotes.size()];
        const std::size_t first = pick(kParams.size());
        const std::size_t nparams = 2 + pick(2);
        for (std::size_t p = 0; p < nparams; ++p) {
            const auto& pp = kParams[(first + p * 3) % kParams.size()];
            spec.params.push_back({pp.name, pp.type, p + 1 < nparams});
        }
        out.push_back(std::move(spec));
    }
    return out;
}

void register_filler_tools(ToolRegistry& registry, Domain domain, int count, std::uint64_t seed) {
    for (auto& spec : generate_filler_tools(domain, count, seed)) {
        registry.register_tool(
            std::move(spec), [](const Json&, Workspace&) { return tool_ok(Json{{"status", "ok"}}); }, true);
    }
}

std::map<Domain, int> filler_counts_for_total(int total, const std::map<Domain, int>& real_counts) {
    std::map<Domain, int> out;
    if (real_counts.empty()) return out;
    int real = 0;
    for (const auto& [d, n] : real_counts) real += n;
    const int fill = std::max(0, total - real);
    const int n = static_cast<int>(real_counts.size());
    int i = 0;
    // Canonical domain order, not enum order, decides who gets the remainder.
    for (Domain d : kAllDomains) {
        if (!real_counts.count(d)) continue;
        out[d] = fill / n + (i < fill % n ? 1 : 0);
        ++i;
    }
    return out;
}

}  // namespace geosquad
