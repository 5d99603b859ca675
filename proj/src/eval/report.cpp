// SPDX-License-Identifier: Apache-2.0
#include "geosquad/eval/report.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>

namespace geosquad {

namespace {

constexpr Product kMetricOrder[] = {Product::ndvi,    Product::ref_b2,     Product::aod550, Product::lst,
                                    Product::built_s, Product::population, Product::treeloss, Product::canopy};

// Shortest round-trippable text, so a re-parse is exact.
std::string num(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::string opt_num(const std::optional<double>& v) { return v ? num(*v) : "n/a"; }

std::string fixed2(const std::optional<double>& v) {
    if (!v) return "n/a";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", *v);
    return buf;
}

std::optional<double> parse_opt(const std::string& s) {
    if (s == "n/a" || s.empty()) return std::nullopt;
    double v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) throw GeoError("ParseError", "bad number '" + s + "'");
    return v;
}

std::optional<double> eps_of(const BenchmarkReport& r, Product p) {
    auto it = r.epsilon.find(p);
    if (it == r.epsilon.end()) return std::nullopt;
    return it->second;
}

}  // namespace

BenchmarkReport aggregate(const std::vector<TaskScore>& scores, Strategy strategy, bool ts, bool wm) {
    if (scores.empty()) throw GeoError("InvalidValue", "aggregate needs at least one score");
    BenchmarkReport r;
    r.strategy = strategy;
    r.ts = ts;
    r.wm = wm;
    r.tasks = static_cast<long>(scores.size());
    double crct = 0.0;
    double tokens = 0.0;
    std::map<Product, std::pair<double, long>> eps;
    for (const auto& s : scores) {
        crct += s.correctness;
        tokens += static_cast<double>(s.tokens);
        for (const auto& [p, e] : s.epsilon) {
            eps[p].first += e;
            ++eps[p].second;
        }
        if (s.terminal == Terminal::completed) ++r.completed;
        if (s.terminal == Terminal::context_overflow) ++r.context_overflow;
    }
    const double n = static_cast<double>(scores.size());
    r.correctness_rate = 100.0 * crct / n;
    r.avg_tokens_k = tokens / n / 1000.0;
    for (const auto& [p, acc] : eps) r.epsilon[p] = acc.first / static_cast<double>(acc.second);
    const auto v = vision_scores(scores);
    r.lcc_acc = v.lcc_accuracy;
    r.det_f1 = v.det_f1;
    return r;
}

const std::vector<std::string>& report_columns() {
    static const std::vector<std::string> cols = {
        "strategy",     "ts",         "wm",          "tasks",       "correctness_rate", "avg_tokens_k",
        "eps_ndvi",     "eps_ref_b2", "eps_aod550",  "eps_lst",     "eps_built_s",      "eps_population",
        "eps_treeloss", "eps_canopy", "lcc_acc",     "det_f1",      "completed",        "context_overflow"};
    return cols;
}

std::string render_csv(const std::vector<BenchmarkReport>& reports) {
    std::ostringstream out;
    const auto& cols = report_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    out << '\n';
    for (const auto& r : reports) {
        out << to_string(r.strategy) << ',' << (r.ts ? 1 : 0) << ',' << (r.wm ? 1 : 0) << ',' << r.tasks << ','
            << num(r.correctness_rate) << ',' << num(r.avg_tokens_k);
        for (Product p : kMetricOrder) out << ',' << opt_num(eps_of(r, p));
        out << ',' << opt_num(r.lcc_acc) << ',' << opt_num(r.det_f1) << ',' << r.completed << ','
            << r.context_overflow << '\n';
    }
    return out.str();
}

std::string render_markdown(const std::vector<BenchmarkReport>& reports) {
    std::vector<std::string> head = {"Prompting", "TS", "WM", "Tasks", "Crct. Rt%", "Avg Tokens (k)"};
    for (Product p : kMetricOrder) head.push_back("eps " + to_string(p) + "%");
    for (const char* h : {"LCC acc%", "Det F1%", "Completed", "Overflow"}) head.emplace_back(h);

    std::vector<std::vector<std::string>> rows;
    for (const auto& r : reports) {
        std::vector<std::string> row = {to_string(r.strategy), r.ts ? "yes" : "no", r.wm ? "yes" : "no",
                                        std::to_string(r.tasks), fixed2(r.correctness_rate),
                                        fixed2(r.avg_tokens_k)};
        for (Product p : kMetricOrder) row.push_back(fixed2(eps_of(r, p)));
        row.push_back(fixed2(r.lcc_acc));
        row.push_back(fixed2(r.det_f1));
        row.push_back(std::to_string(r.completed));
        row.push_back(std::to_string(r.context_overflow));
        rows.push_back(std::move(row));
    }
    std::vector<std::size_t> width(head.size());
    for (std::size_t c = 0; c < head.size(); ++c) {
        width[c] = head[c].size();
        for (const auto& row : rows) width[c] = std::max(width[c], row[c].size());
    }
    auto line = [&](const std::vector<std::string>& cells) {
        std::string s = "|";
        for (std::size_t c = 0; c < cells.size(); ++c) {
            s += ' ' + cells[c] + std::string(width[c] - cells[c].size(), ' ') + " |";
        }
        return s + '\n';
    };
    std::string out = line(head);
    out += '|';
    for (std::size_t c = 0; c < head.size(); ++c) out += std::string(width[c] + 2, '-') + '|';
    out += '\n';
    for (const auto& row : rows) out += line(row);
    return out;
}

std::vector<BenchmarkReport> parse_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw GeoError("ParseError", "empty report csv");
    {
        std::string expected;
        for (const auto& c : report_columns()) expected += (expected.empty() ? "" : ",") + c;
        if (line != expected) throw GeoError("ParseError", "unexpected report header");
    }
    std::vector<BenchmarkReport> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) f.push_back(cell);
        if (f.size() != report_columns().size()) throw GeoError("ParseError", "bad report row '" + line + "'");
        BenchmarkReport r;
        r.strategy = strategy_from_string(f[0]);
        r.ts = f[1] == "1";
        r.wm = f[2] == "1";
        r.tasks = std::stol(f[3]);
        r.correctness_rate = parse_opt(f[4]).value_or(0.0);
        r.avg_tokens_k = parse_opt(f[5]).value_or(0.0);
        std::size_t i = 6;
        for (Product p : kMetricOrder) {
            if (auto v = parse_opt(f[i++])) r.epsilon[p] = *v;
        }
        r.lcc_acc = parse_opt(f[14]);
        r.det_f1 = parse_opt(f[15]);
        r.completed = std::stol(f[16]);
        r.context_overflow = std::stol(f[17]);
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace geosquad
