// SPDX-License-Identifier: Apache-2.0
#include "geosquad/core/args.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <regex>

namespace geosquad {

namespace {

std::string trim_lower(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    std::string out(s.substr(b, e - b));
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::optional<std::string> canonical_date(std::string_view s) {
    static const std::regex month_re(R"(^(\d{4})-(\d{1,2})(?:-\d{1,2})?$)");
    static const std::regex year_re(R"(^(\d{4})$)");
    const std::string str = trim_lower(s);
    std::smatch m;
    if (std::regex_match(str, m, month_re)) {
        const int month = std::stoi(m[2].str());
        if (month < 1 || month > 12) return std::nullopt;
        char buf[8];
        std::snprintf(buf, sizeof buf, "%02d", month);
        return m[1].str() + "-" + buf;
    }
    if (std::regex_match(str, m, year_re)) return m[1].str();
    return std::nullopt;
}

std::optional<double> as_number(const std::string& s) {
    if (s.empty()) return std::nullopt;
    double v = 0;
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    if (*begin == '+') ++begin;
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr != end) return std::nullopt;
    return v;
}

bool is_monthly(const std::string& product) {
    return product == "ndvi" || product == "ref_b2" || product == "lst" || product == "aod550";
}

}  // namespace

std::optional<DateRange> parse_date_range(std::string_view text) {
    const std::string s = trim_lower(text);
    if (s.empty()) return std::nullopt;
    for (std::string_view sep : {"..", " to ", "/"}) {
        const auto pos = s.find(sep);
        if (pos == std::string::npos) continue;
        auto a = canonical_date(std::string_view(s).substr(0, pos));
        auto b = canonical_date(std::string_view(s).substr(pos + sep.size()));
        if (!a || !b || a->size() != b->size() || *b < *a) return std::nullopt;
        return DateRange{*a, *b};
    }
    auto d = canonical_date(s);
    if (!d) return std::nullopt;
    return DateRange{*d, *d};
}

std::optional<std::string> canonical_date_range(std::string_view text) {
    auto r = parse_date_range(text);
    if (!r) return std::nullopt;
    if (r->first == r->last) return r->first;
    return r->first + ".." + r->last;
}

Json normalize_args(const Json& args) {
    if (!args.is_object()) return args;
    Json out = Json::object();  // std::map backed: keys come out sorted
    for (const auto& [key, value] : args.items()) {
        const std::string k = trim_lower(key);
        if (value.is_string()) {
            std::string v = trim_lower(value.get<std::string>());
            if (k == "date_range" || k == "date") {
                if (auto c = canonical_date_range(v)) v = *c;
                out[k] = v;
            } else if (v == "true" || v == "false") {
                out[k] = (v == "true");
            } else if (auto n = as_number(v)) {
                out[k] = *n;
            } else {
                out[k] = v;
            }
        } else if (value.is_number()) {
            out[k] = value.get<double>();
        } else {
            out[k] = value;
        }
    }
    if (out.contains("product") && out.contains("date_range") && out["product"].is_string() &&
        out["date_range"].is_string()) {
        const std::string dr = out["date_range"].get<std::string>();
        if (dr.size() == 4 && is_monthly(out["product"].get<std::string>())) {
            out["date_range"] = dr + "-01.." + dr + "-12";
        }
    }
    return out;
}

bool args_equal(const Json& a, const Json& b) {
    if (a.is_number() && b.is_number()) {
        const double x = a.get<double>();
        const double y = b.get<double>();
        if (x == y) return true;
        return std::fabs(x - y) <= 1e-6 * std::max(std::fabs(x), std::fabs(y));
    }
    if (a.type() != b.type()) return false;
    if (a.is_object()) {
        if (a.size() != b.size()) return false;
        for (auto ia = a.begin(), ib = b.begin(); ia != a.end(); ++ia, ++ib) {
            if (ia.key() != ib.key() || !args_equal(ia.value(), ib.value())) return false;
        }
        return true;
    }
    if (a.is_array()) {
        if (a.size() != b.size()) return false;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (!args_equal(a[i], b[i])) return false;
        }
        return true;
    }
    return a == b;
}

}  // namespace geosquad
