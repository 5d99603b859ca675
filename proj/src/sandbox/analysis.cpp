// SPDX-License-Identifier: Apache-2.0
#include "geosquad/sandbox/analysis.hpp"

#include <algorithm>
#include <set>

#include "geosquad/core/args.hpp"

namespace geosquad {

Comparator comparator_from_string(std::string_view s) {
    if (s == ">") return Comparator::gt;
    if (s == ">=" || s == "≥") return Comparator::ge;
    if (s == "<") return Comparator::lt;
    if (s == "<=" || s == "≤") return Comparator::le;
    throw GeoError("InvalidArguments", "unknown comparator '" + std::string(s) + "'");
}

bool compare(double value, Comparator op, double reference) {
    switch (op) {
        case Comparator::gt: return value > reference;
        case Comparator::ge: return value >= reference;
        case Comparator::lt: return value < reference;
        case Comparator::le: return value <= reference;
    }
    return false;
}

std::vector<std::string> dates_in_range(const std::vector<std::string>& covered, const DateRange& range) {
    auto covers = [&](const std::string& d) { return std::find(covered.begin(), covered.end(), d) != covered.end(); };
    // a bare year on a monthly product means the whole year
    DateRange r = range;
    if (!covered.empty() && covered.front().size() == 7 && r.first.size() == 4) r.first += "-01";
    if (!covered.empty() && covered.front().size() == 7 && r.last.size() == 4) r.last += "-12";
    if (!covers(r.first) || !covers(r.last)) {
        throw GeoError("DateOutOfRange", r.first + ".." + r.last + " is outside the covered dates");
    }
    std::vector<std::string> out;
    for (const auto& d : covered) {
        if (d >= r.first && d <= r.last) out.push_back(d);
    }
    return out;
}

std::vector<std::vector<Cell>> connected_components(const std::vector<Cell>& cells) {
    std::set<Cell> remaining(cells.begin(), cells.end());
    std::vector<std::vector<Cell>> out;
    while (!remaining.empty()) {
        std::vector<Cell> comp;
        std::vector<Cell> stack{*remaining.begin()};
        remaining.erase(remaining.begin());
        while (!stack.empty()) {
            Cell c = stack.back();
            stack.pop_back();
            comp.push_back(c);
            for (Cell n : {Cell{c.row - 1, c.col}, Cell{c.row + 1, c.col}, Cell{c.row, c.col - 1}, Cell{c.row, c.col + 1}}) {
                auto it = remaining.find(n);
                if (it != remaining.end()) {
                    remaining.erase(it);
                    stack.push_back(n);
                }
            }
        }
        std::sort(comp.begin(), comp.end());
        out.push_back(std::move(comp));
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() > b.size();
        return a.front() < b.front();
    });
    return out;
}

std::vector<std::vector<Cell>> low_value_clusters(const RasterProduct& raster, const std::vector<std::string>& dates,
                                                  const std::vector<Cell>& cells, double threshold, int min_size) {
    const auto low = threshold_cells(raster, dates, cells, Comparator::lt, threshold);
    auto comps = connected_components(low);
    comps.erase(std::remove_if(comps.begin(), comps.end(),
                               [&](const auto& c) { return static_cast<int>(c.size()) < min_size; }),
                comps.end());
    return comps;
}

std::vector<Cell> threshold_cells(const RasterProduct& raster, const std::vector<std::string>& dates,
                                  const std::vector<Cell>& cells, Comparator op, double value) {
    std::vector<Cell> out;
    for (const auto& c : cells) {
        if (compare(raster.mean_over(dates, c), op, value)) out.push_back(c);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Cell> reforestation_cells(const RasterProduct& canopy, const RasterProduct& loss,
                                      const std::vector<Cell>& cells, double canopy_below, bool require_loss) {
    if (canopy.product() != Product::canopy || loss.product() != Product::treeloss) {
        throw GeoError("WrongProduct", "reforestation needs canopy and treeloss");
    }
    std::vector<Cell> out;
    for (const auto& c : cells) {
        if (!(canopy.mean_over(canopy.dates(), c) < canopy_below)) continue;
        if (require_loss && loss.mean_over(loss.dates(), c) < 0.5) continue;
        out.push_back(c);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<DataPointKey> selection_keys(const Dataset& d) {
    std::vector<DataPointKey> out;
    out.reserve(d.cells.size() * d.dates.size());
    for (const auto& c : d.cells) {
        for (const auto& date : d.dates) out.push_back({d.product, c, date});
    }
    normalize_keys(out);
    return out;
}

const Dataset& load_product(Workspace& ws, Product product, std::string_view region, std::string_view date_range) {
    const Sandbox& sb = ws.sandbox();
    const RasterProduct& raster = sb.product(product);
    const auto& cells = sb.region_cells(region);
    auto range = parse_date_range(date_range);
    if (!range) throw GeoError("DateOutOfRange", "cannot read date range '" + std::string(date_range) + "'");
    Dataset d;
    d.product = product;
    d.region = sb.region(region)->name;
    d.dates = dates_in_range(raster.dates(), *range);
    d.cells = cells;
    ws.recorder().record(selection_keys(d));
    ws.put_dataset(std::move(d));
    return *ws.dataset(to_string(product));
}

Dataset filter_region(const Dataset& d, const Sandbox& sandbox, std::string_view region) {
    const auto& mask = sandbox.region_cells(region);
    Dataset out = d;
    out.region = sandbox.region(region)->name;
    out.cells.clear();
    std::set_intersection(d.cells.begin(), d.cells.end(), mask.begin(), mask.end(), std::back_inserter(out.cells));
    return out;
}

Dataset filter_dates(const Dataset& d, std::string_view date_range) {
    auto range = parse_date_range(date_range);
    if (!range) throw GeoError("DateOutOfRange", "cannot read date range '" + std::string(date_range) + "'");
    Dataset out = d;
    out.dates = dates_in_range(d.dates, *range);
    return out;
}

}  // namespace geosquad
