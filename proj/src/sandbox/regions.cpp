// SPDX-License-Identifier: Apache-2.0
#include "geosquad/sandbox/regions.hpp"

#include <algorithm>

namespace geosquad {

std::vector<Cell> RegionMask::cells(int grid_rows, int grid_cols) const {
    std::vector<Cell> out;
    for (const auto& r : rects) {
        for (int i = std::max(0, r.row); i < std::min(grid_rows, r.row + r.rows); ++i) {
            for (int j = std::max(0, r.col); j < std::min(grid_cols, r.col + r.cols); ++j) out.push_back({i, j});
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<RegionMask> default_regions(int grid_rows, int grid_cols) {
    const std::vector<RegionMask> base{
        {"bundaberg", {{4, 44, 6, 8}, {10, 48, 3, 4}}},
        {"gympie", {{16, 40, 6, 6}}},
        {"brisbane", {{24, 44, 8, 8}, {32, 48, 2, 4}}},
        {"ipswich", {{26, 34, 6, 7}}},
        {"sydney", {{40, 38, 7, 9}}},
        {"melbourne", {{54, 14, 6, 10}, {52, 18, 2, 4}}},
        {"northreach", {{2, 8, 8, 10}}},
        {"westvale", {{30, 6, 9, 8}}},
    };
    if (grid_rows == 64 && grid_cols == 64) return base;
    auto scale = [](int v, int dim) { return v * dim / 64; };
    std::vector<RegionMask> out;
    for (const auto& r : base) {
        RegionMask m{r.name, {}};
        for (const auto& rect : r.rects) {
            m.rects.push_back({scale(rect.row, grid_rows), scale(rect.col, grid_cols),
                               std::max(1, scale(rect.rows, grid_rows)), std::max(1, scale(rect.cols, grid_cols))});
        }
        out.push_back(std::move(m));
    }
    return out;
}

void to_json(Json& j, const RegionMask& r) {
    Json rects = Json::array();
    for (const auto& rect : r.rects) rects.push_back(Json::array({rect.row, rect.col, rect.rows, rect.cols}));
    j = Json{{"name", r.name}, {"rects", rects}};
}

void from_json(const Json& j, RegionMask& r) {
    r.name = j.at("name").get<std::string>();
    r.rects.clear();
    for (const auto& rect : j.at("rects")) {
        r.rects.push_back({rect.at(0).get<int>(), rect.at(1).get<int>(), rect.at(2).get<int>(), rect.at(3).get<int>()});
    }
}

}  // namespace geosquad
