// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "geosquad/core/types.hpp"

namespace geosquad {

struct Rect {
    int row = 0;
    int col = 0;
    int rows = 0;
    int cols = 0;
};

// Named union of rectangles on the grid. Row 0 is the north edge.
struct RegionMask {
    std::string name;
    std::vector<Rect> rects;

    // Sorted, deduplicated cells clipped to the grid.
    std::vector<Cell> cells(int grid_rows, int grid_cols) const;
};

// The eight named localities, laid out for a 64x64 grid and scaled
// proportionally to other sizes.
std::vector<RegionMask> default_regions(int grid_rows, int grid_cols);

void to_json(Json& j, const RegionMask& r);
void from_json(const Json& j, RegionMask& r);

}  // namespace geosquad
