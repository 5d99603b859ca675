// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "geosquad/core/types.hpp"
#include "geosquad/sandbox/raster.hpp"
#include "geosquad/sandbox/workspace.hpp"

namespace geosquad {

enum class Comparator { gt, ge, lt, le };
// Accepts ">", ">=", "<", "<=" and the unicode forms.
Comparator comparator_from_string(std::string_view s);
bool compare(double value, Comparator op, double reference);

// Covered dates inside [range.first, range.last]. Throws DateOutOfRange when
// either end is not covered.
std::vector<std::string> dates_in_range(const std::vector<std::string>& covered, const DateRange& range);

// 4-connected components ordered by size descending, then by the
// northwest-most cell of each component.
std::vector<std::vector<Cell>> connected_components(const std::vector<Cell>& cells);

// Components of cells whose mean over `dates` is below `threshold`, keeping
// those with at least `min_size` cells.
std::vector<std::vector<Cell>> low_value_clusters(const RasterProduct& raster, const std::vector<std::string>& dates,
                                                  const std::vector<Cell>& cells, double threshold, int min_size);

std::vector<Cell> threshold_cells(const RasterProduct& raster, const std::vector<std::string>& dates,
                                  const std::vector<Cell>& cells, Comparator op, double value);

std::vector<Cell> reforestation_cells(const RasterProduct& canopy, const RasterProduct& loss,
                                      const std::vector<Cell>& cells, double canopy_below, bool require_loss);

// Every (product, cell, date) a dataset selects.
std::vector<DataPointKey> selection_keys(const Dataset& d);

// Loads a product selection into the workspace and records its datapoints.
// Throws MissingProduct, UnknownRegion, DateOutOfRange.
const Dataset& load_product(Workspace& ws, Product product, std::string_view region, std::string_view date_range);

// Intersection with a region mask; an empty result is not an error.
Dataset filter_region(const Dataset& d, const Sandbox& sandbox, std::string_view region);
Dataset filter_dates(const Dataset& d, std::string_view date_range);

}  // namespace geosquad
