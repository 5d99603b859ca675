// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "geosquad/core/types.hpp"
#include "geosquad/sandbox/regions.hpp"

namespace geosquad {

struct ProductInfo {
    Product product;
    double min_value;
    double max_value;
    const char* units;
    const char* source;  // the real product this one stands in for
};

const ProductInfo& product_info(Product p);

// Covered dates: twelve 2024 months for the MODIS-like products, "2020" for
// the settlement and forest products, "2024" for the vision products.
std::vector<std::string> product_dates(Product p);

// A feature planted into a generated grid at a known location.
struct Motif {
    Product product;
    std::string kind;
    std::string region;
    std::vector<Cell> cells;
    double value = 0.0;  // representative planted value
};

void to_json(Json& j, const Motif& m);

// H x W grid per covered date, stored date-major.
class RasterProduct {
public:
    RasterProduct() = default;
    RasterProduct(Product product, int rows, int cols, std::vector<std::string> dates, double fill = 0.0);

    Product product() const { return product_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }
    const std::vector<std::string>& dates() const { return dates_; }
    // -1 when the date is not covered.
    int date_index(const std::string& date) const;

    double at(std::size_t date, Cell c) const { return values_[offset(date, c)]; }
    void set(std::size_t date, Cell c, double v) { values_[offset(date, c)] = v; }
    // Sets the value on every date.
    void set_all_dates(Cell c, double v);

    // Mean over the given dates; all of them must be covered.
    double mean_over(const std::vector<std::string>& dates, Cell c) const;

    const std::vector<double>& values() const { return values_; }
    bool in_bounds(Cell c) const { return c.row >= 0 && c.row < rows_ && c.col >= 0 && c.col < cols_; }

private:
    std::size_t offset(std::size_t date, Cell c) const {
        return (date * static_cast<std::size_t>(rows_) + static_cast<std::size_t>(c.row)) *
                   static_cast<std::size_t>(cols_) +
               static_cast<std::size_t>(c.col);
    }

    Product product_ = Product::ndvi;
    int rows_ = 0;
    int cols_ = 0;
    std::vector<std::string> dates_;
    std::vector<double> values_;
};

struct GeneratedProduct {
    RasterProduct raster;
    std::vector<Motif> motifs;
};

// Smooth seeded value noise plus planted motifs, one per region. A pure
// function of (product, seed, dimensions, regions).
GeneratedProduct generate_product(Product product, std::uint64_t seed, int rows, int cols,
                                  const std::vector<RegionMask>& regions);

}  // namespace geosquad
