// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "geosquad/core/validate.hpp"
#include "geosquad/sandbox/raster.hpp"
#include "geosquad/sandbox/regions.hpp"
#include "geosquad/sandbox/vision.hpp"

namespace geosquad {

struct SandboxConfig {
    std::uint64_t seed = 7;
    int rows = 64;
    int cols = 64;
    int scenes_per_region = 8;
    ConfusionModel vision;
};

// Immutable after construction; shared read-only by every task run.
class Sandbox {
public:
    static Sandbox generate(const SandboxConfig& config);

    // Hand-built fixture. Products that are not given are simply missing.
    Sandbox(int rows, int cols, std::vector<RegionMask> regions, std::map<Product, RasterProduct> products,
            std::vector<VisionAnnotation> scenes = {}, ConfusionModel vision = {}, std::uint64_t seed = 0);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::uint64_t seed() const { return seed_; }

    bool has_product(Product p) const { return products_.count(p) != 0; }
    // Throws MissingProduct.
    const RasterProduct& product(Product p) const;

    const std::vector<RegionMask>& regions() const { return regions_; }
    // Case-insensitive; nullptr when unknown.
    const RegionMask* region(std::string_view name) const;
    // Throws UnknownRegion.
    const std::vector<Cell>& region_cells(std::string_view name) const;

    const std::vector<VisionAnnotation>& scenes() const { return scenes_; }
    const VisionAnnotation* scene(std::string_view id) const;
    std::vector<const VisionAnnotation*> scenes_in(std::string_view region) const;
    const ConfusionModel& vision_model() const { return vision_; }

    const std::vector<Motif>& motifs() const { return motifs_; }
    std::vector<Motif> motifs_for(Product p, std::string_view region) const;

    GridBounds bounds() const;

    // Regions, motifs, scenes and seeds as JSON: the ground truth taskgen and
    // the evaluator read.
    Json fixture_metadata() const;
    // Hex digest over every grid value and the scene annotations.
    std::string fixture_hash() const;
    std::string grid_csv(Product p, const std::string& date) const;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::uint64_t seed_ = 0;
    std::vector<RegionMask> regions_;
    std::map<std::string, std::vector<Cell>> region_cells_;
    std::map<Product, RasterProduct> products_;
    std::vector<Motif> motifs_;
    std::vector<VisionAnnotation> scenes_;
    ConfusionModel vision_;
};

}  // namespace geosquad
