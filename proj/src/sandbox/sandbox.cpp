// SPDX-License-Identifier: Apache-2.0
#include "geosquad/sandbox/sandbox.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstring>

#include "geosquad/core/hash.hpp"
#include "geosquad/core/json_io.hpp"

namespace geosquad {

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string shortest(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

}  // namespace

Sandbox Sandbox::generate(const SandboxConfig& config) {
    auto regions = default_regions(config.rows, config.cols);
    std::map<Product, RasterProduct> products;
    std::vector<Motif> motifs;
    for (Product p : kRasterProducts) {
        auto g = generate_product(p, config.seed, config.rows, config.cols, regions);
        products.emplace(p, std::move(g.raster));
        motifs.insert(motifs.end(), g.motifs.begin(), g.motifs.end());
    }
    auto scenes = generate_scenes(config.seed, regions, config.rows, config.cols, config.scenes_per_region);
    Sandbox sb(config.rows, config.cols, std::move(regions), std::move(products), std::move(scenes), config.vision,
               config.seed);
    sb.motifs_ = std::move(motifs);
    return sb;
}

Sandbox::Sandbox(int rows, int cols, std::vector<RegionMask> regions, std::map<Product, RasterProduct> products,
                 std::vector<VisionAnnotation> scenes, ConfusionModel vision, std::uint64_t seed)
    : rows_(rows),
      cols_(cols),
      seed_(seed),
      regions_(std::move(regions)),
      products_(std::move(products)),
      scenes_(std::move(scenes)),
      vision_(std::move(vision)) {
    if (rows_ <= 0 || cols_ <= 0) throw GeoError("InvalidConfig", "grid must be non-empty");
    for (auto& r : regions_) {
        r.name = lower(r.name);
        region_cells_[r.name] = r.cells(rows_, cols_);
    }
    for (const auto& [p, raster] : products_) {
        if (raster.rows() != rows_ || raster.cols() != cols_) {
            throw GeoError("InvalidConfig", to_string(p) + " grid does not match sandbox dimensions");
        }
    }
}

const RasterProduct& Sandbox::product(Product p) const {
    auto it = products_.find(p);
    if (it == products_.end()) throw GeoError("MissingProduct", to_string(p) + " is not in the sandbox");
    return it->second;
}

const RegionMask* Sandbox::region(std::string_view name) const {
    const std::string key = lower(name);
    for (const auto& r : regions_) {
        if (r.name == key) return &r;
    }
    return nullptr;
}

const std::vector<Cell>& Sandbox::region_cells(std::string_view name) const {
    auto it = region_cells_.find(lower(name));
    if (it == region_cells_.end()) throw GeoError("UnknownRegion", "unknown region '" + std::string(name) + "'");
    return it->second;
}

const VisionAnnotation* Sandbox::scene(std::string_view id) const {
    const std::string key = lower(id);
    for (const auto& s : scenes_) {
        if (s.scene_id == key) return &s;
    }
    return nullptr;
}

std::vector<const VisionAnnotation*> Sandbox::scenes_in(std::string_view region) const {
    const std::string key = lower(region);
    std::vector<const VisionAnnotation*> out;
    for (const auto& s : scenes_) {
        if (s.region == key) out.push_back(&s);
    }
    return out;
}

std::vector<Motif> Sandbox::motifs_for(Product p, std::string_view region) const {
    const std::string key = lower(region);
    std::vector<Motif> out;
    for (const auto& m : motifs_) {
        if (m.product == p && m.region == key) out.push_back(m);
    }
    return out;
}

GridBounds Sandbox::bounds() const {
    GridBounds b;
    b.rows = rows_;
    b.cols = cols_;
    for (const auto& [p, raster] : products_) b.coverage[p] = raster.dates();
    if (!scenes_.empty()) {
        b.coverage[Product::detection] = product_dates(Product::detection);
        b.coverage[Product::lcc] = product_dates(Product::lcc);
    }
    return b;
}

Json Sandbox::fixture_metadata() const {
    Json products = Json::object();
    for (const auto& [p, raster] : products_) {
        const auto& info = product_info(p);
        products[to_string(p)] = Json{{"dates", raster.dates()}, {"units", info.units}, {"source", info.source}};
    }
    return Json{{"seed", seed_},
                {"rows", rows_},
                {"cols", cols_},
                {"regions", regions_},
                {"products", products},
                {"motifs", motifs_},
                {"scenes", scenes_},
                {"vision_model", vision_},
                {"fixture_hash", fixture_hash()}};
}

std::string Sandbox::fixture_hash() const {
    std::uint64_t h = fnv1a64("geosquad-fixture");
    for (const auto& [p, raster] : products_) {
        h = fnv1a64(to_string(p), h);
        for (double v : raster.values()) {
            // hash the shortest round-trip text so the digest is portable
            h = fnv1a64(shortest(v), h);
        }
    }
    for (const auto& s : scenes_) h = fnv1a64(Json(s).dump(), h);
    return hex64(h);
}

std::string Sandbox::grid_csv(Product p, const std::string& date) const {
    const auto& raster = product(p);
    const int d = raster.date_index(date);
    if (d < 0) throw GeoError("DateOutOfRange", date + " not covered by " + to_string(p));
    std::string out;
    for (int r = 0; r < rows_; ++r) {
        for (int c = 0; c < cols_; ++c) {
            if (c) out += ',';
            out += shortest(raster.at(static_cast<std::size_t>(d), {r, c}));
        }
        out += '\n';
    }
    return out;
}

}  // namespace geosquad
