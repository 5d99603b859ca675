// SPDX-License-Identifier: Apache-2.0
#include "geosquad/sandbox/raster.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "geosquad/core/hash.hpp"
#include "geosquad/core/json_io.hpp"

namespace geosquad {

namespace {

constexpr int kLattice = 8;

double smooth(double t) { return t * t * (3.0 - 2.0 * t); }

// Bilinear value noise in [0, 1) over a lattice with kLattice-cell spacing.
double value_noise(std::uint64_t seed, std::uint64_t salt, int row, int col) {
    const int i = row / kLattice;
    const int j = col / kLattice;
    const double fy = smooth(static_cast<double>(row % kLattice) / kLattice);
    const double fx = smooth(static_cast<double>(col % kLattice) / kLattice);
    auto lattice = [&](int a, int b) {
        return unit_interval(mix({seed, salt, static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(b)}));
    };
    const double top = lattice(i, j) * (1 - fx) + lattice(i, j + 1) * fx;
    const double bottom = lattice(i + 1, j) * (1 - fx) + lattice(i + 1, j + 1) * fx;
    return top * (1 - fy) + bottom * fy;
}

double jitter(std::uint64_t seed, std::uint64_t salt, std::size_t date, Cell c) {
    return unit_interval(mix({seed, salt, date, static_cast<std::uint64_t>(c.row), static_cast<std::uint64_t>(c.col)}));
}

// Connected patch of `size` cells grown inside the region.
std::vector<Cell> grow_patch(const std::vector<Cell>& region_cells, std::mt19937_64& rng, int size,
                             const std::set<Cell>& avoid) {
    std::set<Cell> allowed(region_cells.begin(), region_cells.end());
    for (const auto& c : avoid) allowed.erase(c);
    if (allowed.empty()) return {};
    std::vector<Cell> candidates(allowed.begin(), allowed.end());
    std::set<Cell> patch{candidates[rng() % candidates.size()]};
    while (static_cast<int>(patch.size()) < size) {
        std::vector<Cell> frontier;
        for (const auto& c : patch) {
            for (Cell n : {Cell{c.row - 1, c.col}, Cell{c.row + 1, c.col}, Cell{c.row, c.col - 1}, Cell{c.row, c.col + 1}}) {
                if (allowed.count(n) && !patch.count(n)) frontier.push_back(n);
            }
        }
        if (frontier.empty()) break;
        std::sort(frontier.begin(), frontier.end());
        frontier.erase(std::unique(frontier.begin(), frontier.end()), frontier.end());
        patch.insert(frontier[rng() % frontier.size()]);
    }
    return {patch.begin(), patch.end()};
}

// Patches for one motif family, one per region, with a seed shared by every
// product that must agree on them (canopy and treeloss).
std::vector<Motif> plant(Product product, const std::string& kind, std::uint64_t seed, std::uint64_t salt, int rows,
                         int cols, const std::vector<RegionMask>& regions, double value,
                         const std::vector<Motif>& avoid = {}) {
    std::vector<Motif> out;
    for (std::size_t r = 0; r < regions.size(); ++r) {
        std::mt19937_64 rng(mix({seed, salt, r}));
        const auto cells = regions[r].cells(rows, cols);
        std::set<Cell> blocked;
        for (const auto& m : avoid) {
            if (m.region != regions[r].name) continue;
            for (const auto& c : m.cells) {
                // keep a one-cell moat so planted patches never merge
                for (int dr = -1; dr <= 1; ++dr) {
                    for (int dc = -1; dc <= 1; ++dc) blocked.insert({c.row + dr, c.col + dc});
                }
            }
        }
        const int size = 3 + static_cast<int>(rng() % 4);
        auto patch = grow_patch(cells, rng, size, blocked);
        if (patch.empty()) continue;
        out.push_back({product, kind, regions[r].name, std::move(patch), value});
    }
    return out;
}

constexpr std::uint64_t kScarSalt = 0x5CA2;
constexpr std::uint64_t kClearingSalt = 0xC1EA;

}  // namespace

const ProductInfo& product_info(Product p) {
    static const ProductInfo infos[] = {
        {Product::ndvi, -0.2, 1.0, "dimensionless", "MOD13A3"},
        {Product::ref_b2, 0.0, 1.0, "reflectance", "MOD09GA"},
        {Product::lst, 250.0, 340.0, "kelvin", "MYD11A2"},
        {Product::aod550, 0.0, 5.0, "dimensionless", "MCD19A2"},
        {Product::built_s, 0.0, 1.0e6, "m2 per cell", "GHS-BUILT-S"},
        {Product::population, 0.0, 1.0e5, "persons per cell", "GHS-POP"},
        {Product::canopy, 0.0, 100.0, "percent", "GFC tree cover"},
        {Product::treeloss, 0.0, 1.0, "binary", "GFC loss"},
        {Product::detection, 0.0, 0.0, "boxes", "xView/FAIR1M"},
        {Product::lcc, 0.0, 0.0, "class", "fMoW/BigEarthNet"},
    };
    for (const auto& i : infos) {
        if (i.product == p) return i;
    }
    return infos[0];
}

std::vector<std::string> product_dates(Product p) {
    switch (p) {
        case Product::ndvi:
        case Product::ref_b2:
        case Product::lst:
        case Product::aod550: {
            std::vector<std::string> out;
            for (int m = 1; m <= 12; ++m) {
                char buf[8];
                std::snprintf(buf, sizeof buf, "2024-%02d", m);
                out.emplace_back(buf);
            }
            return out;
        }
        case Product::built_s:
        case Product::population:
        case Product::canopy:
        case Product::treeloss: return {"2020"};
        case Product::detection:
        case Product::lcc: return {"2024"};
    }
    return {};
}

void to_json(Json& j, const Motif& m) {
    j = Json{{"product", to_string(m.product)},
             {"kind", m.kind},
             {"region", m.region},
             {"cells", m.cells},
             {"value", m.value}};
}

RasterProduct::RasterProduct(Product product, int rows, int cols, std::vector<std::string> dates, double fill)
    : product_(product), rows_(rows), cols_(cols), dates_(std::move(dates)) {
    values_.assign(dates_.size() * static_cast<std::size_t>(rows_) * static_cast<std::size_t>(cols_), fill);
}

int RasterProduct::date_index(const std::string& date) const {
    auto it = std::find(dates_.begin(), dates_.end(), date);
    return it == dates_.end() ? -1 : static_cast<int>(it - dates_.begin());
}

void RasterProduct::set_all_dates(Cell c, double v) {
    for (std::size_t d = 0; d < dates_.size(); ++d) set(d, c, v);
}

double RasterProduct::mean_over(const std::vector<std::string>& dates, Cell c) const {
    if (dates.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& d : dates) {
        const int idx = date_index(d);
        if (idx < 0) throw GeoError("DateOutOfRange", d + " not covered by " + to_string(product_));
        sum += at(static_cast<std::size_t>(idx), c);
    }
    return sum / static_cast<double>(dates.size());
}

GeneratedProduct generate_product(Product product, std::uint64_t seed, int rows, int cols,
                                  const std::vector<RegionMask>& regions) {
    GeneratedProduct out;
    out.raster = RasterProduct(product, rows, cols, product_dates(product));
    RasterProduct& g = out.raster;
    const auto salt = static_cast<std::uint64_t>(product) + 1;
    const std::size_t ndates = g.dates().size();
    constexpr double kTwoPi = 2.0 * std::numbers::pi;

    for (std::size_t d = 0; d < ndates; ++d) {
        const double month = static_cast<double>(d);
        for (int r = 0; r < rows; ++r) {
            for (int c = 0; c < cols; ++c) {
                const double n = value_noise(seed, salt, r, c);
                const double j = jitter(seed, salt, d, {r, c});
                double v = 0.0;
                switch (product) {
                    case Product::ndvi: v = 0.45 + 0.40 * n + 0.04 * std::sin(kTwoPi * month / 12.0) + 0.02 * (j - 0.5); break;
                    case Product::ref_b2: v = 0.04 + 0.16 * n + 0.01 * j; break;
                    case Product::lst: v = 288.0 + 10.0 * n + 3.0 * std::cos(kTwoPi * month / 12.0) + 0.5 * j; break;
                    case Product::aod550: v = 0.05 + 0.25 * n + 0.02 * j; break;
                    case Product::built_s: v = 40000.0 * n * n; break;
                    case Product::population: v = std::floor(3000.0 * n * n); break;
                    case Product::canopy: v = 45.0 + 50.0 * n; break;
                    case Product::treeloss: v = 0.0; break;
                    case Product::detection:
                    case Product::lcc: break;
                }
                g.set(d, {r, c}, v);
            }
        }
    }

    auto paint = [&](const std::vector<Motif>& motifs, double base, double spread, std::uint64_t motif_salt) {
        for (const auto& m : motifs) {
            for (const auto& c : m.cells) {
                for (std::size_t d = 0; d < ndates; ++d) g.set(d, c, base + spread * jitter(seed, motif_salt, d, c));
            }
        }
    };

    switch (product) {
        case Product::ndvi: {
            out.motifs = plant(product, "low_ndvi_patch", seed, salt * 31, rows, cols, regions, 0.10);
            paint(out.motifs, 0.08, 0.04, salt * 37);
            break;
        }
        case Product::ref_b2: {
            out.motifs = plant(product, "reflectance_anomaly", seed, salt * 31, rows, cols, regions, 0.6);
            paint(out.motifs, 0.55, 0.10, salt * 37);
            break;
        }
        case Product::lst: {
            out.motifs = plant(product, "hot_patch", seed, salt * 31, rows, cols, regions, 312.5);
            paint(out.motifs, 311.0, 3.0, salt * 37);
            break;
        }
        case Product::aod550: {
            out.motifs = plant(product, "aerosol_plume", seed, salt * 31, rows, cols, regions, 0.85);
            paint(out.motifs, 0.70, 0.30, salt * 37);
            break;
        }
        case Product::built_s: {
            out.motifs = plant(product, "dense_builtup", seed, salt * 31, rows, cols, regions, 200000.0);
            paint(out.motifs, 150000.0, 100000.0, salt * 37);
            break;
        }
        case Product::population: {
            out.motifs = plant(product, "population_hotspot", seed, salt * 31, rows, cols, regions, 16000.0);
            for (const auto& m : out.motifs) {
                for (const auto& c : m.cells) g.set_all_dates(c, std::floor(12000.0 + 8000.0 * jitter(seed, salt * 37, 0, c)));
            }
            break;
        }
        case Product::canopy:
        case Product::treeloss: {
            auto scars = plant(product, "deforestation_scar", seed, kScarSalt, rows, cols, regions, 1.0);
            auto clearings = plant(product, "natural_clearing", seed, kClearingSalt, rows, cols, regions, 0.0, scars);
            if (product == Product::canopy) {
                for (auto* family : {&scars, &clearings}) {
                    for (auto& m : *family) {
                        m.value = 10.0;
                        for (const auto& c : m.cells) g.set_all_dates(c, 5.0 + 10.0 * jitter(seed, kScarSalt, 0, c));
                    }
                }
                out.motifs = scars;
                out.motifs.insert(out.motifs.end(), clearings.begin(), clearings.end());
            } else {
                for (const auto& m : scars) {
                    for (const auto& c : m.cells) g.set_all_dates(c, 1.0);
                }
                out.motifs = scars;
            }
            break;
        }
        case Product::detection:
        case Product::lcc: break;
    }
    return out;
}

}  // namespace geosquad
