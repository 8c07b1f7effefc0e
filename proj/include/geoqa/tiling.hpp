#pragma once

/// @file tiling.hpp
/// Image footprint grids and split assignment. Tiles are square, grid
/// aligned within one source extent, and partial edge tiles are dropped.
/// Splits are assigned to whole sources so tiles of one acquisition never
/// straddle splits.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "geoqa/errors.hpp"
#include "geoqa/geometry.hpp"
#include "geoqa/profile.hpp"
#include "geoqa/rng.hpp"

namespace geoqa {

struct TileFootprint {
    std::string id;  ///< "{source_id}_{row}_{col}"
    std::string source_id;
    std::uint32_t row = 0;
    std::uint32_t col = 0;
    Rect rect;
    std::uint32_t pixel_size = 0;  ///< informational
    double resolution = 0.0;       ///< m/px, informational
    Split split = Split::unassigned;
};

/// Row-major grid of square tiles of side tile_pixels * resolution meters,
/// anchored at the source minimum corner. Returns an empty list when the
/// source is smaller than one tile (callers may warn).
inline std::vector<TileFootprint> tile_grid(const Rect& source_bounds, std::uint32_t tile_pixels,
                                            double resolution, const std::string& source_id) {
    if (!source_bounds.valid() || !(source_bounds.area() > 0.0))
        throw ValidationError("tile_grid: source bounds must have positive area");
    if (tile_pixels < 1 || !(resolution > 0.0))
        throw ValidationError("tile_grid: tile_pixels and resolution must be positive");
    const double side = double(tile_pixels) * resolution;
    // The epsilon admits sides that divide the extent exactly up to float
    // rounding without ever inventing a tile from a shortfall.
    const auto whole = [side](double extent) {
        return std::uint64_t(std::floor(extent / side + 1e-9));
    };
    const std::uint64_t cols = whole(source_bounds.width());
    const std::uint64_t rows = whole(source_bounds.height());
    std::vector<TileFootprint> tiles;
    tiles.reserve(rows * cols);
    for (std::uint64_t r = 0; r < rows; ++r) {
        for (std::uint64_t c = 0; c < cols; ++c) {
            TileFootprint t;
            t.source_id = source_id;
            t.row = std::uint32_t(r);
            t.col = std::uint32_t(c);
            t.id = source_id + "_" + std::to_string(r) + "_" + std::to_string(c);
            t.rect = {source_bounds.min_x + double(c) * side, source_bounds.min_y + double(r) * side,
                      source_bounds.min_x + double(c + 1) * side,
                      source_bounds.min_y + double(r + 1) * side};
            t.pixel_size = tile_pixels;
            t.resolution = resolution;
            tiles.push_back(std::move(t));
        }
    }
    return tiles;
}

/// Whole sources to splits, deterministically: sources are sorted, then
/// shuffled by the seeded stream, then dealt out in split order with
/// largest-remainder counts. Fractions must sum to 1; there must be at
/// least one source per positive-fraction split.
inline std::map<std::string, Split> assign_splits(const std::vector<std::string>& sources,
                                                  const std::map<Split, double>& fractions,
                                                  std::uint64_t seed) {
    double total = 0.0;
    for (const auto& [split, f] : fractions) {
        if (split == Split::unassigned || !(f >= 0.0))
            throw ValidationError("assign_splits: fractions must be nonnegative, named splits");
        total += f;
    }
    if (fractions.empty() || std::abs(total - 1.0) > 1e-9)
        throw ValidationError("assign_splits: fractions must sum to 1");

    std::vector<std::string> ids(sources);
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());

    std::vector<std::pair<Split, double>> positive;
    for (const Split s : {Split::train, Split::val, Split::test, Split::test2}) {
        const auto it = fractions.find(s);
        if (it != fractions.end() && it->second > 0.0) positive.push_back({s, it->second});
    }
    if (ids.size() < positive.size())
        throw ValidationError("assign_splits: fewer sources than splits");

    // Largest-remainder apportionment; remainder ties resolve in split
    // declaration order (train, val, test, test2).
    const std::uint64_t n = ids.size();
    std::vector<std::uint64_t> counts(positive.size());
    std::vector<std::pair<double, std::size_t>> remainders;
    std::uint64_t assigned = 0;
    for (std::size_t k = 0; k < positive.size(); ++k) {
        const double quota = double(n) * positive[k].second;
        counts[k] = std::uint64_t(std::floor(quota));
        assigned += counts[k];
        remainders.push_back({quota - std::floor(quota), k});
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t i = 0; assigned < n; ++i, ++assigned) ++counts[remainders[i % remainders.size()].second];

    Rng rng(named_key(seed, "splits"));
    for (std::size_t i = ids.size(); i > 1; --i)
        std::swap(ids[i - 1], ids[rng.uniform(std::uint32_t(i))]);

    std::map<std::string, Split> out;
    std::size_t next = 0;
    for (std::size_t k = 0; k < positive.size(); ++k)
        for (std::uint64_t c = 0; c < counts[k]; ++c) out[ids[next++]] = positive[k].first;
    return out;
}

inline void apply_splits(std::vector<TileFootprint>& tiles,
                         const std::map<std::string, Split>& by_source) {
    for (TileFootprint& t : tiles) {
        const auto it = by_source.find(t.source_id);
        if (it == by_source.end())
            throw ValidationError("apply_splits: source '" + t.source_id + "' has no split");
        t.split = it->second;
    }
}

/// Canonical dataset order: by source, then grid position, row-major.
inline void sort_tiles(std::vector<TileFootprint>& tiles) {
    std::sort(tiles.begin(), tiles.end(), [](const TileFootprint& a, const TileFootprint& b) {
        if (a.source_id != b.source_id) return a.source_id < b.source_id;
        if (a.row != b.row) return a.row < b.row;
        return a.col < b.col;
    });
}

/// Source extents for a profile: explicit sources when given, otherwise a
/// rows x cols partition of the collection bounds named "src{r}_{c}".
inline std::vector<SourceSpec> resolve_sources(const GenerationProfile& profile,
                                               const Rect& collection_bounds) {
    if (!profile.sources.empty()) return profile.sources;
    if (!collection_bounds.valid() || !(collection_bounds.area() > 0.0))
        throw ValidationError("cannot derive sources from an empty collection extent");
    std::vector<SourceSpec> out;
    const double w = collection_bounds.width() / double(profile.source_grid_cols);
    const double h = collection_bounds.height() / double(profile.source_grid_rows);
    for (std::uint32_t r = 0; r < profile.source_grid_rows; ++r)
        for (std::uint32_t c = 0; c < profile.source_grid_cols; ++c)
            out.push_back({"src" + std::to_string(r) + "_" + std::to_string(c),
                           {collection_bounds.min_x + double(c) * w,
                            collection_bounds.min_y + double(r) * h,
                            collection_bounds.min_x + double(c + 1) * w,
                            collection_bounds.min_y + double(r + 1) * h}});
    return out;
}

}  // namespace geoqa
