#pragma once

/// @file assemble.hpp
/// End-to-end generation: footprint query, scene preparation, question
/// building and answering for every tile, in parallel. Output order is by
/// (source_id, row, col, slot) regardless of worker count or completion
/// order; per-slot keyed streams make the content itself scheduling
/// independent.

#include <atomic>
#include <cstdint>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "geoqa/answers.hpp"
#include "geoqa/builder.hpp"
#include "geoqa/collection.hpp"
#include "geoqa/dataset.hpp"
#include "geoqa/errors.hpp"
#include "geoqa/stats.hpp"
#include "geoqa/templates.hpp"
#include "geoqa/tiling.hpp"

namespace geoqa {

/// All triplets of one tile, slot order.
inline std::vector<QATriplet> generate_tile(const ObjectCollection& collection,
                                            const TileFootprint& tile,
                                            const GenerationProfile& profile,
                                            const ElementCatalog& catalog,
                                            const TemplateTable& templates) {
    const TileScene scene = build_scene(collection, tile.rect, catalog, profile);
    std::vector<QATriplet> out;
    out.reserve(profile.questions_per_image);
    for (std::uint32_t slot = 0; slot < profile.questions_per_image; ++slot) {
        BuiltQuestion built =
            build_slot(scene, catalog, profile, templates, profile.seed, tile.id, slot);
        QATriplet t;
        t.question_id = tile.id + "_q" + std::to_string(slot);
        t.tile_id = tile.id;
        t.qtype = built.spec.qtype;
        t.question = built.spec.text;
        t.answer = std::move(built.answer);
        t.split = tile.split;
        t.spec = question_spec_to_json(built.spec, catalog);
        out.push_back(std::move(t));
    }
    return out;
}

struct AssembleResult {
    std::vector<QATriplet> triplets;
    DistributionReport report;
};

/// Tiles must carry split assignments. Workers pull tiles from a shared
/// counter; results land in per-tile cells, so the concatenation order is
/// the canonical tile order however the pool is scheduled.
inline AssembleResult assemble(const ObjectCollection& collection,
                               const std::vector<TileFootprint>& tiles,
                               const GenerationProfile& profile, const ElementCatalog& catalog,
                               const TemplateTable& templates, unsigned workers = 1) {
    for (const TileFootprint& t : tiles)
        if (t.split == Split::unassigned)
            throw ValidationError("assemble: tile '" + t.id + "' has no split");

    std::vector<TileFootprint> ordered(tiles);
    sort_tiles(ordered);

    std::vector<std::vector<QATriplet>> per_tile(ordered.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::string error;
    std::mutex error_mutex;

    const auto work = [&]() {
        while (!failed.load(std::memory_order_relaxed)) {
            const std::size_t i = next.fetch_add(1);
            if (i >= ordered.size()) return;
            try {
                per_tile[i] = generate_tile(collection, ordered[i], profile, catalog, templates);
            } catch (const std::exception& e) {
                const std::lock_guard<std::mutex> lock(error_mutex);
                if (!failed.exchange(true)) error = ordered[i].id + ": " + e.what();
            }
        }
    };

    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
        for (std::thread& t : pool) t.join();
    }
    if (failed.load()) throw ValidationError("generation failed at tile " + error);

    AssembleResult result;
    std::size_t total = 0;
    for (const auto& chunk : per_tile) total += chunk.size();
    result.triplets.reserve(total);
    for (auto& chunk : per_tile)
        for (QATriplet& t : chunk) result.triplets.push_back(std::move(t));
    result.report = stats(result.triplets);
    return result;
}

}  // namespace geoqa
