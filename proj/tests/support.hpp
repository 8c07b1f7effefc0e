#pragma once

// Shared fixture builders and independent oracles for the test suite and
// the acceptance runner. Everything here is deterministic: all randomness
// comes from a caller-provided geoqa::Rng.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "geoqa/answers.hpp"
#include "geoqa/catalog.hpp"
#include "geoqa/collection.hpp"
#include "geoqa/geometry.hpp"
#include "geoqa/profile.hpp"
#include "geoqa/question.hpp"
#include "geoqa/rng.hpp"
#include "geoqa/templates.hpp"

namespace support {

inline geoqa::Geometry square_poly(double cx, double cy, double half) {
    return geoqa::make_polygon({{cx - half, cy - half},
                                {cx + half, cy - half},
                                {cx + half, cy + half},
                                {cx - half, cy + half}});
}

inline geoqa::Geometry rect_poly(double min_x, double min_y, double max_x, double max_y) {
    return geoqa::make_polygon(
        {{min_x, min_y}, {max_x, min_y}, {max_x, max_y}, {min_x, max_y}});
}

/// Regular n-gon, circular for large n.
inline geoqa::Geometry ngon_poly(double cx, double cy, double radius, int n) {
    std::vector<geoqa::Point> ring;
    ring.reserve(std::size_t(n));
    for (int i = 0; i < n; ++i) {
        const double a = 2.0 * std::numbers::pi * double(i) / double(n);
        ring.push_back({cx + radius * std::cos(a), cy + radius * std::sin(a)});
    }
    return geoqa::make_polygon(std::move(ring));
}

/// Simple (star-shaped about its center) polygon with random vertex radii.
inline geoqa::Geometry random_star_polygon(geoqa::Rng& rng, geoqa::Point center, double r_min,
                                           double r_max, int n) {
    std::vector<double> angles(static_cast<std::size_t>(n));
    for (double& a : angles) a = rng.next_double() * 2.0 * std::numbers::pi;
    std::sort(angles.begin(), angles.end());
    std::vector<geoqa::Point> ring;
    ring.reserve(std::size_t(n));
    for (const double a : angles) {
        const double r = r_min + rng.next_double() * (r_max - r_min);
        ring.push_back({center.x + r * std::cos(a), center.y + r * std::sin(a)});
    }
    return geoqa::make_polygon(std::move(ring));
}

inline geoqa::GeoObject make_obj(std::string id, geoqa::Layer layer, std::string subtype,
                                 geoqa::Geometry g) {
    geoqa::GeoObject o;
    o.id = std::move(id);
    o.layer = layer;
    o.subtype = std::move(subtype);
    o.geometry = std::move(g);
    return o;
}

/// (layer, subtype) pairs covering every default catalog category.
struct LayerSubtype {
    geoqa::Layer layer;
    const char* subtype;
};

inline const std::vector<LayerSubtype>& category_pool() {
    static const std::vector<LayerSubtype> pool = {
        {geoqa::Layer::road, ""},
        {geoqa::Layer::water_area, ""},
        {geoqa::Layer::building, "retail"},
        {geoqa::Layer::building, "office"},
        {geoqa::Layer::building, "house"},
        {geoqa::Layer::building, "apartments"},
        {geoqa::Layer::building, "church"},
        {geoqa::Layer::land_use, "residential"},
        {geoqa::Layer::land_use, "commercial"},
        {geoqa::Layer::land_use, "industrial"},
        {geoqa::Layer::land_use, "construction"},
    };
    return pool;
}

/// Up to `n` objects scattered around `region`, with shape, size and layer
/// variety; some straddle or miss the region entirely.
inline std::vector<geoqa::GeoObject> random_scene_objects(geoqa::Rng& rng, std::uint32_t n,
                                                          const geoqa::Rect& region) {
    std::vector<geoqa::GeoObject> objects;
    objects.reserve(n);
    const double margin = 0.2 * std::min(region.width(), region.height());
    for (std::uint32_t i = 0; i < n; ++i) {
        const LayerSubtype& ls = category_pool()[rng.uniform(
            std::uint32_t(category_pool().size()))];
        const double cx =
            region.min_x - margin + rng.next_double() * (region.width() + 2.0 * margin);
        const double cy =
            region.min_y - margin + rng.next_double() * (region.height() + 2.0 * margin);
        geoqa::Geometry g;
        if (ls.layer == geoqa::Layer::road) {
            const double len = 50.0 + rng.next_double() * 2000.0;
            const double a = rng.next_double() * 2.0 * std::numbers::pi;
            g = geoqa::make_polyline(
                {{cx, cy}, {cx + len * std::cos(a), cy + len * std::sin(a)}});
        } else {
            switch (rng.uniform(4)) {
                case 0: {  // square, size spans all three classes
                    const double half = 5.0 + rng.next_double() * 100.0;
                    g = square_poly(cx, cy, half);
                    break;
                }
                case 1: {  // elongated rectangle
                    const double hx = 20.0 + rng.next_double() * 120.0;
                    g = rect_poly(cx - hx, cy - hx / 4.0, cx + hx, cy + hx / 4.0);
                    break;
                }
                case 2: {  // near-circle
                    const double r = 10.0 + rng.next_double() * 80.0;
                    g = ngon_poly(cx, cy, r, 24);
                    break;
                }
                default: {  // irregular star, classifies as none
                    g = random_star_polygon(rng, {cx, cy}, 10.0, 60.0, 9);
                    break;
                }
            }
        }
        objects.push_back(make_obj("o" + std::to_string(i), ls.layer, ls.subtype, std::move(g)));
    }
    return objects;
}

/// Exhaustive selection oracle: no spatial index, no extreme-value
/// reduction, no bounding-box early-outs. Attributes are reclassified from
/// the clipped geometry; relations are answered by pairwise existential
/// enumeration through relative_position.
inline std::vector<std::uint32_t> oracle_select(const geoqa::TileScene& scene,
                                                const geoqa::ElementCatalog& catalog,
                                                const geoqa::ElementSpec& spec,
                                                const geoqa::GenerationProfile& profile) {
    const auto matches_plain = [&](std::uint32_t i, std::uint32_t category,
                                   const std::optional<geoqa::Attribute>& attr) {
        const geoqa::SceneObject& so = scene.objects[i];
        if (!catalog.at(category).matches(*so.source)) return false;
        if (!attr) return true;
        if (geoqa::is_shape_attribute(*attr))
            return geoqa::classify_shape(so.clipped, profile.shape_config) ==
                   std::get<geoqa::ShapeClass>(*attr);
        return geoqa::classify_size(geoqa::polygon_area(so.clipped), profile.size_profile) ==
               std::get<geoqa::SizeClass>(*attr);
    };
    std::vector<std::uint32_t> out;
    for (std::uint32_t a = 0; a < scene.objects.size(); ++a) {
        if (!matches_plain(a, spec.category, spec.attribute)) continue;
        if (!spec.relation) {
            out.push_back(a);
            continue;
        }
        bool related = false;
        for (std::uint32_t c = 0; c < scene.objects.size() && !related; ++c) {
            if (c == a) continue;
            if (!matches_plain(c, spec.relation->category, spec.relation->attribute)) continue;
            related = geoqa::relative_position(scene.objects[a].clipped, scene.objects[c].clipped)
                          .has(spec.relation->kind);
        }
        if (related) out.push_back(a);
    }
    return out;
}

/// Random ElementSpec over the whole spec space (category, attribute,
/// relation kind, relation target).
inline geoqa::ElementSpec random_spec(geoqa::Rng& rng, const geoqa::ElementCatalog& catalog) {
    const auto random_attr = [&rng]() -> std::optional<geoqa::Attribute> {
        switch (rng.uniform(7)) {
            case 0: return geoqa::Attribute{geoqa::ShapeClass::square};
            case 1: return geoqa::Attribute{geoqa::ShapeClass::rectangular};
            case 2: return geoqa::Attribute{geoqa::ShapeClass::circular};
            case 3: return geoqa::Attribute{geoqa::SizeClass::small};
            case 4: return geoqa::Attribute{geoqa::SizeClass::medium};
            case 5: return geoqa::Attribute{geoqa::SizeClass::large};
            default: return std::nullopt;
        }
    };
    geoqa::ElementSpec spec;
    spec.category = rng.uniform(std::uint32_t(catalog.size()));
    spec.attribute = random_attr();
    if (rng.uniform(2) == 0) {
        geoqa::ElementSpec::Relation rel;
        rel.kind = geoqa::detail::kAllRelations[rng.uniform(5)];
        rel.category = rng.uniform(std::uint32_t(catalog.size()));
        rel.attribute = random_attr();
        spec.relation = rel;
    }
    return spec;
}

}  // namespace support
