#pragma once

/// @file answers.hpp
/// Ground-truth answering: object selection for an ElementSpec inside one
/// footprint, per-type answer computation, and quantization into the closed
/// answer vocabularies.
///
/// Membership (count/presence/comparison) uses footprint intersection of
/// the unclipped geometry; attributes, relations and area sums evaluate on
/// the clipped geometry, so answers never describe extent outside the
/// image.

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "geoqa/catalog.hpp"
#include "geoqa/collection.hpp"
#include "geoqa/errors.hpp"
#include "geoqa/geometry.hpp"
#include "geoqa/profile.hpp"
#include "geoqa/question.hpp"

namespace geoqa {

/// Five ordered bins shared by counts and areas; areas carry a unit suffix
/// so the two label families never collide in a mixed vocabulary.
struct QuantizationScheme {
    enum class Unit : std::uint8_t { count, area };
    Unit unit = Unit::count;
    std::array<std::string, 5> labels = {"0", "between 1 and 10", "between 11 and 100",
                                         "between 101 and 1000", "more than 1000"};

    static QuantizationScheme counts() { return {}; }

    static QuantizationScheme areas() {
        QuantizationScheme s;
        s.unit = Unit::area;
        for (std::string& label : s.labels) label += "m2";
        return s;
    }
};

/// 0 | 1..10 | 11..100 | 101..1000 | 1001.. (upper edges inclusive).
inline std::string quantize_count(std::uint64_t n,
                                  const QuantizationScheme& scheme = QuantizationScheme::counts()) {
    if (n == 0) return scheme.labels[0];
    if (n <= 10) return scheme.labels[1];
    if (n <= 100) return scheme.labels[2];
    if (n <= 1000) return scheme.labels[3];
    return scheme.labels[4];
}

/// Same bins over nonnegative reals: 0 alone maps to the zero label, then
/// (0,10], (10,100], (100,1000], (1000,inf).
inline std::string quantize_area(double area_m2,
                                 const QuantizationScheme& scheme = QuantizationScheme::areas()) {
    if (!(area_m2 >= 0.0)) throw ValidationError("quantize_area: negative or NaN area");
    if (area_m2 == 0.0) return scheme.labels[0];
    if (area_m2 <= 10.0) return scheme.labels[1];
    if (area_m2 <= 100.0) return scheme.labels[2];
    if (area_m2 <= 1000.0) return scheme.labels[3];
    return scheme.labels[4];
}

/// The 9 LR answers, grouped for confusion-matrix ordering: yes/no, then
/// rural/urban, then the count bins.
inline std::vector<std::string> lr_vocabulary() {
    std::vector<std::string> v = {"yes", "no", "rural", "urban"};
    for (const std::string& label : QuantizationScheme::counts().labels) v.push_back(label);
    return v;
}

/// HR answers: yes/no, raw integers 0..max_count, then the area bins.
inline std::vector<std::string> hr_vocabulary(std::uint32_t max_count) {
    std::vector<std::string> v = {"yes", "no"};
    for (std::uint32_t n = 0; n <= max_count; ++n) v.push_back(std::to_string(n));
    for (const std::string& label : QuantizationScheme::areas().labels) v.push_back(label);
    return v;
}

inline std::vector<std::string> vocabulary(const GenerationProfile& p) {
    return p.scale == Scale::lr ? lr_vocabulary() : hr_vocabulary(p.max_count);
}

/// One object prepared for answering inside a footprint: clipped geometry
/// with its derived measurements, classified once up front.
struct SceneObject {
    const GeoObject* source = nullptr;
    Geometry clipped;
    double clipped_area = 0.0;
    Point centroid{0.0, 0.0};
    Rect clipped_bounds;
    ShapeClass shape = ShapeClass::none;
    SizeClass size = SizeClass::small;
};

struct TileScene {
    Rect footprint;
    std::vector<SceneObject> objects;
    std::vector<std::vector<std::uint32_t>> by_category;  ///< indices per catalog entry
    std::uint32_t building_count = 0;  ///< building layer, any subtype
};

inline TileScene build_scene(const ObjectCollection& collection, const Rect& footprint,
                             const ElementCatalog& catalog, const GenerationProfile& profile) {
    TileScene scene;
    scene.footprint = footprint;
    const std::vector<const GeoObject*> hits = collection.query_footprint(footprint);
    scene.objects.reserve(hits.size());
    for (const GeoObject* obj : hits) {
        SceneObject so;
        so.source = obj;
        so.clipped = clip_to_rect(obj->geometry, footprint);
        if (so.clipped.empty()) {
            // Boundary-only contact: still a member (contact counts), but
            // the visible extent is measure-zero. Stand in a point.
            const Point c = centroid(obj->geometry).position;
            const Point anchor{std::clamp(c.x, footprint.min_x, footprint.max_x),
                               std::clamp(c.y, footprint.min_y, footprint.max_y)};
            so.clipped = make_polyline({anchor, anchor});
        }
        so.clipped_area = polygon_area(so.clipped);
        so.centroid = centroid(so.clipped).position;
        so.clipped_bounds = so.clipped.bounds();
        so.shape = classify_shape(so.clipped, profile.shape_config);
        so.size = classify_size(so.clipped_area, profile.size_profile);
        if (obj->layer == Layer::building) ++scene.building_count;
        scene.objects.push_back(std::move(so));
    }
    scene.by_category.resize(catalog.size());
    for (std::uint32_t i = 0; i < scene.objects.size(); ++i)
        for (std::uint32_t k = 0; k < catalog.size(); ++k)
            if (catalog.at(k).matches(*scene.objects[i].source)) scene.by_category[k].push_back(i);
    return scene;
}

namespace detail {

inline bool attribute_matches(const SceneObject& so, const Attribute& a) {
    return is_shape_attribute(a) ? so.shape == std::get<ShapeClass>(a)
                                 : so.size == std::get<SizeClass>(a);
}

/// Indices matching category + attribute only (no relation clause).
inline std::vector<std::uint32_t> select_plain(const TileScene& scene,
                                               std::uint32_t category,
                                               const std::optional<Attribute>& attribute) {
    const std::vector<std::uint32_t>& bucket = scene.by_category.at(category);
    if (!attribute) return bucket;
    std::vector<std::uint32_t> out;
    for (const std::uint32_t i : bucket)
        if (attribute_matches(scene.objects[i], *attribute)) out.push_back(i);
    return out;
}

/// Extremes of target centroids with the runner-up kept, so a candidate
/// that is itself the extreme target can fall back to the second best.
struct TargetExtremes {
    double best = 0.0, second = 0.0;
    std::uint32_t best_idx = std::numeric_limits<std::uint32_t>::max();
    bool has_best = false, has_second = false;

    template <class Better>
    void feed(double v, std::uint32_t idx, Better better) {
        if (!has_best || better(v, best)) {
            if (has_best) {
                second = best;
                has_second = true;
            }
            best = v;
            best_idx = idx;
            has_best = true;
        } else if (!has_second || better(v, second)) {
            second = v;
            has_second = true;
        }
    }

    /// Extreme over targets excluding `self`; nullopt if none remain.
    [[nodiscard]] std::optional<double> excluding(std::uint32_t self) const {
        if (!has_best) return std::nullopt;
        if (best_idx != self) return best;
        if (has_second) return second;
        return std::nullopt;
    }
};

}  // namespace detail

/// Objects matching the full ElementSpec. Relation semantics are
/// existential: keep a iff some distinct object c matching the relation
/// target stands in the stated relation to a. Directional relations reduce
/// to a comparison against the extreme target centroid; next_to scans with
/// a bounding-box distance early-out.
inline std::vector<std::uint32_t> select_objects(const TileScene& scene, const ElementSpec& spec) {
    std::vector<std::uint32_t> heads = detail::select_plain(scene, spec.category, spec.attribute);
    if (!spec.relation) return heads;

    const std::vector<std::uint32_t> targets =
        detail::select_plain(scene, spec.relation->category, spec.relation->attribute);
    if (targets.empty()) return {};
    std::vector<std::uint32_t> out;

    const RelationKind kind = spec.relation->kind;
    if (kind == RelationKind::next_to) {
        for (const std::uint32_t a : heads) {
            const SceneObject& sa = scene.objects[a];
            for (const std::uint32_t c : targets) {
                if (c == a) continue;
                const SceneObject& sc = scene.objects[c];
                if (sa.clipped_bounds.gap_to(sc.clipped_bounds) >= kNextToMaxDistance) continue;
                if (distance(sa.clipped, sc.clipped) < kNextToMaxDistance) {
                    out.push_back(a);
                    break;
                }
            }
        }
        return out;
    }

    const bool use_x = kind == RelationKind::left_of || kind == RelationKind::right_of;
    // left_of: a.x < max target x; right_of: a.x > min target x;
    // top_of: a.y > min target y; bottom_of: a.y < max target y.
    const bool want_max = kind == RelationKind::left_of || kind == RelationKind::bottom_of;
    detail::TargetExtremes ex;
    for (const std::uint32_t c : targets) {
        const Point& p = scene.objects[c].centroid;
        const double v = use_x ? p.x : p.y;
        if (want_max)
            ex.feed(v, c, [](double lhs, double rhs) { return lhs > rhs; });
        else
            ex.feed(v, c, [](double lhs, double rhs) { return lhs < rhs; });
    }
    for (const std::uint32_t a : heads) {
        const Point& p = scene.objects[a].centroid;
        const double v = use_x ? p.x : p.y;
        const std::optional<double> bound = ex.excluding(a);
        if (!bound) continue;
        if (want_max ? v < *bound : v > *bound) out.push_back(a);
    }
    return out;
}

/// Selection over a plain object list: builds a throwaway scene. Intended
/// for tests and oracles; generation reuses one scene per tile.
inline std::vector<const GeoObject*> select_objects(const std::vector<GeoObject>& objects,
                                                    const ElementSpec& spec, const Rect& footprint,
                                                    const ElementCatalog& catalog,
                                                    const GenerationProfile& profile) {
    const ObjectCollection collection{objects};
    const TileScene scene = build_scene(collection, footprint, catalog, profile);
    const std::vector<std::uint32_t> indices = select_objects(scene, spec);
    std::vector<const GeoObject*> out;
    out.reserve(indices.size());
    for (const std::uint32_t i : indices) {
        const std::string& id = scene.objects[i].source->id;
        for (const GeoObject& original : objects)
            if (original.id == id) out.push_back(&original);
    }
    return out;
}

inline std::uint64_t answer_count(const std::vector<std::uint32_t>& selected) {
    return selected.size();
}

inline std::string answer_presence(std::uint64_t count) { return count > 0 ? "yes" : "no"; }

inline std::string answer_comparison(std::uint64_t count_a, std::uint64_t count_b,
                                     ComparisonOp op) {
    bool yes = false;
    switch (op) {
        case ComparisonOp::less_than: yes = count_a < count_b; break;
        case ComparisonOp::equals_to: yes = count_a == count_b; break;
        case ComparisonOp::more_than: yes = count_a > count_b; break;
    }
    return yes ? "yes" : "no";
}

/// Urban iff the footprint holds at least `threshold` buildings of any
/// subtype (inclusive boundary).
inline std::string answer_rural_urban(const TileScene& scene, std::uint32_t threshold) {
    return scene.building_count >= threshold ? "urban" : "rural";
}

/// Sum of clipped areas of the selection, quantized. Polylines contribute
/// zero area.
inline std::string answer_area(const TileScene& scene, const std::vector<std::uint32_t>& selected,
                               const QuantizationScheme& scheme = QuantizationScheme::areas()) {
    if (scheme.unit != QuantizationScheme::Unit::area)
        throw ConfigError("answer_area requires an area quantization scheme");
    double total = 0.0;
    for (const std::uint32_t i : selected) total += scene.objects[i].clipped_area;
    return quantize_area(total, scheme);
}

/// Raw (unquantized) answer value for a count question; the caller decides
/// quantization by scale and enforces the HR ceiling.
inline std::uint64_t raw_count(const TileScene& scene, const ElementSpec& element) {
    return answer_count(select_objects(scene, element));
}

/// Ground-truth label for any fully built question.
inline std::string answer_question(const TileScene& scene, const QuestionSpec& q,
                                   const GenerationProfile& profile) {
    switch (q.qtype) {
        case QuestionType::count: {
            const std::uint64_t n = raw_count(scene, *q.element);
            return profile.scale == Scale::lr ? quantize_count(n) : std::to_string(n);
        }
        case QuestionType::presence:
            return answer_presence(raw_count(scene, *q.element));
        case QuestionType::comparison:
            return answer_comparison(raw_count(scene, *q.element),
                                     raw_count(scene, *q.second_element), *q.comparison_op);
        case QuestionType::area:
            return answer_area(scene, select_objects(scene, *q.element));
        default:
            return answer_rural_urban(scene, profile.rural_urban_threshold);
    }
}

}  // namespace geoqa
