#pragma once

/// @file collection.hpp
/// GeoJSON ingestion into a validated, immutable object collection with a
/// bulk-loaded spatial index. The canonical input is an RFC 7946
/// FeatureCollection whose features carry `layer` and `subtype` string
/// properties; geometry is Polygon (with optional holes) or LineString.
///
/// Coordinates are metric. Degree input must be declared via
/// CrsPolicy::equirectangular_approx, which projects to local meters
/// around the mean vertex of the collection.

#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "geoqa/errors.hpp"
#include "geoqa/geometry.hpp"
#include "geoqa/spatial_index.hpp"

namespace geoqa {

enum class Layer : std::uint8_t { road, water_area, building, land_use };

inline const char* to_string(Layer l) {
    switch (l) {
        case Layer::road: return "road";
        case Layer::water_area: return "water_area";
        case Layer::building: return "building";
        default: return "land_use";
    }
}

inline std::optional<Layer> layer_from_string(const std::string& s) {
    if (s == "road") return Layer::road;
    if (s == "water_area") return Layer::water_area;
    if (s == "building") return Layer::building;
    if (s == "land_use") return Layer::land_use;
    return std::nullopt;
}

/// One vector feature. Geometry coordinates are meters after load.
struct GeoObject {
    std::string id;
    Layer layer = Layer::road;
    std::string subtype;
    Geometry geometry;
    std::map<std::string, std::string> source_tags;
};

enum class CrsPolicy : std::uint8_t {
    require_metric,          ///< coordinates taken as meters, unchanged
    equirectangular_approx,  ///< lon/lat degrees projected to local meters
};

/// Immutable after construction; concurrent read-only queries are safe.
class ObjectCollection {
public:
    ObjectCollection() = default;

    explicit ObjectCollection(std::vector<GeoObject> objects) : objects_(std::move(objects)) {
        std::vector<Rect> boxes(objects_.size());
        for (std::size_t i = 0; i < objects_.size(); ++i) {
            boxes[i] = objects_[i].geometry.bounds();
            bounds_.extend(boxes[i]);
        }
        index_ = SpatialIndex(boxes);
    }

    [[nodiscard]] const std::vector<GeoObject>& objects() const { return objects_; }
    [[nodiscard]] std::size_t size() const { return objects_.size(); }
    [[nodiscard]] const Rect& bounds() const { return bounds_; }

    /// Exactly the objects whose geometry intersects the footprint
    /// (boundary contact counts). Results are sorted by object index.
    [[nodiscard]] std::vector<const GeoObject*> query_footprint(const Rect& footprint) const {
        std::vector<std::uint32_t> candidates = index_.query(footprint);
        std::sort(candidates.begin(), candidates.end());
        std::vector<const GeoObject*> hits;
        hits.reserve(candidates.size());
        for (const std::uint32_t i : candidates)
            if (intersects_rect(objects_[i].geometry, footprint)) hits.push_back(&objects_[i]);
        return hits;
    }

private:
    std::vector<GeoObject> objects_;
    Rect bounds_;
    SpatialIndex index_;
};

/// Geometry replaced by its intersection with the footprint rectangle;
/// id/layer/subtype/tags preserved. The object must intersect the
/// footprint.
inline GeoObject clip_to_footprint(const GeoObject& object, const Rect& footprint) {
    if (!intersects_rect(object.geometry, footprint))
        throw ValidationError("clip_to_footprint: object '" + object.id +
                              "' does not intersect the footprint");
    GeoObject out = object;
    out.geometry = clip_to_rect(object.geometry, footprint);
    return out;
}

namespace detail {

inline std::vector<Point> parse_position_array(const nlohmann::json& arr, const std::string& ctx) {
    std::vector<Point> pts;
    if (!arr.is_array()) throw ParseError(ctx + ": coordinate list is not an array");
    pts.reserve(arr.size());
    for (const auto& pos : arr) {
        if (!pos.is_array() || pos.size() < 2 || !pos[0].is_number() || !pos[1].is_number())
            throw ParseError(ctx + ": position is not [x, y]");
        const double x = pos[0].get<double>();
        const double y = pos[1].get<double>();
        if (!std::isfinite(x) || !std::isfinite(y))
            throw ValidationError(ctx + ": non-finite coordinate");
        pts.push_back({x, y});
    }
    return pts;
}

}  // namespace detail

/// Parse a GeoJSON FeatureCollection. Throws ParseError for structural
/// problems (with feature index), ValidationError for contract violations
/// (unknown layer values are collected and reported together, open rings
/// and short geometries name the feature).
inline std::vector<GeoObject> parse_feature_collection(const nlohmann::json& doc) {
    if (!doc.is_object() || doc.value("type", "") != "FeatureCollection")
        throw ParseError("root is not a GeoJSON FeatureCollection");
    const auto features = doc.find("features");
    if (features == doc.end() || !features->is_array())
        throw ParseError("FeatureCollection has no features array");

    std::vector<GeoObject> objects;
    objects.reserve(features->size());
    std::vector<std::string> unknown_layers;
    std::set<std::string> seen_ids;

    std::size_t idx = 0;
    for (const auto& feature : *features) {
        const std::string ctx = "feature " + std::to_string(idx);
        if (!feature.is_object() || feature.value("type", "") != "Feature")
            throw ParseError(ctx + ": not a Feature object");

        GeoObject obj;
        if (feature.contains("id") && feature["id"].is_string())
            obj.id = feature["id"].get<std::string>();
        else
            obj.id = "f" + std::to_string(idx);

        const auto props = feature.find("properties");
        if (props == feature.end() || !props->is_object())
            throw ParseError(ctx + ": missing properties object");
        if (!props->contains("layer") || !(*props)["layer"].is_string())
            throw ValidationError(ctx + " (" + obj.id + "): missing 'layer' property");
        const std::string layer_str = (*props)["layer"].get<std::string>();
        const auto layer = layer_from_string(layer_str);
        if (!layer) {
            unknown_layers.push_back(obj.id + " ('" + layer_str + "')");
            ++idx;
            continue;
        }
        obj.layer = *layer;
        obj.subtype = props->value("subtype", "");
        for (const auto& [key, value] : props->items()) {
            if (key == "layer" || key == "subtype") continue;
            if (value.is_string()) obj.source_tags[key] = value.get<std::string>();
        }

        const auto geom = feature.find("geometry");
        if (geom == feature.end() || !geom->is_object())
            throw ParseError(ctx + ": missing geometry");
        const std::string gtype = geom->value("type", "");
        const auto coords = geom->find("coordinates");
        if (coords == geom->end()) throw ParseError(ctx + ": geometry has no coordinates");

        if (gtype == "Polygon") {
            obj.geometry.kind = GeometryKind::polygon;
            for (const auto& ring_json : *coords) {
                std::vector<Point> ring = detail::parse_position_array(ring_json, ctx);
                if (ring.size() < 4)
                    throw ValidationError(ctx + " (" + obj.id +
                                          "): polygon ring has fewer than 4 vertices");
                if (!(ring.front() == ring.back()))
                    throw ValidationError(ctx + " (" + obj.id + "): polygon ring is not closed");
                obj.geometry.parts.push_back(std::move(ring));
            }
            if (obj.geometry.parts.empty())
                throw ValidationError(ctx + " (" + obj.id + "): polygon has no rings");
        } else if (gtype == "LineString") {
            obj.geometry.kind = GeometryKind::polyline;
            std::vector<Point> chain = detail::parse_position_array(*coords, ctx);
            if (chain.size() < 2)
                throw ValidationError(ctx + " (" + obj.id +
                                      "): polyline has fewer than 2 vertices");
            obj.geometry.parts.push_back(std::move(chain));
        } else {
            throw ValidationError(ctx + " (" + obj.id + "): unsupported geometry type '" +
                                  gtype + "'");
        }

        if (!seen_ids.insert(obj.id).second)
            throw ValidationError(ctx + ": duplicate feature id '" + obj.id + "'");
        objects.push_back(std::move(obj));
        ++idx;
    }

    if (!unknown_layers.empty()) {
        std::string msg = "unknown layer value on " + std::to_string(unknown_layers.size()) +
                          " feature(s):";
        for (const auto& f : unknown_layers) msg += " " + f;
        throw ValidationError(msg);
    }
    return objects;
}

namespace detail {

inline constexpr double kEarthRadiusM = 6378137.0;

/// Local equirectangular projection about the mean vertex of the
/// collection: adequate for the tile-scale extents this pipeline handles.
inline void project_equirectangular(std::vector<GeoObject>& objects) {
    double sum_lon = 0.0, sum_lat = 0.0;
    std::size_t n = 0;
    for (const auto& obj : objects)
        for (const auto& part : obj.geometry.parts)
            for (const Point& p : part) {
                sum_lon += p.x;
                sum_lat += p.y;
                ++n;
            }
    if (n == 0) return;
    const double lon0 = sum_lon / double(n);
    const double lat0 = sum_lat / double(n);
    const double deg = std::numbers::pi / 180.0;
    const double mx = kEarthRadiusM * std::cos(lat0 * deg) * deg;
    const double my = kEarthRadiusM * deg;
    for (auto& obj : objects)
        for (auto& part : obj.geometry.parts)
            for (Point& p : part) p = {(p.x - lon0) * mx, (p.y - lat0) * my};
}

}  // namespace detail

inline ObjectCollection load_collection_from_json(const nlohmann::json& doc,
                                                  CrsPolicy policy = CrsPolicy::require_metric) {
    std::vector<GeoObject> objects = parse_feature_collection(doc);
    if (policy == CrsPolicy::equirectangular_approx) detail::project_equirectangular(objects);
    return ObjectCollection(std::move(objects));
}

inline ObjectCollection load_collection(const std::string& path,
                                        CrsPolicy policy = CrsPolicy::require_metric) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open geo file: " + path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
    return load_collection_from_json(doc, policy);
}

/// Serialize back to the same FeatureCollection format; load(save(c))
/// reproduces ids, layers and vertex lists exactly.
inline nlohmann::json collection_to_json(const ObjectCollection& collection) {
    nlohmann::json features = nlohmann::json::array();
    for (const GeoObject& obj : collection.objects()) {
        nlohmann::json props;
        props["layer"] = to_string(obj.layer);
        props["subtype"] = obj.subtype;
        for (const auto& [k, v] : obj.source_tags) props[k] = v;

        nlohmann::json coords;
        if (obj.geometry.kind == GeometryKind::polygon) {
            for (const auto& ring : obj.geometry.parts) {
                nlohmann::json jring = nlohmann::json::array();
                for (const Point& p : ring) jring.push_back({p.x, p.y});
                coords.push_back(std::move(jring));
            }
            features.push_back({{"type", "Feature"},
                                {"id", obj.id},
                                {"properties", std::move(props)},
                                {"geometry", {{"type", "Polygon"}, {"coordinates", coords}}}});
        } else {
            coords = nlohmann::json::array();
            for (const Point& p : obj.geometry.parts.front()) coords.push_back({p.x, p.y});
            features.push_back({{"type", "Feature"},
                                {"id", obj.id},
                                {"properties", std::move(props)},
                                {"geometry", {{"type", "LineString"}, {"coordinates", coords}}}});
        }
    }
    return {{"type", "FeatureCollection"}, {"features", std::move(features)}};
}

inline void save_collection(const ObjectCollection& collection, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write geo file: " + path);
    out << collection_to_json(collection).dump() << "\n";
}

}  // namespace geoqa
