#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "geoqa/collection.hpp"
#include "geoqa/rng.hpp"
#include "support.hpp"

using namespace geoqa;
using nlohmann::json;

namespace {

json feature(const std::string& id, const std::string& layer, const std::string& subtype,
             json geometry) {
    return {{"type", "Feature"},
            {"id", id},
            {"properties", {{"layer", layer}, {"subtype", subtype}}},
            {"geometry", std::move(geometry)}};
}

json polygon_geom(std::initializer_list<std::pair<double, double>> ring) {
    json coords = json::array();
    json r = json::array();
    for (const auto& [x, y] : ring) r.push_back({x, y});
    coords.push_back(std::move(r));
    return {{"type", "Polygon"}, {"coordinates", std::move(coords)}};
}

json linestring_geom(std::initializer_list<std::pair<double, double>> chain) {
    json coords = json::array();
    for (const auto& [x, y] : chain) coords.push_back({x, y});
    return {{"type", "LineString"}, {"coordinates", std::move(coords)}};
}

json collection_doc(std::initializer_list<json> features) {
    return {{"type", "FeatureCollection"}, {"features", json(features)}};
}

}  // namespace

TEST_CASE("parse_feature_collection: happy path") {
    const json doc = collection_doc({
        feature("w1", "water_area", "", polygon_geom({{0, 0}, {10, 0}, {10, 10}, {0, 10}, {0, 0}})),
        feature("r1", "road", "", linestring_geom({{0, 0}, {50, 50}})),
        feature("b1", "building", "house",
                polygon_geom({{20, 20}, {30, 20}, {30, 30}, {20, 30}, {20, 20}})),
    });
    const std::vector<GeoObject> objects = parse_feature_collection(doc);
    REQUIRE(objects.size() == 3);
    CHECK(objects[0].id == "w1");
    CHECK(objects[0].layer == Layer::water_area);
    CHECK(objects[0].geometry.kind == GeometryKind::polygon);
    CHECK(objects[1].geometry.kind == GeometryKind::polyline);
    CHECK(objects[2].subtype == "house");
}

TEST_CASE("parse_feature_collection: missing ids are synthesized by index") {
    json f = feature("", "road", "", linestring_geom({{0, 0}, {1, 1}}));
    f.erase("id");
    const std::vector<GeoObject> objects = parse_feature_collection(collection_doc({f}));
    REQUIRE(objects.size() == 1);
    CHECK(objects[0].id == "f0");
}

TEST_CASE("parse_feature_collection: extra string properties become source tags") {
    json f = feature("b1", "building", "office",
                     polygon_geom({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0, 0}}));
    f["properties"]["name"] = "HQ";
    f["properties"]["floors"] = 5;  // non-string, dropped
    const std::vector<GeoObject> objects = parse_feature_collection(collection_doc({f}));
    REQUIRE(objects[0].source_tags.count("name") == 1);
    CHECK(objects[0].source_tags.at("name") == "HQ");
    CHECK(objects[0].source_tags.count("floors") == 0);
}

TEST_CASE("parse_feature_collection: structural problems raise ParseError") {
    CHECK_THROWS_AS(parse_feature_collection(json{{"type", "NotACollection"}}), ParseError);
    CHECK_THROWS_AS(parse_feature_collection(json{{"type", "FeatureCollection"}}), ParseError);

    json no_props = feature("x", "road", "", linestring_geom({{0, 0}, {1, 1}}));
    no_props.erase("properties");
    CHECK_THROWS_AS(parse_feature_collection(collection_doc({no_props})), ParseError);

    json no_geom = feature("x", "road", "", linestring_geom({{0, 0}, {1, 1}}));
    no_geom.erase("geometry");
    CHECK_THROWS_AS(parse_feature_collection(collection_doc({no_geom})), ParseError);

    // the error message names the offending feature index
    try {
        parse_feature_collection(collection_doc(
            {feature("ok", "road", "", linestring_geom({{0, 0}, {1, 1}})), no_geom}));
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("feature 1") != std::string::npos);
    }
}

TEST_CASE("parse_feature_collection: unknown layers are collected into one error") {
    const json doc = collection_doc({
        feature("ok", "road", "", linestring_geom({{0, 0}, {1, 1}})),
        feature("bad1", "swamp", "", polygon_geom({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0, 0}})),
        feature("bad2", "tundra", "", polygon_geom({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0, 0}})),
    });
    try {
        parse_feature_collection(doc);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("bad1") != std::string::npos);
        CHECK(msg.find("bad2") != std::string::npos);
        CHECK(msg.find("2 feature(s)") != std::string::npos);
    }
}

TEST_CASE("parse_feature_collection: geometry contract violations") {
    // open ring
    CHECK_THROWS_AS(parse_feature_collection(collection_doc({feature(
                        "p", "water_area", "", polygon_geom({{0, 0}, {1, 0}, {1, 1}, {0, 1}}))})),
                    ValidationError);
    // ring with too few vertices
    CHECK_THROWS_AS(parse_feature_collection(collection_doc({feature(
                        "p", "water_area", "", polygon_geom({{0, 0}, {1, 0}, {0, 0}}))})),
                    ValidationError);
    // single-vertex polyline
    CHECK_THROWS_AS(parse_feature_collection(
                        collection_doc({feature("l", "road", "", linestring_geom({{0, 0}}))})),
                    ValidationError);
    // unsupported geometry type
    CHECK_THROWS_AS(
        parse_feature_collection(collection_doc({feature(
            "m", "road", "", json{{"type", "MultiPoint"}, {"coordinates", json::array()}})})),
        ValidationError);
    // non-finite coordinate
    json inf_geom = linestring_geom({{0, 0}, {1, 1}});
    inf_geom["coordinates"][1][0] = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(
        parse_feature_collection(collection_doc({feature("l", "road", "", inf_geom)})),
        ValidationError);
    // duplicate ids
    CHECK_THROWS_AS(parse_feature_collection(collection_doc({
                        feature("dup", "road", "", linestring_geom({{0, 0}, {1, 1}})),
                        feature("dup", "road", "", linestring_geom({{2, 2}, {3, 3}})),
                    })),
                    ValidationError);
}

TEST_CASE("load/save round-trip preserves the collection exactly") {
    Rng rng(201);
    std::vector<GeoObject> objects = support::random_scene_objects(rng, 40, {0, 0, 2000, 2000});
    objects[3].source_tags["name"] = "sample";
    const ObjectCollection original(std::move(objects));

    const std::string path =
        (std::filesystem::temp_directory_path() / "geoqa_roundtrip.json").string();
    save_collection(original, path);
    const ObjectCollection loaded = load_collection(path);
    std::remove(path.c_str());

    REQUIRE(loaded.size() == original.size());
    for (std::size_t i = 0; i < loaded.size(); ++i) {
        const GeoObject& a = original.objects()[i];
        const GeoObject& b = loaded.objects()[i];
        CHECK(a.id == b.id);
        CHECK(a.layer == b.layer);
        CHECK(a.subtype == b.subtype);
        CHECK(a.source_tags == b.source_tags);
        CHECK(a.geometry == b.geometry);  // vertex-exact
    }
}

TEST_CASE("load_collection: io and parse errors") {
    CHECK_THROWS_AS(load_collection("/nonexistent/geo.json"), IoError);

    const std::string path =
        (std::filesystem::temp_directory_path() / "geoqa_broken.json").string();
    std::ofstream(path) << "{ not json";
    CHECK_THROWS_AS(load_collection(path), ParseError);
    std::remove(path.c_str());
}

TEST_CASE("query_footprint equals a linear intersection scan") {
    Rng rng(202);
    const Rect region{0, 0, 5000, 5000};
    const ObjectCollection collection(support::random_scene_objects(rng, 300, region));

    for (int q = 0; q < 60; ++q) {
        const double x = rng.next_double() * 5000 - 500, y = rng.next_double() * 5000 - 500;
        const double w = rng.next_double() * 1500, h = rng.next_double() * 1500;
        const Rect footprint{x, y, x + w, y + h};

        const std::vector<const GeoObject*> got = collection.query_footprint(footprint);
        std::vector<const GeoObject*> want;
        for (const GeoObject& obj : collection.objects())
            if (intersects_rect(obj.geometry, footprint)) want.push_back(&obj);
        CHECK(got == want);  // same objects, same (index) order
    }
}

TEST_CASE("clip_to_footprint: clamps area and rejects disjoint objects") {
    const GeoObject obj =
        support::make_obj("w", Layer::water_area, "", support::square_poly(0, 0, 50));
    const Rect inside{-10, -10, 10, 10};
    const GeoObject clipped = clip_to_footprint(obj, inside);
    CHECK(clipped.id == "w");
    CHECK(polygon_area(clipped.geometry) <= polygon_area(obj.geometry));
    CHECK(polygon_area(clipped.geometry) <= inside.area());
    CHECK(polygon_area(clipped.geometry) == Catch::Approx(400.0));

    CHECK_THROWS_AS(clip_to_footprint(obj, Rect{100, 100, 200, 200}), ValidationError);
}

TEST_CASE("equirectangular projection: degree input becomes local meters") {
    // two points 0.01 degrees apart in longitude at the equator:
    // 0.01 * pi/180 * 6378137 = 1113.194907... meters
    const json doc = collection_doc({
        feature("a", "road", "", linestring_geom({{10.00, 0.0}, {10.01, 0.0}})),
        feature("b", "road", "", linestring_geom({{10.00, 0.0}, {10.00, 0.01}})),
    });
    const ObjectCollection c = load_collection_from_json(doc, CrsPolicy::equirectangular_approx);
    const double lon_len = perimeter(c.objects()[0].geometry);
    const double lat_len = perimeter(c.objects()[1].geometry);
    // the projection centers on the mean latitude 0.0025 degrees, whose
    // cosine shortens longitudes by under 1e-9 relative
    CHECK(lon_len == Catch::Approx(1113.194907932736).epsilon(1e-6));
    CHECK(lat_len == Catch::Approx(1113.194907932736).epsilon(1e-6));

    // under require_metric the same numbers pass through untouched
    const ObjectCollection raw = load_collection_from_json(doc, CrsPolicy::require_metric);
    CHECK(perimeter(raw.objects()[0].geometry) == Catch::Approx(0.01));
}
