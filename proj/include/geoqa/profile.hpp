#pragma once

/// @file profile.hpp
/// Generation profile: every knob of a dataset build, read from one JSON
/// file. Scale picks the defaults (tile geometry, size thresholds, split
/// fractions); any key given explicitly wins. All randomness everywhere
/// flows from the single seed here.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "geoqa/errors.hpp"
#include "geoqa/geometry.hpp"

namespace geoqa {

enum class Scale : std::uint8_t { lr, hr };

inline const char* to_string(Scale s) { return s == Scale::lr ? "lr" : "hr"; }

inline std::optional<Scale> scale_from_string(const std::string& s) {
    if (s == "lr" || s == "LR") return Scale::lr;
    if (s == "hr" || s == "HR") return Scale::hr;
    return std::nullopt;
}

enum class Split : std::uint8_t { train, val, test, test2, unassigned };

inline const char* to_string(Split s) {
    switch (s) {
        case Split::train: return "train";
        case Split::val: return "val";
        case Split::test: return "test";
        case Split::test2: return "test2";
        default: return "unassigned";
    }
}

inline std::optional<Split> split_from_string(const std::string& s) {
    if (s == "train") return Split::train;
    if (s == "val") return Split::val;
    if (s == "test") return Split::test;
    if (s == "test2") return Split::test2;
    if (s == "unassigned") return Split::unassigned;
    return std::nullopt;
}

/// Sampling weights for the drawable question types. rural_urban is never
/// drawn by weight (it is pinned to the first slot at LR) and area only
/// applies at HR; inapplicable weights are ignored.
struct QTypeWeights {
    double count = 1.0;
    double presence = 1.0;
    double comparison = 1.0;
    double area = 1.0;
};

/// Explicit source extent; alternative to carving the collection bounds
/// into a source_grid.
struct SourceSpec {
    std::string id;
    Rect rect;
};

struct GenerationProfile {
    Scale scale = Scale::lr;
    std::uint64_t seed = 0;
    std::uint32_t questions_per_image = 100;
    double attribute_prob = 0.5;
    double relation_prob = 0.3;
    QTypeWeights qtype_weights;
    SizeProfile size_profile;         // LR 3000/10000, HR 100/500
    ShapeConfig shape_config;
    std::uint32_t rural_urban_threshold = 100;  ///< buildings, inclusive
    std::uint32_t max_count = 89;               ///< HR raw-count ceiling

    // Tiling and splitting (dataset assembly).
    std::uint32_t tile_pixels = 256;
    double resolution = 10.0;                   ///< m/px
    std::uint32_t source_grid_rows = 3;
    std::uint32_t source_grid_cols = 3;
    std::vector<SourceSpec> sources;            ///< overrides source_grid if set
    std::map<Split, double> split_fractions;
    std::string templates_file;                 ///< optional custom wording table
};

inline GenerationProfile profile_defaults(Scale scale) {
    GenerationProfile p;
    p.scale = scale;
    if (scale == Scale::lr) {
        p.size_profile = {3000.0, 10000.0};
        p.tile_pixels = 256;
        p.resolution = 10.0;
        p.split_fractions = {{Split::train, 0.778}, {Split::val, 0.111}, {Split::test, 0.111}};
    } else {
        p.size_profile = {100.0, 500.0};
        p.tile_pixels = 512;
        p.resolution = 0.15;
        p.split_fractions = {{Split::train, 0.615},
                             {Split::val, 0.112},
                             {Split::test, 0.205},
                             {Split::test2, 0.068}};
    }
    return p;
}

inline void validate(const GenerationProfile& p) {
    const auto in_unit = [](double x) { return x >= 0.0 && x <= 1.0; };
    if (!in_unit(p.attribute_prob) || !in_unit(p.relation_prob))
        throw ConfigError("attribute_prob and relation_prob must lie in [0, 1]");
    if (p.questions_per_image < 1) throw ConfigError("questions_per_image must be >= 1");
    const auto& w = p.qtype_weights;
    for (const double v : {w.count, w.presence, w.comparison, w.area})
        if (!(v >= 0.0)) throw ConfigError("qtype weights must be nonnegative");
    const double drawable =
        w.count + w.presence + w.comparison + (p.scale == Scale::hr ? w.area : 0.0);
    if (!(drawable > 0.0)) throw ConfigError("no drawable question type has positive weight");
    if (!(p.size_profile.small_max > 0.0 && p.size_profile.small_max < p.size_profile.medium_max))
        throw ConfigError("size_profile requires 0 < small_max < medium_max");
    for (const double v :
         {p.shape_config.circle_isoperimetric_min, p.shape_config.circle_coverage_min,
          p.shape_config.square_window_lo, p.shape_config.square_window_hi,
          p.shape_config.rectangle_rectangularity_min})
        if (!(v > 0.0 && v <= 1.0)) throw ConfigError("shape thresholds must lie in (0, 1]");
    if (p.shape_config.square_window_lo > p.shape_config.square_window_hi)
        throw ConfigError("square window is empty");
    if (p.scale == Scale::hr && p.max_count < 1) throw ConfigError("max_count must be >= 1");
    if (p.tile_pixels < 1 || !(p.resolution > 0.0))
        throw ConfigError("tile_pixels and resolution must be positive");
    if (p.sources.empty() && (p.source_grid_rows < 1 || p.source_grid_cols < 1))
        throw ConfigError("source_grid must have at least one cell");
    for (const SourceSpec& s : p.sources)
        if (s.id.empty() || !s.rect.valid() || !(s.rect.area() > 0.0))
            throw ConfigError("each source needs an id and a positive-area rect");
    double total = 0.0;
    for (const auto& [split, f] : p.split_fractions) {
        if (split == Split::unassigned) throw ConfigError("cannot allocate to 'unassigned'");
        if (!(f >= 0.0)) throw ConfigError("split fractions must be nonnegative");
        total += f;
    }
    if (p.split_fractions.empty() || std::abs(total - 1.0) > 1e-9)
        throw ConfigError("split fractions must sum to 1");
}

namespace detail {

inline double require_number(const nlohmann::json& j, const std::string& key) {
    if (!j.is_number()) throw ConfigError("profile key '" + key + "' must be a number");
    return j.get<double>();
}

inline std::uint32_t require_count(const nlohmann::json& j, const std::string& key) {
    if (!j.is_number_unsigned()) throw ConfigError("profile key '" + key + "' must be a nonnegative integer");
    return j.get<std::uint32_t>();
}

}  // namespace detail

inline GenerationProfile profile_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw ConfigError("profile: expected a JSON object");
    if (!doc.contains("scale") || !doc["scale"].is_string())
        throw ConfigError("profile: missing 'scale' (\"lr\" or \"hr\")");
    const auto scale = scale_from_string(doc["scale"].get<std::string>());
    if (!scale) throw ConfigError("profile: scale must be \"lr\" or \"hr\"");
    GenerationProfile p = profile_defaults(*scale);

    static const std::set<std::string> known = {
        "scale", "seed", "questions_per_image", "attribute_prob", "relation_prob",
        "qtype_weights", "size_profile", "shape_config", "rural_urban_threshold",
        "max_count", "tile_pixels", "resolution", "source_grid", "sources",
        "split_fractions", "templates_file"};
    for (const auto& [key, value] : doc.items())
        if (!known.count(key)) throw ConfigError("profile: unknown key '" + key + "'");

    if (doc.contains("seed")) {
        if (!doc["seed"].is_number_integer() && !doc["seed"].is_number_unsigned())
            throw ConfigError("profile: seed must be an integer");
        p.seed = doc["seed"].get<std::uint64_t>();
    }
    if (doc.contains("questions_per_image"))
        p.questions_per_image = detail::require_count(doc["questions_per_image"], "questions_per_image");
    if (doc.contains("attribute_prob"))
        p.attribute_prob = detail::require_number(doc["attribute_prob"], "attribute_prob");
    if (doc.contains("relation_prob"))
        p.relation_prob = detail::require_number(doc["relation_prob"], "relation_prob");
    if (doc.contains("qtype_weights")) {
        const auto& w = doc["qtype_weights"];
        if (!w.is_object()) throw ConfigError("profile: qtype_weights must be an object");
        for (const auto& [key, value] : w.items()) {
            const double v = detail::require_number(value, "qtype_weights." + key);
            if (key == "count") p.qtype_weights.count = v;
            else if (key == "presence") p.qtype_weights.presence = v;
            else if (key == "comparison") p.qtype_weights.comparison = v;
            else if (key == "area") p.qtype_weights.area = v;
            else if (key != "rural_urban")  // rural_urban accepted, ignored
                throw ConfigError("profile: unknown qtype weight '" + key + "'");
        }
    }
    if (doc.contains("size_profile")) {
        const auto& s = doc["size_profile"];
        if (!s.is_object()) throw ConfigError("profile: size_profile must be an object");
        if (s.contains("small_max"))
            p.size_profile.small_max = detail::require_number(s["small_max"], "size_profile.small_max");
        if (s.contains("medium_max"))
            p.size_profile.medium_max = detail::require_number(s["medium_max"], "size_profile.medium_max");
    }
    if (doc.contains("shape_config")) {
        const auto& s = doc["shape_config"];
        if (!s.is_object()) throw ConfigError("profile: shape_config must be an object");
        const auto opt = [&s](const char* key, double& out) {
            if (s.contains(key)) out = detail::require_number(s[key], std::string("shape_config.") + key);
        };
        opt("circle_isoperimetric_min", p.shape_config.circle_isoperimetric_min);
        opt("circle_coverage_min", p.shape_config.circle_coverage_min);
        opt("square_window_lo", p.shape_config.square_window_lo);
        opt("square_window_hi", p.shape_config.square_window_hi);
        opt("rectangle_rectangularity_min", p.shape_config.rectangle_rectangularity_min);
    }
    if (doc.contains("rural_urban_threshold"))
        p.rural_urban_threshold = detail::require_count(doc["rural_urban_threshold"], "rural_urban_threshold");
    if (doc.contains("max_count")) p.max_count = detail::require_count(doc["max_count"], "max_count");
    if (doc.contains("tile_pixels")) p.tile_pixels = detail::require_count(doc["tile_pixels"], "tile_pixels");
    if (doc.contains("resolution"))
        p.resolution = detail::require_number(doc["resolution"], "resolution");
    if (doc.contains("source_grid")) {
        const auto& g = doc["source_grid"];
        if (!g.is_object() || !g.contains("rows") || !g.contains("cols"))
            throw ConfigError("profile: source_grid needs {rows, cols}");
        p.source_grid_rows = detail::require_count(g["rows"], "source_grid.rows");
        p.source_grid_cols = detail::require_count(g["cols"], "source_grid.cols");
    }
    if (doc.contains("sources")) {
        if (!doc["sources"].is_array()) throw ConfigError("profile: sources must be an array");
        for (const auto& s : doc["sources"]) {
            if (!s.is_object() || !s.contains("id") || !s["id"].is_string())
                throw ConfigError("profile: each source needs a string id");
            SourceSpec src;
            src.id = s["id"].get<std::string>();
            for (const char* key : {"min_x", "min_y", "max_x", "max_y"})
                if (!s.contains(key))
                    throw ConfigError("profile: source '" + src.id + "' missing " + key);
            src.rect = {detail::require_number(s["min_x"], "sources.min_x"),
                        detail::require_number(s["min_y"], "sources.min_y"),
                        detail::require_number(s["max_x"], "sources.max_x"),
                        detail::require_number(s["max_y"], "sources.max_y")};
            p.sources.push_back(std::move(src));
        }
    }
    if (doc.contains("split_fractions")) {
        const auto& f = doc["split_fractions"];
        if (!f.is_object()) throw ConfigError("profile: split_fractions must be an object");
        p.split_fractions.clear();
        for (const auto& [key, value] : f.items()) {
            const auto split = split_from_string(key);
            if (!split) throw ConfigError("profile: unknown split '" + key + "'");
            p.split_fractions[*split] = detail::require_number(value, "split_fractions." + key);
        }
    }
    if (doc.contains("templates_file")) {
        if (!doc["templates_file"].is_string())
            throw ConfigError("profile: templates_file must be a string path");
        p.templates_file = doc["templates_file"].get<std::string>();
    }

    validate(p);
    return p;
}

/// Apply one `--set key=value` override onto the raw profile JSON. Dotted
/// keys descend into objects; values parse as JSON when possible, else as
/// strings ("--set scale=hr" works unquoted).
inline void apply_override(nlohmann::json& doc, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ConfigError("override must look like key=value: '" + assignment + "'");
    const std::string path = assignment.substr(0, eq);
    const std::string raw = assignment.substr(eq + 1);

    nlohmann::json value = nlohmann::json::parse(raw, nullptr, false);
    if (value.is_discarded()) value = raw;

    nlohmann::json* node = &doc;
    std::size_t start = 0;
    while (true) {
        const auto dot = path.find('.', start);
        const std::string key = path.substr(start, dot - start);
        if (key.empty()) throw ConfigError("override has an empty path segment: '" + path + "'");
        if (dot == std::string::npos) {
            (*node)[key] = std::move(value);
            return;
        }
        node = &(*node)[key];
        start = dot + 1;
    }
}

inline nlohmann::json profile_to_json(const GenerationProfile& p) {
    nlohmann::json j;
    j["scale"] = to_string(p.scale);
    j["seed"] = p.seed;
    j["questions_per_image"] = p.questions_per_image;
    j["attribute_prob"] = p.attribute_prob;
    j["relation_prob"] = p.relation_prob;
    j["qtype_weights"] = {{"count", p.qtype_weights.count},
                          {"presence", p.qtype_weights.presence},
                          {"comparison", p.qtype_weights.comparison},
                          {"area", p.qtype_weights.area}};
    j["size_profile"] = {{"small_max", p.size_profile.small_max},
                         {"medium_max", p.size_profile.medium_max}};
    j["shape_config"] = {
        {"circle_isoperimetric_min", p.shape_config.circle_isoperimetric_min},
        {"circle_coverage_min", p.shape_config.circle_coverage_min},
        {"square_window_lo", p.shape_config.square_window_lo},
        {"square_window_hi", p.shape_config.square_window_hi},
        {"rectangle_rectangularity_min", p.shape_config.rectangle_rectangularity_min}};
    j["rural_urban_threshold"] = p.rural_urban_threshold;
    j["max_count"] = p.max_count;
    j["tile_pixels"] = p.tile_pixels;
    j["resolution"] = p.resolution;
    if (p.sources.empty()) {
        j["source_grid"] = {{"rows", p.source_grid_rows}, {"cols", p.source_grid_cols}};
    } else {
        nlohmann::json arr = nlohmann::json::array();
        for (const SourceSpec& s : p.sources)
            arr.push_back({{"id", s.id},
                           {"min_x", s.rect.min_x},
                           {"min_y", s.rect.min_y},
                           {"max_x", s.rect.max_x},
                           {"max_y", s.rect.max_y}});
        j["sources"] = std::move(arr);
    }
    nlohmann::json fractions;
    for (const auto& [split, f] : p.split_fractions) fractions[to_string(split)] = f;
    j["split_fractions"] = std::move(fractions);
    if (!p.templates_file.empty()) j["templates_file"] = p.templates_file;
    return j;
}

inline GenerationProfile load_profile(const std::string& path,
                                      const std::vector<std::string>& overrides = {}) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open profile: " + path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
    for (const std::string& o : overrides) apply_override(doc, o);
    return profile_from_json(doc);
}

}  // namespace geoqa
