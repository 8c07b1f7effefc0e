#pragma once

/// @file catalog.hpp
/// The element catalog maps question vocabulary ("roads", "water areas",
/// "commercial buildings", ...) onto (layer, subtype set) selectors over
/// the object collection. An empty subtype set matches every subtype of
/// the layer. Category order is part of the deterministic draw contract:
/// category k of the default catalog is the same in every build.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "geoqa/collection.hpp"
#include "geoqa/errors.hpp"

namespace geoqa {

struct CatalogEntry {
    std::string category;        ///< stable id, e.g. "commercial_building"
    Layer layer = Layer::road;   ///< source layer the selector reads
    std::set<std::string> subtypes;  ///< empty = any subtype
    std::string singular;        ///< "road", "commercial building"
    std::string plural;          ///< "roads", "commercial buildings"

    [[nodiscard]] bool matches(const GeoObject& obj) const {
        return obj.layer == layer && (subtypes.empty() || subtypes.count(obj.subtype) > 0);
    }
};

class ElementCatalog {
public:
    ElementCatalog() = default;

    explicit ElementCatalog(std::vector<CatalogEntry> entries) : entries_(std::move(entries)) {
        if (entries_.empty()) throw ConfigError("element catalog is empty");
        std::set<std::string> ids;
        for (const CatalogEntry& e : entries_) {
            if (e.category.empty()) throw ConfigError("catalog entry with empty category id");
            if (!ids.insert(e.category).second)
                throw ConfigError("duplicate catalog category '" + e.category + "'");
            if (e.singular.empty() || e.plural.empty())
                throw ConfigError("catalog category '" + e.category + "' lacks noun phrases");
        }
    }

    [[nodiscard]] const std::vector<CatalogEntry>& entries() const { return entries_; }
    [[nodiscard]] std::size_t size() const { return entries_.size(); }
    [[nodiscard]] const CatalogEntry& at(std::size_t k) const { return entries_.at(k); }

    [[nodiscard]] std::optional<std::uint32_t> index_of(const std::string& category) const {
        for (std::size_t k = 0; k < entries_.size(); ++k)
            if (entries_[k].category == category) return std::uint32_t(k);
        return std::nullopt;
    }

    /// Lookup by noun phrase, used when parsing question text back into a
    /// structured form. Matches either the singular or plural rendering.
    [[nodiscard]] std::optional<std::uint32_t> index_of_phrase(const std::string& phrase) const {
        for (std::size_t k = 0; k < entries_.size(); ++k)
            if (entries_[k].singular == phrase || entries_[k].plural == phrase)
                return std::uint32_t(k);
        return std::nullopt;
    }

private:
    std::vector<CatalogEntry> entries_;
};

/// Nine categories; buildings split by function following the commercial
/// vs. residential subtype groups, land uses split by zoning value.
inline ElementCatalog default_catalog() {
    std::vector<CatalogEntry> entries = {
        {"road", Layer::road, {}, "road", "roads"},
        {"water_area", Layer::water_area, {}, "water area", "water areas"},
        {"commercial_building",
         Layer::building,
         {"retail", "supermarket", "commercial", "office", "mall"},
         "commercial building",
         "commercial buildings"},
        {"residential_building",
         Layer::building,
         {"house", "apartments", "residential", "detached"},
         "residential building",
         "residential buildings"},
        {"residential_area", Layer::land_use, {"residential"}, "residential area",
         "residential areas"},
        {"commercial_area", Layer::land_use, {"commercial", "retail"}, "commercial area",
         "commercial areas"},
        {"industrial_area", Layer::land_use, {"industrial"}, "industrial area",
         "industrial areas"},
        {"construction_area", Layer::land_use, {"construction"}, "construction area",
         "construction areas"},
        {"religious_place", Layer::building, {"church", "chapel", "mosque", "synagogue", "temple"},
         "religious place", "religious places"},
    };
    return ElementCatalog(std::move(entries));
}

}  // namespace geoqa
