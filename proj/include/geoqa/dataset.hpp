#pragma once

/// @file dataset.hpp
/// Triplet records and their JSON-Lines serialization. One line per
/// triplet, UTF-8, keys exactly {question_id, tile_id, type, question,
/// answer, split, spec}; read(write(x)) == x.

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "geoqa/errors.hpp"
#include "geoqa/profile.hpp"
#include "geoqa/question.hpp"
#include "geoqa/tiling.hpp"

namespace geoqa {

struct QATriplet {
    std::string question_id;
    std::string tile_id;
    QuestionType qtype = QuestionType::count;
    std::string question;
    std::string answer;
    Split split = Split::unassigned;
    nlohmann::json spec;  ///< structured question form (question.hpp JSON)

    bool operator==(const QATriplet&) const = default;
};

inline nlohmann::json triplet_to_json(const QATriplet& t) {
    return {{"question_id", t.question_id}, {"tile_id", t.tile_id},
            {"type", to_string(t.qtype)},   {"question", t.question},
            {"answer", t.answer},           {"split", to_string(t.split)},
            {"spec", t.spec}};
}

inline QATriplet triplet_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ParseError("triplet: not a JSON object");
    for (const char* key : {"question_id", "tile_id", "type", "question", "answer", "split", "spec"})
        if (!j.contains(key)) throw ParseError(std::string("triplet: missing key '") + key + "'");
    QATriplet t;
    t.question_id = j["question_id"].get<std::string>();
    t.tile_id = j["tile_id"].get<std::string>();
    const auto qtype = question_type_from_string(j["type"].get<std::string>());
    if (!qtype) throw ParseError("triplet: unknown type '" + j["type"].get<std::string>() + "'");
    t.qtype = *qtype;
    t.question = j["question"].get<std::string>();
    t.answer = j["answer"].get<std::string>();
    const auto split = split_from_string(j["split"].get<std::string>());
    if (!split) throw ParseError("triplet: unknown split '" + j["split"].get<std::string>() + "'");
    t.split = *split;
    t.spec = j["spec"];
    return t;
}

inline void write_dataset(const std::vector<QATriplet>& triplets, const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // binary: byte-identical across platforms
    if (!out) throw IoError("cannot write dataset: " + path);
    for (const QATriplet& t : triplets) out << triplet_to_json(t).dump() << "\n";
    out.flush();
    if (!out) throw IoError("failed while writing dataset: " + path);
}

inline std::vector<QATriplet> read_dataset(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open dataset: " + path);
    std::vector<QATriplet> triplets;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded())
            throw ParseError(path + ":" + std::to_string(lineno) + ": malformed JSON line");
        try {
            triplets.push_back(triplet_from_json(j));
        } catch (const ParseError& e) {
            throw ParseError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return triplets;
}

/// Stable content hash of the catalog, recorded in the manifest so a
/// dataset can be tied to the exact category table that produced it.
inline std::string catalog_hash(const ElementCatalog& catalog) {
    std::string blob;
    for (const CatalogEntry& e : catalog.entries()) {
        blob += e.category;
        blob += '|';
        blob += to_string(e.layer);
        blob += '|';
        for (const std::string& s : e.subtypes) {
            blob += s;
            blob += ',';
        }
        blob += '|';
        blob += e.singular;
        blob += '|';
        blob += e.plural;
        blob += '\n';
    }
    std::ostringstream hex;
    hex << "fnv1a64:" << std::hex << detail::fnv1a64(blob);
    return hex.str();
}

/// Everything an external tool needs to cut matching imagery and audit the
/// build: profile echo, split map, and every tile footprint.
inline nlohmann::json build_manifest(const GenerationProfile& profile,
                                     const ElementCatalog& catalog,
                                     const std::map<std::string, Split>& splits,
                                     const std::vector<TileFootprint>& tiles) {
    nlohmann::json j;
    j["seed"] = profile.seed;
    j["scale"] = to_string(profile.scale);
    j["profile"] = profile_to_json(profile);
    j["catalog_hash"] = catalog_hash(catalog);
    nlohmann::json split_map;
    for (const auto& [source, split] : splits) split_map[source] = to_string(split);
    j["splits"] = std::move(split_map);
    nlohmann::json tile_arr = nlohmann::json::array();
    for (const TileFootprint& t : tiles)
        tile_arr.push_back({{"id", t.id},
                            {"source_id", t.source_id},
                            {"row", t.row},
                            {"col", t.col},
                            {"min_x", t.rect.min_x},
                            {"min_y", t.rect.min_y},
                            {"max_x", t.rect.max_x},
                            {"max_y", t.rect.max_y},
                            {"split", to_string(t.split)}});
    j["tiles"] = std::move(tile_arr);
    return j;
}

}  // namespace geoqa
