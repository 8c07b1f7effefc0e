#pragma once

/// @file question.hpp
/// Structured question forms. An ElementSpec names a catalog category with
/// an optional attribute and an optional relative-position clause; a
/// QuestionSpec wraps one or two elements into a typed question. The JSON
/// form stored alongside each dataset row round-trips exactly.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include <json.hpp>

#include "geoqa/catalog.hpp"
#include "geoqa/errors.hpp"
#include "geoqa/geometry.hpp"

namespace geoqa {

/// Shape or size refinement. ShapeClass::none is not a valid attribute.
using Attribute = std::variant<ShapeClass, SizeClass>;

inline bool is_shape_attribute(const Attribute& a) { return a.index() == 0; }

inline std::string attribute_label(const Attribute& a) {
    return is_shape_attribute(a) ? to_string(std::get<ShapeClass>(a))
                                 : to_string(std::get<SizeClass>(a));
}

inline std::optional<Attribute> attribute_from_label(const std::string& label) {
    if (label == "square") return Attribute{ShapeClass::square};
    if (label == "rectangular") return Attribute{ShapeClass::rectangular};
    if (label == "circular") return Attribute{ShapeClass::circular};
    if (label == "small") return Attribute{SizeClass::small};
    if (label == "medium") return Attribute{SizeClass::medium};
    if (label == "large") return Attribute{SizeClass::large};
    return std::nullopt;
}

/// A category with optional attribute and optional relation. The relation
/// target is a plain (category, attribute) pair, so nesting depth > 1 is
/// unrepresentable by construction.
struct ElementSpec {
    /// Relation clause: the element stands in `kind` to some object
    /// matching (category, attribute).
    struct Relation {
        RelationKind kind = RelationKind::next_to;
        std::uint32_t category = 0;
        std::optional<Attribute> attribute;
        bool operator==(const Relation&) const = default;
    };

    std::uint32_t category = 0;  ///< index into the element catalog
    std::optional<Attribute> attribute;
    std::optional<Relation> relation;

    bool operator==(const ElementSpec&) const = default;

    /// The relation target as a standalone element (no relation of its own).
    [[nodiscard]] ElementSpec related_element() const {
        return ElementSpec{relation->category, relation->attribute, std::nullopt};
    }
};

enum class QuestionType : std::uint8_t { count, presence, comparison, area, rural_urban };

inline const char* to_string(QuestionType t) {
    switch (t) {
        case QuestionType::count: return "count";
        case QuestionType::presence: return "presence";
        case QuestionType::comparison: return "comparison";
        case QuestionType::area: return "area";
        default: return "rural_urban";
    }
}

inline std::optional<QuestionType> question_type_from_string(const std::string& s) {
    if (s == "count") return QuestionType::count;
    if (s == "presence") return QuestionType::presence;
    if (s == "comparison") return QuestionType::comparison;
    if (s == "area") return QuestionType::area;
    if (s == "rural_urban") return QuestionType::rural_urban;
    return std::nullopt;
}

enum class ComparisonOp : std::uint8_t { less_than, equals_to, more_than };

inline const char* to_string(ComparisonOp op) {
    switch (op) {
        case ComparisonOp::less_than: return "less_than";
        case ComparisonOp::equals_to: return "equals_to";
        default: return "more_than";
    }
}

inline std::optional<ComparisonOp> comparison_op_from_string(const std::string& s) {
    if (s == "less_than") return ComparisonOp::less_than;
    if (s == "equals_to") return ComparisonOp::equals_to;
    if (s == "more_than") return ComparisonOp::more_than;
    return std::nullopt;
}

struct QuestionSpec {
    QuestionType qtype = QuestionType::count;
    std::optional<ElementSpec> element;        ///< absent for rural_urban
    std::optional<ComparisonOp> comparison_op; ///< comparison only
    std::optional<ElementSpec> second_element; ///< comparison only
    std::uint32_t template_id = 0;
    std::string text;

    bool operator==(const QuestionSpec&) const = default;
};

/// Structural invariants shared by generated and parsed questions.
inline void validate(const QuestionSpec& q) {
    const bool cmp = q.qtype == QuestionType::comparison;
    if (cmp != q.comparison_op.has_value() || cmp != q.second_element.has_value())
        throw ValidationError("comparison_op/second_element present iff qtype is comparison");
    if ((q.qtype == QuestionType::rural_urban) == q.element.has_value())
        throw ValidationError("element absent iff qtype is rural_urban");
    if (q.text.empty()) throw ValidationError("question text is empty");
    for (const auto* e : {&q.element, &q.second_element}) {
        if (!*e) continue;
        if ((*e)->attribute && is_shape_attribute(*(*e)->attribute) &&
            std::get<ShapeClass>(*(*e)->attribute) == ShapeClass::none)
            throw ValidationError("'none' is not a valid shape attribute");
        if ((*e)->relation && q.qtype == QuestionType::comparison)
            throw ValidationError("comparison elements carry no relation clause");
    }
}

// --- JSON form ------------------------------------------------------------
// Categories are stored by catalog id string; optional fields are omitted
// when absent. Question text lives in the dataset row, not in the spec
// object, and is re-attached on parse.

inline nlohmann::json attribute_to_json(const Attribute& a) {
    return {{"kind", is_shape_attribute(a) ? "shape" : "size"}, {"label", attribute_label(a)}};
}

inline Attribute attribute_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("label") || !j["label"].is_string())
        throw ParseError("attribute: expected {kind, label}");
    const auto a = attribute_from_label(j["label"].get<std::string>());
    if (!a) throw ParseError("attribute: unknown label '" + j["label"].get<std::string>() + "'");
    const std::string kind = j.value("kind", "");
    if (kind != (is_shape_attribute(*a) ? "shape" : "size"))
        throw ParseError("attribute: kind/label mismatch");
    return *a;
}

inline nlohmann::json element_to_json(const ElementSpec& e, const ElementCatalog& catalog) {
    nlohmann::json j{{"category", catalog.at(e.category).category}};
    if (e.attribute) j["attribute"] = attribute_to_json(*e.attribute);
    if (e.relation) {
        nlohmann::json r{{"kind", to_string(e.relation->kind)},
                         {"category", catalog.at(e.relation->category).category}};
        if (e.relation->attribute) r["attribute"] = attribute_to_json(*e.relation->attribute);
        j["relation"] = std::move(r);
    }
    return j;
}

inline ElementSpec element_from_json(const nlohmann::json& j, const ElementCatalog& catalog) {
    if (!j.is_object() || !j.contains("category") || !j["category"].is_string())
        throw ParseError("element: expected {category, ...}");
    const auto resolve = [&catalog](const std::string& id) {
        const auto k = catalog.index_of(id);
        if (!k) throw ParseError("element: unknown category '" + id + "'");
        return *k;
    };
    ElementSpec e;
    e.category = resolve(j["category"].get<std::string>());
    if (j.contains("attribute")) e.attribute = attribute_from_json(j["attribute"]);
    if (j.contains("relation")) {
        const auto& r = j["relation"];
        if (!r.is_object() || !r.contains("kind") || !r.contains("category"))
            throw ParseError("element: relation needs {kind, category}");
        const auto kind = relation_from_string(r["kind"].get<std::string>());
        if (!kind) throw ParseError("element: unknown relation '" + r["kind"].get<std::string>() + "'");
        ElementSpec::Relation rel;
        rel.kind = *kind;
        rel.category = resolve(r["category"].get<std::string>());
        if (r.contains("attribute")) rel.attribute = attribute_from_json(r["attribute"]);
        e.relation = std::move(rel);
    }
    return e;
}

inline nlohmann::json question_spec_to_json(const QuestionSpec& q, const ElementCatalog& catalog) {
    nlohmann::json j{{"type", to_string(q.qtype)}, {"template", q.template_id}};
    if (q.element) j["element"] = element_to_json(*q.element, catalog);
    if (q.comparison_op) j["op"] = to_string(*q.comparison_op);
    if (q.second_element) j["second_element"] = element_to_json(*q.second_element, catalog);
    return j;
}

inline QuestionSpec question_spec_from_json(const nlohmann::json& j, const ElementCatalog& catalog,
                                            std::string text) {
    if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
        throw ParseError("question spec: expected {type, ...}");
    const auto qtype = question_type_from_string(j["type"].get<std::string>());
    if (!qtype) throw ParseError("question spec: unknown type '" + j["type"].get<std::string>() + "'");
    QuestionSpec q;
    q.qtype = *qtype;
    q.template_id = j.value("template", 0u);
    if (j.contains("element")) q.element = element_from_json(j["element"], catalog);
    if (j.contains("op")) {
        const auto op = comparison_op_from_string(j["op"].get<std::string>());
        if (!op) throw ParseError("question spec: unknown op '" + j["op"].get<std::string>() + "'");
        q.comparison_op = op;
    }
    if (j.contains("second_element"))
        q.second_element = element_from_json(j["second_element"], catalog);
    q.text = std::move(text);
    validate(q);
    return q;
}

}  // namespace geoqa
