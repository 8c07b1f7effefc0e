#pragma once

/// @file templates.hpp
/// Declarative question templates. Patterns hold three placeholder kinds:
/// {A} and {B} render an element as a plural noun phrase, {a} as a singular
/// phrase with indefinite article. Relation clauses render inline, e.g.
/// "small roads on the left of a water area". parse() inverts render(); a
/// parse is accepted only if re-rendering reproduces the input text
/// byte-for-byte, which rules out ambiguous matches.

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "geoqa/catalog.hpp"
#include "geoqa/errors.hpp"
#include "geoqa/question.hpp"

namespace geoqa {

namespace detail {

inline const char* relation_phrase(RelationKind k) {
    switch (k) {
        case RelationKind::left_of: return "on the left of";
        case RelationKind::top_of: return "on the top of";
        case RelationKind::right_of: return "on the right of";
        case RelationKind::bottom_of: return "on the bottom of";
        default: return "next to";
    }
}

inline const char* indefinite_article(std::string_view next_word) {
    if (next_word.empty()) return "a";
    switch (next_word.front()) {
        case 'a': case 'e': case 'i': case 'o': case 'u':
        case 'A': case 'E': case 'I': case 'O': case 'U': return "an";
        default: return "a";
    }
}

inline constexpr std::array<RelationKind, 5> kAllRelations = {
    RelationKind::left_of, RelationKind::top_of, RelationKind::right_of,
    RelationKind::bottom_of, RelationKind::next_to};

inline constexpr std::array<const char*, 6> kAttributeLabels = {
    "square", "rectangular", "circular", "small", "medium", "large"};

}  // namespace detail

/// "a water area", "an industrial area", "a small road": article chosen by
/// the first following word. No relation clause (relation targets are flat).
inline std::string render_singular_head(std::uint32_t category,
                                        const std::optional<Attribute>& attribute,
                                        const ElementCatalog& catalog) {
    const std::string noun = catalog.at(category).singular;
    std::string rest = attribute ? attribute_label(*attribute) + " " + noun : noun;
    return std::string(detail::indefinite_article(rest)) + " " + rest;
}

/// Plural noun phrase with optional relation clause appended.
inline std::string render_plural(const ElementSpec& e, const ElementCatalog& catalog) {
    std::string out =
        e.attribute ? attribute_label(*e.attribute) + " " + catalog.at(e.category).plural
                    : catalog.at(e.category).plural;
    if (e.relation)
        out += std::string(" ") + detail::relation_phrase(e.relation->kind) + " " +
               render_singular_head(e.relation->category, e.relation->attribute, catalog);
    return out;
}

/// Singular phrase with article and optional relation clause.
inline std::string render_singular(const ElementSpec& e, const ElementCatalog& catalog) {
    std::string out = render_singular_head(e.category, e.attribute, catalog);
    if (e.relation)
        out += std::string(" ") + detail::relation_phrase(e.relation->kind) + " " +
               render_singular_head(e.relation->category, e.relation->attribute, catalog);
    return out;
}

struct Template {
    QuestionType qtype = QuestionType::count;
    std::uint32_t id = 0;                 ///< template family within the type
    std::optional<ComparisonOp> op;       ///< comparison wording is op-specific
    std::string pattern;                  ///< literal text with {A} {B} {a}
};

class TemplateTable {
public:
    TemplateTable() = default;

    explicit TemplateTable(std::vector<Template> templates) : templates_(std::move(templates)) {
        for (const Template& t : templates_) {
            const bool has_a = t.pattern.find("{A}") != std::string::npos;
            const bool has_b = t.pattern.find("{B}") != std::string::npos;
            const bool has_s = t.pattern.find("{a}") != std::string::npos;
            const bool cmp = t.qtype == QuestionType::comparison;
            if (cmp != t.op.has_value())
                throw ConfigError("template: op present iff type is comparison");
            if (cmp && !(has_a && has_b))
                throw ConfigError("comparison template needs {A} and {B}");
            if (!cmp && has_b) throw ConfigError("{B} is only valid in comparison templates");
            if (t.qtype == QuestionType::rural_urban && (has_a || has_s || has_b))
                throw ConfigError("rural_urban template takes no placeholders");
            if ((t.qtype == QuestionType::count || t.qtype == QuestionType::area ||
                 t.qtype == QuestionType::presence) &&
                !(has_a || has_s))
                throw ConfigError("template for " + std::string(to_string(t.qtype)) +
                                  " needs {A} or {a}");
        }
        for (const QuestionType qt :
             {QuestionType::count, QuestionType::presence, QuestionType::area,
              QuestionType::rural_urban})
            if (ids_for(qt, std::nullopt).empty())
                throw ConfigError(std::string("no template for type ") + to_string(qt));
        for (const ComparisonOp op :
             {ComparisonOp::less_than, ComparisonOp::equals_to, ComparisonOp::more_than})
            if (ids_for(QuestionType::comparison, op).empty())
                throw ConfigError(std::string("no comparison template for op ") + to_string(op));
    }

    [[nodiscard]] const std::vector<Template>& templates() const { return templates_; }

    /// Template ids applicable to (qtype, op), ascending. Draw uniformly
    /// from this list to pick a wording.
    [[nodiscard]] std::vector<std::uint32_t> ids_for(QuestionType qtype,
                                                     std::optional<ComparisonOp> op) const {
        std::vector<std::uint32_t> ids;
        for (const Template& t : templates_)
            if (t.qtype == qtype && (qtype != QuestionType::comparison || t.op == op))
                ids.push_back(t.id);
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        return ids;
    }

    /// Instantiate the question text for a spec whose template_id is set.
    [[nodiscard]] std::string render(const QuestionSpec& q, const ElementCatalog& catalog) const {
        const Template* t = find(q.qtype, q.template_id, q.comparison_op);
        if (!t)
            throw ConfigError("no template " + std::to_string(q.template_id) + " for type " +
                              to_string(q.qtype));
        std::string out = t->pattern;
        if (q.element) {
            substitute(out, "{A}", render_plural(*q.element, catalog));
            substitute(out, "{a}", render_singular(*q.element, catalog));
        }
        if (q.second_element) substitute(out, "{B}", render_plural(*q.second_element, catalog));
        return out;
    }

    /// Invert render: recover (qtype, elements, op, template_id) from text.
    /// Returns nullopt when no template matches exactly.
    [[nodiscard]] std::optional<QuestionSpec> parse(const std::string& text,
                                                    const ElementCatalog& catalog) const {
        for (const Template& t : templates_) {
            auto q = try_parse(t, text, catalog);
            if (q && render(*q, catalog) == text) return q;
        }
        return std::nullopt;
    }

    [[nodiscard]] nlohmann::json to_json() const {
        nlohmann::json arr = nlohmann::json::array();
        for (const Template& t : templates_) {
            nlohmann::json j{{"type", to_string(t.qtype)}, {"id", t.id}, {"pattern", t.pattern}};
            if (t.op) j["op"] = to_string(*t.op);
            arr.push_back(std::move(j));
        }
        return arr;
    }

    static TemplateTable from_json(const nlohmann::json& arr) {
        if (!arr.is_array()) throw ParseError("template table: expected an array");
        std::vector<Template> ts;
        for (const auto& j : arr) {
            Template t;
            const auto qt = question_type_from_string(j.value("type", ""));
            if (!qt) throw ParseError("template: unknown type '" + j.value("type", "") + "'");
            t.qtype = *qt;
            if (!j.contains("id") || !j["id"].is_number_unsigned())
                throw ParseError("template: missing integer id");
            t.id = j["id"].get<std::uint32_t>();
            if (!j.contains("pattern") || !j["pattern"].is_string())
                throw ParseError("template: missing pattern");
            t.pattern = j["pattern"].get<std::string>();
            if (j.contains("op")) {
                const auto op = comparison_op_from_string(j["op"].get<std::string>());
                if (!op) throw ParseError("template: unknown op '" + j.value("op", "") + "'");
                t.op = op;
            }
            ts.push_back(std::move(t));
        }
        return TemplateTable(std::move(ts));
    }

    static TemplateTable defaults();

private:
    [[nodiscard]] const Template* find(QuestionType qtype, std::uint32_t id,
                                       std::optional<ComparisonOp> op) const {
        for (const Template& t : templates_)
            if (t.qtype == qtype && t.id == id &&
                (qtype != QuestionType::comparison || t.op == op))
                return &t;
        return nullptr;
    }

    static void substitute(std::string& s, std::string_view key, const std::string& value) {
        const auto pos = s.find(key);
        if (pos != std::string::npos) s.replace(pos, key.size(), value);
    }

    /// Lowest-position relation phrase in s, if any.
    static std::optional<std::pair<RelationKind, std::size_t>> find_relation(
        const std::string& s) {
        std::optional<std::pair<RelationKind, std::size_t>> best;
        for (const RelationKind k : detail::kAllRelations) {
            const std::string needle = std::string(" ") + detail::relation_phrase(k) + " ";
            const auto pos = s.find(needle);
            if (pos != std::string::npos && (!best || pos < best->second)) best = {{k, pos}};
        }
        return best;
    }

    /// "[adjective ]noun" where noun is a catalog singular or plural.
    static std::optional<std::pair<std::uint32_t, std::optional<Attribute>>> parse_head(
        const std::string& s, const ElementCatalog& catalog) {
        if (auto cat = catalog.index_of_phrase(s)) return {{*cat, std::nullopt}};
        for (const char* label : detail::kAttributeLabels) {
            const std::string prefix = std::string(label) + " ";
            if (s.rfind(prefix, 0) != 0) continue;
            if (auto cat = catalog.index_of_phrase(s.substr(prefix.size())))
                return {{*cat, attribute_from_label(label)}};
        }
        return std::nullopt;
    }

    /// "a …"/"an …" head with no relation clause.
    static std::optional<std::pair<std::uint32_t, std::optional<Attribute>>>
    parse_singular_with_article(const std::string& s, const ElementCatalog& catalog) {
        for (const char* art : {"an ", "a "})
            if (s.rfind(art, 0) == 0) return parse_head(s.substr(std::string(art).size()), catalog);
        return std::nullopt;
    }

    static std::optional<ElementSpec> parse_element(const std::string& s,
                                                    const ElementCatalog& catalog,
                                                    bool singular_with_article) {
        std::string head = s;
        std::optional<ElementSpec::Relation> relation;
        if (const auto rel = find_relation(s)) {
            head = s.substr(0, rel->second);
            const std::string clause_sep =
                std::string(" ") + detail::relation_phrase(rel->first) + " ";
            const std::string target = s.substr(rel->second + clause_sep.size());
            const auto parsed = parse_singular_with_article(target, catalog);
            if (!parsed) return std::nullopt;
            relation = ElementSpec::Relation{rel->first, parsed->first, parsed->second};
        }
        const auto parsed = singular_with_article ? parse_singular_with_article(head, catalog)
                                                  : parse_head(head, catalog);
        if (!parsed) return std::nullopt;
        return ElementSpec{parsed->first, parsed->second, relation};
    }

    [[nodiscard]] std::optional<QuestionSpec> try_parse(const Template& t,
                                                        const std::string& text,
                                                        const ElementCatalog& catalog) const {
        // Split the pattern into literal segments around placeholders, then
        // match segments left to right taking the earliest occurrence.
        struct Piece {
            std::string literal;
            char placeholder;  // 'A', 'B', 'a' following the literal, or 0
        };
        std::vector<Piece> pieces;
        std::string pattern = t.pattern;
        while (true) {
            std::size_t best = std::string::npos;
            char ph = 0;
            for (const char* key : {"{A}", "{B}", "{a}"}) {
                const auto pos = pattern.find(key);
                if (pos < best) {
                    best = pos;
                    ph = key[1];
                }
            }
            if (best == std::string::npos) {
                pieces.push_back({pattern, 0});
                break;
            }
            pieces.push_back({pattern.substr(0, best), ph});
            pattern = pattern.substr(best + 3);
        }

        std::vector<std::pair<char, std::string>> captures;
        std::size_t pos = 0;
        for (std::size_t i = 0; i < pieces.size(); ++i) {
            const Piece& piece = pieces[i];
            if (i == 0) {
                if (text.rfind(piece.literal, 0) != 0) return std::nullopt;
                pos = piece.literal.size();
            } else {
                // Capture runs from pos to this literal. The final literal
                // must land at the end of the text.
                std::size_t at;
                if (i + 1 == pieces.size() && piece.placeholder == 0) {
                    if (text.size() < pos + piece.literal.size()) return std::nullopt;
                    at = text.size() - piece.literal.size();
                    if (text.compare(at, piece.literal.size(), piece.literal) != 0)
                        return std::nullopt;
                } else {
                    at = text.find(piece.literal, pos);
                    if (at == std::string::npos) return std::nullopt;
                }
                captures.back().second = text.substr(pos, at - pos);
                pos = at + piece.literal.size();
            }
            if (piece.placeholder != 0) captures.push_back({piece.placeholder, ""});
        }
        // The final piece is always a literal (possibly empty) and was
        // matched end-anchored, so any shortfall means a literal-only
        // pattern with trailing text.
        if (pos != text.size()) return std::nullopt;

        QuestionSpec q;
        q.qtype = t.qtype;
        q.template_id = t.id;
        q.comparison_op = t.op;
        for (const auto& [ph, captured] : captures) {
            auto element = parse_element(captured, catalog, ph == 'a');
            if (!element) return std::nullopt;
            if (ph == 'B')
                q.second_element = std::move(element);
            else
                q.element = std::move(element);
        }
        if (t.qtype == QuestionType::comparison && (!q.element || !q.second_element))
            return std::nullopt;
        q.text = text;
        return q;
    }

    std::vector<Template> templates_;
};

/// Count wordings are the published ones; the rest are authored here, at
/// least two per type. Comparison ids pair directional wordings: id 0 and 1
/// exist for less/more, id 2 only for equals.
inline TemplateTable TemplateTable::defaults() {
    using QT = QuestionType;
    using Op = ComparisonOp;
    std::vector<Template> ts = {
        {QT::count, 0, std::nullopt, "How many {A} are there?"},
        {QT::count, 1, std::nullopt, "What is the number of {A}?"},
        {QT::count, 2, std::nullopt, "What is the amount of {A}?"},
        {QT::presence, 0, std::nullopt, "Is there {a}?"},
        {QT::presence, 1, std::nullopt, "Are there any {A}?"},
        {QT::comparison, 0, Op::less_than, "Are there less {A} than {B}?"},
        {QT::comparison, 0, Op::more_than, "Are there more {A} than {B}?"},
        {QT::comparison, 1, Op::less_than,
         "Is the number of {A} lower than the number of {B}?"},
        {QT::comparison, 1, Op::more_than,
         "Is the number of {A} higher than the number of {B}?"},
        {QT::comparison, 2, Op::equals_to,
         "Is the number of {A} equal to the number of {B}?"},
        {QT::area, 0, std::nullopt, "What is the area covered by {A}?"},
        {QT::area, 1, std::nullopt, "What is the extent of {A}?"},
        {QT::rural_urban, 0, std::nullopt, "Is it a rural or an urban area?"},
    };
    return TemplateTable(std::move(ts));
}

}  // namespace geoqa
