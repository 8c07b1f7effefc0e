#pragma once

/// @file builder.hpp
/// Stochastic question construction. Each question slot owns an
/// independent random stream keyed by (seed, tile id, slot), so output is
/// identical no matter how tiles or slots are scheduled across workers.
///
/// Draw order is part of the format contract (changing it changes every
/// dataset): type; for comparison the operator, then both elements; for
/// element builds category, attribute branch, attribute kind, label,
/// relation branch, relation kind, related element; finally the template.

#include <cstdint>
#include <string>
#include <vector>

#include "geoqa/answers.hpp"
#include "geoqa/catalog.hpp"
#include "geoqa/errors.hpp"
#include "geoqa/profile.hpp"
#include "geoqa/question.hpp"
#include "geoqa/rng.hpp"
#include "geoqa/templates.hpp"

namespace geoqa {

namespace detail {

inline constexpr std::array<ShapeClass, 3> kShapeLabels = {
    ShapeClass::square, ShapeClass::rectangular, ShapeClass::circular};
inline constexpr std::array<SizeClass, 3> kSizeLabels = {SizeClass::small, SizeClass::medium,
                                                         SizeClass::large};

}  // namespace detail

/// Category uniform over the catalog; one optional attribute (shape vs
/// size uniform, then a label uniform); optionally a relation whose target
/// is built relation-free.
template <class RngT>
ElementSpec build_element(RngT& rng, const ElementCatalog& catalog,
                          const GenerationProfile& profile, bool allow_relation) {
    ElementSpec e;
    e.category = rng.uniform(std::uint32_t(catalog.size()));
    if (rng.bernoulli(profile.attribute_prob)) {
        if (rng.uniform(2) == 0)
            e.attribute = Attribute{detail::kShapeLabels[rng.uniform(3)]};
        else
            e.attribute = Attribute{detail::kSizeLabels[rng.uniform(3)]};
    }
    if (allow_relation && rng.bernoulli(profile.relation_prob)) {
        const RelationKind kind = detail::kAllRelations[rng.uniform(5)];
        const ElementSpec target = build_element(rng, catalog, profile, false);
        e.relation = ElementSpec::Relation{kind, target.category, target.attribute};
    }
    return e;
}

/// LR pins the first slot of every image to rural_urban (no draw); all
/// other slots draw from the scale's applicable types by weight.
template <class RngT>
QuestionType select_question_type(RngT& rng, const GenerationProfile& profile,
                                  bool is_first_question_of_image) {
    if (profile.scale == Scale::lr && is_first_question_of_image)
        return QuestionType::rural_urban;
    const QTypeWeights& w = profile.qtype_weights;
    std::vector<std::pair<QuestionType, double>> table = {
        {QuestionType::count, w.count},
        {QuestionType::presence, w.presence},
        {QuestionType::comparison, w.comparison},
    };
    if (profile.scale == Scale::hr) table.push_back({QuestionType::area, w.area});
    double total = 0.0;
    for (const auto& [qtype, weight] : table) total += weight;
    const double x = rng.next_double() * total;
    double acc = 0.0;
    for (const auto& [qtype, weight] : table) {
        acc += weight;
        if (x < acc) return qtype;
    }
    return table.back().first;  // x == total after rounding
}

/// One fully worded question (no answer yet).
template <class RngT>
QuestionSpec build_question(RngT& rng, const ElementCatalog& catalog,
                            const GenerationProfile& profile, const TemplateTable& templates,
                            bool is_first_question_of_image) {
    QuestionSpec q;
    q.qtype = select_question_type(rng, profile, is_first_question_of_image);
    if (q.qtype == QuestionType::comparison) {
        constexpr std::array<ComparisonOp, 3> ops = {ComparisonOp::less_than,
                                                     ComparisonOp::equals_to,
                                                     ComparisonOp::more_than};
        q.comparison_op = ops[rng.uniform(3)];
        q.element = build_element(rng, catalog, profile, false);
        q.second_element = build_element(rng, catalog, profile, false);
    } else if (q.qtype != QuestionType::rural_urban) {
        q.element = build_element(rng, catalog, profile, true);
    }
    const std::vector<std::uint32_t> ids = templates.ids_for(q.qtype, q.comparison_op);
    q.template_id = ids[rng.uniform(std::uint32_t(ids.size()))];
    q.text = templates.render(q, catalog);
    return q;
}

struct BuiltQuestion {
    QuestionSpec spec;
    std::string answer;
};

namespace detail {

/// Attempts per slot before giving up on finding an in-vocabulary count
/// question; effectively unreachable except under a tiny max_count.
inline constexpr int kMaxSlotAttempts = 256;

}  // namespace detail

/// Build and answer one slot. HR count questions whose raw count exceeds
/// max_count are out of vocabulary, so the slot is rebuilt from its own
/// continuing stream; if attempts run out the last element is downgraded
/// to a presence question, which is always answerable.
inline BuiltQuestion build_slot(const TileScene& scene, const ElementCatalog& catalog,
                                const GenerationProfile& profile, const TemplateTable& templates,
                                std::uint64_t seed, const std::string& tile_id,
                                std::uint32_t slot) {
    Rng rng(slot_key(seed, tile_id, slot));
    QuestionSpec q;
    for (int attempt = 0; attempt < detail::kMaxSlotAttempts; ++attempt) {
        q = build_question(rng, catalog, profile, templates, slot == 0);
        if (profile.scale == Scale::hr && q.qtype == QuestionType::count &&
            raw_count(scene, *q.element) > profile.max_count)
            continue;
        std::string answer = answer_question(scene, q, profile);
        return {std::move(q), std::move(answer)};
    }
    QuestionSpec fallback;
    fallback.qtype = QuestionType::presence;
    fallback.element = q.element;
    const std::vector<std::uint32_t> ids = templates.ids_for(QuestionType::presence, std::nullopt);
    fallback.template_id = ids[rng.uniform(std::uint32_t(ids.size()))];
    fallback.text = templates.render(fallback, catalog);
    const std::string answer = answer_question(scene, fallback, profile);
    return {std::move(fallback), answer};
}

/// All question specs for one image. Objects must already be the footprint
/// query result; output is a pure function of (profile, catalog,
/// templates, tile id, objects).
inline std::vector<QuestionSpec> generate_for_image(const TileScene& scene,
                                                    const std::string& tile_id,
                                                    const GenerationProfile& profile,
                                                    const ElementCatalog& catalog,
                                                    const TemplateTable& templates) {
    std::vector<QuestionSpec> specs;
    specs.reserve(profile.questions_per_image);
    for (std::uint32_t slot = 0; slot < profile.questions_per_image; ++slot)
        specs.push_back(build_slot(scene, catalog, profile, templates, profile.seed, tile_id, slot)
                            .spec);
    return specs;
}

}  // namespace geoqa
