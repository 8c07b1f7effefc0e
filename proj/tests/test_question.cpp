#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <set>

#include "geoqa/builder.hpp"
#include "geoqa/catalog.hpp"
#include "geoqa/profile.hpp"
#include "geoqa/question.hpp"
#include "geoqa/rng.hpp"
#include "geoqa/templates.hpp"
#include "support.hpp"

using namespace geoqa;
using nlohmann::json;

TEST_CASE("default_catalog: nine unique categories with resolvable selectors") {
    const ElementCatalog catalog = default_catalog();
    REQUIRE(catalog.size() == 9);
    std::set<std::string> ids;
    for (const CatalogEntry& e : catalog.entries()) {
        CHECK(ids.insert(e.category).second);
        CHECK_FALSE(e.singular.empty());
        CHECK_FALSE(e.plural.empty());
    }
    CHECK(catalog.index_of("road") == 0u);
    CHECK(catalog.index_of("religious_place") == 8u);
    CHECK_FALSE(catalog.index_of("volcano").has_value());
    CHECK(catalog.index_of_phrase("water areas") == catalog.index_of("water_area"));
    CHECK(catalog.index_of_phrase("commercial building") ==
          catalog.index_of("commercial_building"));

    const GeoObject office = support::make_obj("x", Layer::building, "office",
                                               support::square_poly(0, 0, 5));
    CHECK(catalog.at(*catalog.index_of("commercial_building")).matches(office));
    CHECK_FALSE(catalog.at(*catalog.index_of("residential_building")).matches(office));
    const GeoObject any_road =
        support::make_obj("r", Layer::road, "motorway", make_polyline({{0, 0}, {1, 1}}));
    CHECK(catalog.at(0).matches(any_road));  // empty subtype set matches all
}

TEST_CASE("ElementCatalog: constructor rejects malformed tables") {
    CHECK_THROWS_AS(ElementCatalog(std::vector<CatalogEntry>{}), ConfigError);
    CHECK_THROWS_AS(ElementCatalog({{"a", Layer::road, {}, "a", "as"},
                                    {"a", Layer::road, {}, "b", "bs"}}),
                    ConfigError);
    CHECK_THROWS_AS(ElementCatalog({{"a", Layer::road, {}, "", "as"}}), ConfigError);
    CHECK_THROWS_AS(ElementCatalog({{"", Layer::road, {}, "a", "as"}}), ConfigError);
}

TEST_CASE("question spec JSON round-trips exactly") {
    const ElementCatalog catalog = default_catalog();
    Rng rng(301);
    const TemplateTable templates = TemplateTable::defaults();
    GenerationProfile profile = profile_defaults(Scale::hr);
    profile.attribute_prob = 0.6;
    profile.relation_prob = 0.6;

    for (int i = 0; i < 2000; ++i) {
        const QuestionSpec q = build_question(rng, catalog, profile, templates, false);
        const json j = question_spec_to_json(q, catalog);
        const QuestionSpec back = question_spec_from_json(j, catalog, q.text);
        CHECK(back == q);
    }
}

TEST_CASE("question spec JSON: malformed inputs raise ParseError") {
    const ElementCatalog catalog = default_catalog();
    CHECK_THROWS_AS(question_spec_from_json(json{{"type", "guess"}}, catalog, "t"), ParseError);
    CHECK_THROWS_AS(question_spec_from_json(
                        json{{"type", "count"}, {"element", {{"category", "volcano"}}}},
                        catalog, "t"),
                    ParseError);
    CHECK_THROWS_AS(
        question_spec_from_json(
            json{{"type", "count"},
                 {"element",
                  {{"category", "road"},
                   {"attribute", {{"kind", "size"}, {"label", "square"}}}}}},  // kind mismatch
            catalog, "t"),
        ParseError);
}

TEST_CASE("validate: structural rules") {
    QuestionSpec q;
    q.qtype = QuestionType::count;
    q.element = ElementSpec{0, std::nullopt, std::nullopt};
    q.text = "How many roads are there?";
    CHECK_NOTHROW(validate(q));

    QuestionSpec no_text = q;
    no_text.text.clear();
    CHECK_THROWS_AS(validate(no_text), ValidationError);

    QuestionSpec stray_op = q;
    stray_op.comparison_op = ComparisonOp::less_than;
    CHECK_THROWS_AS(validate(stray_op), ValidationError);

    QuestionSpec rural;
    rural.qtype = QuestionType::rural_urban;
    rural.text = "Is it a rural or an urban area?";
    CHECK_NOTHROW(validate(rural));
    rural.element = ElementSpec{0, std::nullopt, std::nullopt};
    CHECK_THROWS_AS(validate(rural), ValidationError);

    QuestionSpec none_attr = q;
    none_attr.element->attribute = Attribute{ShapeClass::none};
    CHECK_THROWS_AS(validate(none_attr), ValidationError);

    QuestionSpec cmp;
    cmp.qtype = QuestionType::comparison;
    cmp.comparison_op = ComparisonOp::more_than;
    cmp.element = ElementSpec{0, std::nullopt, std::nullopt};
    cmp.second_element = ElementSpec{1, std::nullopt, std::nullopt};
    cmp.text = "Are there more roads than water areas?";
    CHECK_NOTHROW(validate(cmp));
    cmp.element->relation = ElementSpec::Relation{RelationKind::next_to, 1, std::nullopt};
    CHECK_THROWS_AS(validate(cmp), ValidationError);
}

TEST_CASE("templates: exact renderings") {
    const ElementCatalog catalog = default_catalog();
    const TemplateTable t = TemplateTable::defaults();

    QuestionSpec q;
    q.qtype = QuestionType::count;
    q.element = ElementSpec{*catalog.index_of("water_area"), std::nullopt, std::nullopt};
    q.template_id = 0;
    CHECK(t.render(q, catalog) == "How many water areas are there?");
    q.template_id = 1;
    CHECK(t.render(q, catalog) == "What is the number of water areas?");
    q.template_id = 2;
    CHECK(t.render(q, catalog) == "What is the amount of water areas?");

    q.element->attribute = Attribute{SizeClass::small};
    q.template_id = 0;
    CHECK(t.render(q, catalog) == "How many small water areas are there?");

    // vowel-aware indefinite article in singular heads
    QuestionSpec p;
    p.qtype = QuestionType::presence;
    p.element = ElementSpec{*catalog.index_of("industrial_area"), std::nullopt, std::nullopt};
    p.template_id = 0;
    CHECK(t.render(p, catalog) == "Is there an industrial area?");
    p.element->category = *catalog.index_of("road");
    CHECK(t.render(p, catalog) == "Is there a road?");
    p.element->attribute = Attribute{SizeClass::large};  // article follows the adjective
    CHECK(t.render(p, catalog) == "Is there a large road?");

    // relation clause, worked example wording
    QuestionSpec rel;
    rel.qtype = QuestionType::count;
    rel.element = ElementSpec{*catalog.index_of("road"), Attribute{SizeClass::small},
                              ElementSpec::Relation{RelationKind::left_of,
                                                    *catalog.index_of("water_area"),
                                                    std::nullopt}};
    rel.template_id = 0;
    CHECK(t.render(rel, catalog) ==
          "How many small roads on the left of a water area are there?");

    QuestionSpec cmp;
    cmp.qtype = QuestionType::comparison;
    cmp.comparison_op = ComparisonOp::equals_to;
    cmp.template_id = 2;
    cmp.element = ElementSpec{*catalog.index_of("commercial_building"), std::nullopt,
                              std::nullopt};
    cmp.second_element = ElementSpec{*catalog.index_of("residential_building"), std::nullopt,
                                     std::nullopt};
    CHECK(t.render(cmp, catalog) ==
          "Is the number of commercial buildings equal to the number of residential buildings?");

    QuestionSpec ru;
    ru.qtype = QuestionType::rural_urban;
    ru.template_id = 0;
    CHECK(t.render(ru, catalog) == "Is it a rural or an urban area?");
}

TEST_CASE("templates: parse inverts render, including relation clauses") {
    const ElementCatalog catalog = default_catalog();
    const TemplateTable t = TemplateTable::defaults();

    const auto parsed = t.parse("How many small roads on the left of a water area are there?",
                                catalog);
    REQUIRE(parsed.has_value());
    CHECK(parsed->qtype == QuestionType::count);
    CHECK(parsed->template_id == 0);
    REQUIRE(parsed->element.has_value());
    CHECK(parsed->element->category == *catalog.index_of("road"));
    REQUIRE(parsed->element->attribute.has_value());
    CHECK(attribute_label(*parsed->element->attribute) == "small");
    REQUIRE(parsed->element->relation.has_value());
    CHECK(parsed->element->relation->kind == RelationKind::left_of);
    CHECK(parsed->element->relation->category == *catalog.index_of("water_area"));

    CHECK_FALSE(t.parse("How many dragons are there?", catalog).has_value());
    CHECK_FALSE(t.parse("How many roads are there", catalog).has_value());  // missing '?'
    CHECK_FALSE(t.parse("", catalog).has_value());
    CHECK_FALSE(t.parse("How many roads are there? extra", catalog).has_value());
}

TEST_CASE("templates: generated questions round-trip (sampled)") {
    const ElementCatalog catalog = default_catalog();
    const TemplateTable templates = TemplateTable::defaults();
    Rng rng(302);
    for (const Scale scale : {Scale::lr, Scale::hr}) {
        GenerationProfile profile = profile_defaults(scale);
        profile.attribute_prob = 0.5;
        profile.relation_prob = 0.5;
        for (int i = 0; i < 3000; ++i) {
            const QuestionSpec q =
                build_question(rng, catalog, profile, templates, i % 50 == 0);
            const auto parsed = templates.parse(q.text, catalog);
            REQUIRE(parsed.has_value());
            CHECK(*parsed == q);
        }
    }
}

TEST_CASE("TemplateTable: constructor enforces placeholder rules and coverage") {
    using QT = QuestionType;
    const auto table = [](std::vector<Template> ts) { return TemplateTable(std::move(ts)); };

    // complete minimal table passes
    std::vector<Template> ok = {
        {QT::count, 0, std::nullopt, "How many {A} are there?"},
        {QT::presence, 0, std::nullopt, "Is there {a}?"},
        {QT::comparison, 0, ComparisonOp::less_than, "Are there less {A} than {B}?"},
        {QT::comparison, 0, ComparisonOp::equals_to, "Same count of {A} and {B}?"},
        {QT::comparison, 0, ComparisonOp::more_than, "Are there more {A} than {B}?"},
        {QT::area, 0, std::nullopt, "What is the area covered by {A}?"},
        {QT::rural_urban, 0, std::nullopt, "Is it a rural or an urban area?"},
    };
    CHECK_NOTHROW(table(ok));

    std::vector<Template> missing_op = ok;
    missing_op.erase(missing_op.begin() + 3);  // drop equals_to
    CHECK_THROWS_AS(table(missing_op), ConfigError);

    std::vector<Template> missing_type = ok;
    missing_type.erase(missing_type.begin());  // drop count
    CHECK_THROWS_AS(table(missing_type), ConfigError);

    std::vector<Template> bad = ok;
    bad.push_back({QT::count, 1, std::nullopt, "How many things?"});  // no placeholder
    CHECK_THROWS_AS(table(bad), ConfigError);

    bad = ok;
    bad.push_back({QT::count, 1, ComparisonOp::less_than, "How many {A}?"});  // stray op
    CHECK_THROWS_AS(table(bad), ConfigError);

    bad = ok;
    bad.push_back({QT::presence, 1, std::nullopt, "Is {A} near {B}?"});  // {B} outside comparison
    CHECK_THROWS_AS(table(bad), ConfigError);

    bad = ok;
    bad.push_back({QT::rural_urban, 1, std::nullopt, "Is {a} rural?"});  // placeholder forbidden
    CHECK_THROWS_AS(table(bad), ConfigError);
}

TEST_CASE("TemplateTable: JSON round-trip") {
    const TemplateTable t = TemplateTable::defaults();
    const TemplateTable back = TemplateTable::from_json(t.to_json());
    REQUIRE(back.templates().size() == t.templates().size());
    for (std::size_t i = 0; i < t.templates().size(); ++i) {
        CHECK(back.templates()[i].qtype == t.templates()[i].qtype);
        CHECK(back.templates()[i].id == t.templates()[i].id);
        CHECK(back.templates()[i].op == t.templates()[i].op);
        CHECK(back.templates()[i].pattern == t.templates()[i].pattern);
    }
    CHECK_THROWS_AS(TemplateTable::from_json(json{{"not", "an array"}}), ParseError);
    CHECK_THROWS_AS(TemplateTable::from_json(json::array({json{{"type", "count"}}})), ParseError);
}

TEST_CASE("ids_for: comparison wordings are op-specific") {
    const TemplateTable t = TemplateTable::defaults();
    CHECK(t.ids_for(QuestionType::count, std::nullopt) == std::vector<std::uint32_t>{0, 1, 2});
    CHECK(t.ids_for(QuestionType::presence, std::nullopt) == std::vector<std::uint32_t>{0, 1});
    CHECK(t.ids_for(QuestionType::comparison, ComparisonOp::less_than) ==
          std::vector<std::uint32_t>{0, 1});
    CHECK(t.ids_for(QuestionType::comparison, ComparisonOp::more_than) ==
          std::vector<std::uint32_t>{0, 1});
    CHECK(t.ids_for(QuestionType::comparison, ComparisonOp::equals_to) ==
          std::vector<std::uint32_t>{2});
    CHECK(t.ids_for(QuestionType::rural_urban, std::nullopt) == std::vector<std::uint32_t>{0});
}

TEST_CASE("profile: scale defaults match the published dataset geometry") {
    const GenerationProfile lr = profile_defaults(Scale::lr);
    CHECK(lr.size_profile.small_max == 3000.0);
    CHECK(lr.size_profile.medium_max == 10000.0);
    CHECK(lr.tile_pixels == 256);
    CHECK(lr.resolution == 10.0);
    CHECK(lr.split_fractions.at(Split::train) == 0.778);
    CHECK(lr.split_fractions.at(Split::val) == 0.111);
    CHECK(lr.split_fractions.at(Split::test) == 0.111);
    CHECK(lr.split_fractions.count(Split::test2) == 0);

    const GenerationProfile hr = profile_defaults(Scale::hr);
    CHECK(hr.size_profile.small_max == 100.0);
    CHECK(hr.size_profile.medium_max == 500.0);
    CHECK(hr.tile_pixels == 512);
    CHECK(hr.resolution == 0.15);
    CHECK(hr.max_count == 89);
    CHECK(hr.split_fractions.at(Split::test2) == 0.068);
    CHECK_NOTHROW(validate(lr));
    CHECK_NOTHROW(validate(hr));
}

TEST_CASE("profile: JSON parsing, unknown keys and validation") {
    CHECK_THROWS_AS(profile_from_json(json{{"seed", 1}}), ConfigError);  // missing scale
    CHECK_THROWS_AS(profile_from_json(json{{"scale", "xl"}}), ConfigError);
    CHECK_THROWS_AS(profile_from_json(json{{"scale", "lr"}, {"typo_key", 1}}), ConfigError);
    CHECK_THROWS_AS(profile_from_json(json{{"scale", "lr"}, {"attribute_prob", 1.5}}),
                    ConfigError);
    CHECK_THROWS_AS(profile_from_json(json{{"scale", "lr"}, {"questions_per_image", 0}}),
                    ConfigError);
    CHECK_THROWS_AS(
        profile_from_json(json{{"scale", "lr"},
                               {"qtype_weights",
                                {{"count", 0.0}, {"presence", 0.0}, {"comparison", 0.0}}}}),
        ConfigError);
    CHECK_THROWS_AS(
        profile_from_json(json{{"scale", "lr"}, {"split_fractions", {{"train", 0.5}}}}),
        ConfigError);  // does not sum to 1
    CHECK_THROWS_AS(
        profile_from_json(json{{"scale", "lr"}, {"split_fractions", {{"unassigned", 1.0}}}}),
        ConfigError);
    CHECK_THROWS_AS(profile_from_json(json{{"scale", "lr"}, {"qtype_weights", {{"guess", 1.0}}}}),
                    ConfigError);

    // area weight at LR is ignored, not an error; rural_urban likewise
    const GenerationProfile p = profile_from_json(
        json{{"scale", "lr"},
             {"seed", 5},
             {"qtype_weights", {{"count", 2.0}, {"area", 9.0}, {"rural_urban", 3.0}}}});
    CHECK(p.seed == 5);
    CHECK(p.qtype_weights.count == 2.0);
    CHECK(p.qtype_weights.area == 9.0);  // stored but never drawn at LR

    // explicit sources parse
    const GenerationProfile s = profile_from_json(
        json{{"scale", "lr"},
             {"split_fractions", {{"train", 1.0}}},
             {"sources", json::array({{{"id", "a"},
                                       {"min_x", 0.0},
                                       {"min_y", 0.0},
                                       {"max_x", 2560.0},
                                       {"max_y", 2560.0}}})}});
    REQUIRE(s.sources.size() == 1);
    CHECK(s.sources[0].id == "a");
    CHECK(s.sources[0].rect.max_x == 2560.0);
}

TEST_CASE("profile: JSON round-trip through profile_to_json") {
    GenerationProfile p = profile_defaults(Scale::hr);
    p.seed = 777;
    p.questions_per_image = 42;
    p.attribute_prob = 0.25;
    p.qtype_weights.comparison = 2.5;
    p.templates_file = "custom.json";
    const GenerationProfile back = profile_from_json(profile_to_json(p));
    CHECK(back.scale == p.scale);
    CHECK(back.seed == p.seed);
    CHECK(back.questions_per_image == p.questions_per_image);
    CHECK(back.attribute_prob == p.attribute_prob);
    CHECK(back.qtype_weights.comparison == p.qtype_weights.comparison);
    CHECK(back.size_profile.small_max == p.size_profile.small_max);
    CHECK(back.split_fractions == p.split_fractions);
    CHECK(back.templates_file == p.templates_file);
}

TEST_CASE("profile: --set overrides descend dotted paths") {
    json doc{{"scale", "lr"}};
    apply_override(doc, "seed=99");
    apply_override(doc, "qtype_weights.count=2.5");
    apply_override(doc, "scale=hr");
    const GenerationProfile p = profile_from_json(doc);
    CHECK(p.scale == Scale::hr);
    CHECK(p.seed == 99);
    CHECK(p.qtype_weights.count == 2.5);

    CHECK_THROWS_AS(apply_override(doc, "no_equals_sign"), ConfigError);
    CHECK_THROWS_AS(apply_override(doc, "=5"), ConfigError);

    // non-JSON values fall back to strings, then fail typed validation
    json doc2{{"scale", "lr"}};
    apply_override(doc2, "seed=notanumber");
    CHECK_THROWS_AS(profile_from_json(doc2), ConfigError);
}

TEST_CASE("builder: type exclusions and distribution over a large stream") {
    const ElementCatalog catalog = default_catalog();
    Rng rng(303);

    GenerationProfile lr = profile_defaults(Scale::lr);
    std::map<QuestionType, int> seen_lr;
    const int draws = 30000;
    for (int i = 0; i < draws; ++i) ++seen_lr[select_question_type(rng, lr, false)];
    CHECK(seen_lr.count(QuestionType::area) == 0);
    CHECK(seen_lr.count(QuestionType::rural_urban) == 0);
    for (const QuestionType qt :
         {QuestionType::count, QuestionType::presence, QuestionType::comparison})
        CHECK(std::abs(double(seen_lr[qt]) / draws - 1.0 / 3.0) < 0.02);
    CHECK(select_question_type(rng, lr, true) == QuestionType::rural_urban);

    GenerationProfile hr = profile_defaults(Scale::hr);
    std::map<QuestionType, int> seen_hr;
    for (int i = 0; i < draws; ++i) ++seen_hr[select_question_type(rng, hr, i == 0)];
    CHECK(seen_hr.count(QuestionType::rural_urban) == 0);
    for (const QuestionType qt : {QuestionType::count, QuestionType::presence,
                                  QuestionType::comparison, QuestionType::area})
        CHECK(std::abs(double(seen_hr[qt]) / draws - 0.25) < 0.02);

    // weights steer the distribution
    GenerationProfile weighted = lr;
    weighted.qtype_weights = {3.0, 1.0, 0.0, 0.0};
    std::map<QuestionType, int> seen_w;
    for (int i = 0; i < draws; ++i) ++seen_w[select_question_type(rng, weighted, false)];
    CHECK(seen_w.count(QuestionType::comparison) == 0);
    CHECK(std::abs(double(seen_w[QuestionType::count]) / draws - 0.75) < 0.02);
}

TEST_CASE("builder: relation depth never exceeds one and probabilities bite") {
    const ElementCatalog catalog = default_catalog();
    GenerationProfile p = profile_defaults(Scale::lr);
    p.attribute_prob = 0.4;
    p.relation_prob = 0.35;
    Rng rng(304);

    int with_attr = 0, with_rel = 0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const ElementSpec e = build_element(rng, catalog, p, true);
        CHECK(e.category < catalog.size());
        if (e.attribute) ++with_attr;
        if (e.relation) {
            ++with_rel;
            // the related element is flat by construction: its spec type
            // cannot even hold a nested relation
            const ElementSpec target = e.related_element();
            CHECK_FALSE(target.relation.has_value());
        }
    }
    CHECK(std::abs(double(with_attr) / n - 0.4) < 0.02);
    CHECK(std::abs(double(with_rel) / n - 0.35) < 0.02);

    int nested = 0;
    for (int i = 0; i < 1000; ++i)
        if (build_element(rng, catalog, p, false).relation) ++nested;
    CHECK(nested == 0);  // allow_relation=false is absolute
}

TEST_CASE("builder: comparison sides never carry relations") {
    const ElementCatalog catalog = default_catalog();
    const TemplateTable templates = TemplateTable::defaults();
    GenerationProfile p = profile_defaults(Scale::lr);
    p.relation_prob = 0.9;  // make violations likely if the guard were missing
    p.qtype_weights = {0.0, 0.0, 1.0, 0.0};
    Rng rng(305);
    for (int i = 0; i < 2000; ++i) {
        const QuestionSpec q = build_question(rng, catalog, p, templates, false);
        REQUIRE(q.qtype == QuestionType::comparison);
        CHECK_FALSE(q.element->relation.has_value());
        CHECK_FALSE(q.second_element->relation.has_value());
        CHECK_NOTHROW(validate(q));
    }
}
