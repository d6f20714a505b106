#include <doctest.h>

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "test_util.hpp"
#include "vcmap/anchors.hpp"
#include "vcmap/errors.hpp"
#include "vcmap/terminology.hpp"
#include "vcmap/vcm_ontology.hpp"

using namespace vcmap;

namespace {

struct Fixture {
    TerminologyGraph graph;
    VcmOntology ont;

    Fixture()
        : graph(TerminologyGraph::load(testutil::fixture_path("concepts.tsv"),
                                       testutil::fixture_path("relationships.tsv"))),
          ont(VcmOntology::load(testutil::fixture_path("vcm_ontology.txt"))) {}

    AnchorTable plain() const {
        return AnchorTable::load(testutil::fixture_path("anchors.tsv"), graph, ont);
    }
    AnchorTable with_overrides() const {
        return AnchorTable::load(testutil::fixture_path("anchors_with_overrides.tsv"), graph,
                                 ont);
    }
};

}  // namespace

TEST_CASE("anchor tables load and index entries") {
    Fixture fx;
    AnchorTable plain = fx.plain();
    AnchorTable over = fx.with_overrides();
    CHECK(plain.size() == 39);
    CHECK(over.size() == 41);

    // Thyroid structure carries two exact anchors, sorted by vcm id.
    CHECK(plain.anchors_for(30000001) ==
          std::vector<AnchorEntry>{{30000001, "vcm:thyroid_function", MatchKind::exact},
                                   {30000001, "vcm:thyroid_gland", MatchKind::exact}});
    CHECK(plain.anchors_for(30000022) ==
          std::vector<AnchorEntry>{{30000022, "vcm:vein", MatchKind::partial}});
    CHECK(plain.anchors_for(25064002).empty());

    CHECK_FALSE(plain.override_for(30000012).has_value());
    CHECK(over.override_for(30000012) == std::optional<std::string>("vcm:ear_ossicle_override"));
    CHECK(over.override_for(57240007) == std::optional<std::string>("vcm:psoas_major_override"));

    std::vector<AnchorEntry> all = plain.all_entries();
    CHECK(all.size() == 39);
    CHECK(std::is_sorted(all.begin(), all.end(), [](const AnchorEntry& a, const AnchorEntry& b) {
        return std::tie(a.terminology_id, a.vcm_id) < std::tie(b.terminology_id, b.vcm_id);
    }));
}

TEST_CASE("anchor validation rejects bad tables") {
    Fixture fx;

    SUBCASE("unknown terminology id") {
        CHECK_THROWS_AS(AnchorTable::from_entries({{5, "vcm:eye", MatchKind::exact}}, fx.graph,
                                                  fx.ont),
                        ReferenceError);
    }
    SUBCASE("unknown vcm id") {
        CHECK_THROWS_AS(
            AnchorTable::from_entries({{30000004, "vcm:spleen", MatchKind::exact}}, fx.graph,
                                      fx.ont),
            ReferenceError);
    }
    SUBCASE("duplicate pair") {
        CHECK_THROWS_AS(
            AnchorTable::from_entries({{30000004, "vcm:eye", MatchKind::exact},
                                       {30000004, "vcm:eye", MatchKind::partial}},
                                      fx.graph, fx.ont),
            ValidationError);
    }
    SUBCASE("two overrides on one concept") {
        CHECK_THROWS_AS(
            AnchorTable::from_entries({{30000012, "vcm:ear_ossicle_override", MatchKind::override},
                                       {30000012, "vcm:psoas_major_override", MatchKind::override}},
                                      fx.graph, fx.ont),
            ValidationError);
    }
    SUBCASE("override target needs exactly one pictogram") {
        // vcm:blood_vessel links only a modifier, vcm:gland links nothing.
        CHECK_THROWS_AS(
            AnchorTable::from_entries({{30000023, "vcm:blood_vessel", MatchKind::override}},
                                      fx.graph, fx.ont),
            ValidationError);
        CHECK_THROWS_AS(AnchorTable::from_entries({{30000001, "vcm:gland", MatchKind::override}},
                                                  fx.graph, fx.ont),
                        ValidationError);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(AnchorTable::load("/nonexistent/anchors.tsv", fx.graph, fx.ont),
                        NotFoundError);
    }
}

TEST_CASE("resolve short-circuits on an exact anchor at depth zero") {
    Fixture fx;
    AnchorTable table = fx.plain();
    auto [ids, trace] = resolve(table, fx.graph, 34486009);
    CHECK(ids == std::set<std::string>{"vcm:thyroid_hyperfunction"});
    CHECK(trace.start == 34486009);
    CHECK(trace.visited == std::vector<ConceptId>{34486009});
    CHECK(trace.depth == 0);
    REQUIRE(trace.matched.size() == 1);
    CHECK(trace.matched[0] ==
          ResolvedAnchor{34486009, "vcm:thyroid_hyperfunction", MatchKind::exact, 0});
}

TEST_CASE("resolve collects every anchor of an exactly matched concept") {
    Fixture fx;
    AnchorTable table = fx.plain();
    auto [ids, trace] = resolve(table, fx.graph, 30000001);
    CHECK(ids == std::set<std::string>{"vcm:thyroid_function", "vcm:thyroid_gland"});
    CHECK(trace.visited == std::vector<ConceptId>{30000001});
    CHECK(trace.depth == 0);
}

TEST_CASE("resolve continues past a partial anchor") {
    Fixture fx;
    AnchorTable table = fx.plain();
    auto [ids, trace] = resolve(table, fx.graph, 30000022);
    CHECK(ids == std::set<std::string>{"vcm:blood_vessel", "vcm:vein"});
    CHECK(trace.visited == std::vector<ConceptId>{30000022, 30000023});
    CHECK(trace.depth == 1);
    REQUIRE(trace.matched.size() == 2);
    CHECK(trace.matched[0] == ResolvedAnchor{30000022, "vcm:vein", MatchKind::partial, 0});
    CHECK(trace.matched[1] == ResolvedAnchor{30000023, "vcm:blood_vessel", MatchKind::exact, 1});
}

TEST_CASE("resolve walks is_a and part_of together, ascending per level") {
    Fixture fx;
    AnchorTable table = fx.plain();
    auto [ids, trace] = resolve(table, fx.graph, 30000007);
    CHECK(ids == std::set<std::string>{"vcm:artery", "vcm:kidney"});
    CHECK(trace.visited == std::vector<ConceptId>{30000007, 30000008, 30000009});
    CHECK(trace.depth == 1);
    REQUIRE(trace.matched.size() == 2);
    CHECK(trace.matched[0] == ResolvedAnchor{30000008, "vcm:artery", MatchKind::exact, 1});
    CHECK(trace.matched[1] == ResolvedAnchor{30000009, "vcm:kidney", MatchKind::exact, 1});
}

TEST_CASE("resolve without overrides climbs to both bone and ear") {
    Fixture fx;
    AnchorTable table = fx.plain();
    auto [ids, trace] = resolve(table, fx.graph, 30000012);
    CHECK(ids == std::set<std::string>{"vcm:bone", "vcm:ear"});
    CHECK(trace.visited == std::vector<ConceptId>{30000012, 30000013, 30000014});
    CHECK(trace.depth == 1);
}

TEST_CASE("resolve with an override stops at a singleton") {
    Fixture fx;
    AnchorTable table = fx.with_overrides();

    auto [ear_ids, ear_trace] = resolve(table, fx.graph, 30000012);
    CHECK(ear_ids == std::set<std::string>{"vcm:ear_ossicle_override"});
    CHECK(ear_trace.visited == std::vector<ConceptId>{30000012});
    CHECK(ear_trace.depth == 0);
    REQUIRE(ear_trace.matched.size() == 1);
    CHECK(ear_trace.matched[0] ==
          ResolvedAnchor{30000012, "vcm:ear_ossicle_override", MatchKind::override, 0});

    auto [psoas_ids, psoas_trace] = resolve(table, fx.graph, 57240007);
    CHECK(psoas_ids == std::set<std::string>{"vcm:psoas_major_override"});
    CHECK(psoas_trace.visited == std::vector<ConceptId>{57240007});
}

TEST_CASE("resolve without overrides climbs psoas to muscle and skeleton") {
    Fixture fx;
    AnchorTable table = fx.plain();
    auto [ids, trace] = resolve(table, fx.graph, 57240007);
    CHECK(ids == std::set<std::string>{"vcm:muscle", "vcm:skeleton"});
    CHECK(trace.visited ==
          std::vector<ConceptId>{57240007, 30000016, 30000028, 113192009});
    CHECK(trace.depth == 2);
}

TEST_CASE("resolve returns empty when no ancestor is anchored") {
    Fixture fx;
    AnchorTable table = fx.plain();
    auto [ids, trace] = resolve(table, fx.graph, 30000024);
    CHECK(ids.empty());
    CHECK(trace.visited == std::vector<ConceptId>{30000024, 30000025});
    CHECK(trace.matched.empty());
    CHECK(trace.depth == 1);
}

TEST_CASE("resolve validates the concept id") {
    Fixture fx;
    AnchorTable table = fx.plain();
    CHECK_THROWS_AS((void)resolve(table, fx.graph, 5), NotFoundError);
}

TEST_CASE("adding an override never widens a resolution") {
    // Monotonicity: an override replaces whatever the plain walk found.
    Fixture fx;
    AnchorTable plain = fx.plain();
    AnchorTable over = fx.with_overrides();
    for (ConceptId id : fx.graph.all_concepts()) {
        auto [plain_ids, plain_trace] = resolve(plain, fx.graph, id);
        auto [over_ids, over_trace] = resolve(over, fx.graph, id);
        if (over_ids == plain_ids) continue;
        // Any divergence must come from an override hit, which yields a
        // singleton and a trace that stopped at that concept.
        REQUIRE(over_trace.matched.size() == 1);
        CHECK(over_trace.matched[0].match == MatchKind::override);
        CHECK(over_ids.size() == 1);
    }
}

TEST_CASE("detect_ambiguities flags multi-pictogram body structures") {
    Fixture fx;
    AnchorTable plain = fx.plain();
    std::vector<AmbiguityRow> rows = detect_ambiguities(plain, fx.graph, fx.ont);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == AmbiguityRow{30000012, {"bone", "ear"}});
    CHECK(rows[1] == AmbiguityRow{57240007, {"bone", "muscle"}});

    AnchorTable over = fx.with_overrides();
    CHECK(detect_ambiguities(over, fx.graph, fx.ont).empty());
}
