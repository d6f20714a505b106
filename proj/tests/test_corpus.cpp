#include <doctest.h>

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "test_util.hpp"
#include "vcmap/corpus.hpp"
#include "vcmap/errors.hpp"

using namespace vcmap;

namespace {

struct Fixture {
    TerminologyGraph graph;
    VcmOntology ont;
    AnchorTable table;

    Fixture()
        : graph(TerminologyGraph::load(testutil::fixture_path("concepts.tsv"),
                                       testutil::fixture_path("relationships.tsv"))),
          ont(VcmOntology::load(testutil::fixture_path("vcm_ontology.txt"))),
          table(AnchorTable::load(testutil::fixture_path("anchors_with_overrides.tsv"), graph,
                                  ont)) {}
};

BatchRow ok_row(ConceptId id, std::vector<std::string> codes) {
    BatchRow row;
    row.concept_id = id;
    row.codes = std::move(codes);
    return row;
}

BatchRow error_row(ConceptId id, std::string error) {
    BatchRow row;
    row.concept_id = id;
    row.error = std::move(error);
    return row;
}

}  // namespace

TEST_CASE("render_batch and parse_batch_tsv round-trip") {
    Fixture fx;
    std::vector<BatchResult> results =
        batch_generate(fx.graph, fx.ont, fx.table, {34486009, 5, 186675001});
    std::string text = render_batch(results);

    testutil::TempDir dir;
    testutil::write_file(dir.file("batch.tsv"), text);
    std::vector<BatchRow> rows = parse_batch_tsv(dir.file("batch.tsv"));
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].concept_id == 34486009);
    CHECK(rows[0].codes ==
          std::vector<std::string>{"current.patho.endocrine_or_thyroid.hyperfunction"});
    CHECK_FALSE(rows[0].failed());
    CHECK(rows[1].concept_id == 5);
    CHECK(rows[1].failed());
    CHECK(rows[1].codes.empty());
    CHECK(rows[2].codes == std::vector<std::string>{"current.patho.ent.virus",
                                                    "current.patho.eye.virus"});
}

TEST_CASE("parse_batch_tsv rejects malformed result files") {
    testutil::TempDir dir;
    const std::string header = "concept_id\ticon_codes\tn_icons\n";
    auto write_batch = [&](const std::string& body) {
        testutil::write_file(dir.file("batch.tsv"), header + body);
        return dir.file("batch.tsv");
    };

    SUBCASE("error row with nonzero count") {
        CHECK_THROWS_AS((void)parse_batch_tsv(write_batch("7\tERROR:boom\t1\n")), ParseError);
    }
    SUBCASE("count mismatch") {
        CHECK_THROWS_AS((void)parse_batch_tsv(write_batch("7\tcurrent.patho._._\t2\n")),
                        ParseError);
    }
    SUBCASE("bad icon code syntax") {
        CHECK_THROWS_AS((void)parse_batch_tsv(write_batch("7\tcurrent.patho._\t1\n")),
                        ParseError);
        CHECK_THROWS_AS((void)parse_batch_tsv(write_batch("7\tblue.patho._._\t1\n")),
                        ParseError);
    }
    SUBCASE("empty codes cell") {
        CHECK_THROWS_AS((void)parse_batch_tsv(write_batch("7\t\t0\n")), ParseError);
    }
    SUBCASE("double space splits an empty code") {
        CHECK_THROWS_AS(
            (void)parse_batch_tsv(write_batch("7\tcurrent.patho._._  risk.patho._._\t2\n")),
            ParseError);
    }
    SUBCASE("bad concept id") {
        CHECK_THROWS_AS((void)parse_batch_tsv(write_batch("0\tcurrent.patho._._\t1\n")),
                        ParseError);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS((void)parse_batch_tsv(dir.file("absent.tsv")), NotFoundError);
    }
}

TEST_CASE("load_corpus reads ids, comments, and blank lines") {
    testutil::TempDir dir;
    testutil::write_file(dir.file("corpus.txt"),
                         "# demo corpus\n34486009\n\n73211009\r\n# tail\n5\n");
    CHECK(load_corpus(dir.file("corpus.txt")) ==
          std::vector<ConceptId>{34486009, 73211009, 5});

    testutil::write_file(dir.file("bad.txt"), "notanid\n");
    CHECK_THROWS_AS((void)load_corpus(dir.file("bad.txt")), ParseError);
    CHECK_THROWS_AS((void)load_corpus(dir.file("absent.txt")), NotFoundError);

    CHECK(load_corpus(testutil::fixture_path("corpus.txt")).size() == 30);
}

TEST_CASE("compute_stats aggregates rows") {
    std::vector<BatchRow> rows = {
        ok_row(1, {"current.patho.eye.inflammation"}),
        ok_row(2, {"current.patho.eye.inflammation", "current.patho.liver._"}),
        ok_row(3, {"current.patho._._"}),
        error_row(4, "boom"),
    };
    CorpusStats stats = compute_stats(rows);
    CHECK(stats.total_concepts == 3);
    CHECK(stats.histogram == std::map<std::size_t, std::size_t>{{1, 2}, {2, 1}});
    CHECK(stats.distinct_icons == 3);
    CHECK(stats.total_assignments == 4);
    CHECK(stats.generic_icon_count == 1);
    CHECK(stats.error_rows == 1);
}

TEST_CASE("render_stats formats integer tenths exactly") {
    SUBCASE("halves round away from zero") {
        std::vector<BatchRow> rows = {
            ok_row(1, {"current.patho.eye._"}),
            ok_row(2, {"current.patho.eye._", "current.patho.liver._"}),
        };
        CHECK(render_stats(compute_stats(rows)) ==
              "total_concepts\t2\n"
              "icons_per_concept\t1\t1\t50.0%\n"
              "icons_per_concept\t2\t1\t50.0%\n"
              "distinct_icons\t2\n"
              "mean_concepts_per_icon\t1.5\n"
              "generic_icon_count\t0\n"
              "error_rows\t0\n");
    }
    SUBCASE("thirds round to one decimal") {
        std::vector<BatchRow> rows = {
            ok_row(1, {"current.patho.eye._"}),
            ok_row(2, {"current.patho.liver._", "current.patho.lung._"}),
            ok_row(3, {"current.patho.heart._", "current.patho.bone._"}),
        };
        CHECK(render_stats(compute_stats(rows)) ==
              "total_concepts\t3\n"
              "icons_per_concept\t1\t1\t33.3%\n"
              "icons_per_concept\t2\t2\t66.7%\n"
              "distinct_icons\t5\n"
              "mean_concepts_per_icon\t1.0\n"
              "generic_icon_count\t0\n"
              "error_rows\t0\n");
    }
    SUBCASE("all rows failing leaves zero denominators") {
        std::vector<BatchRow> rows = {error_row(1, "a"), error_row(2, "b")};
        CHECK(render_stats(compute_stats(rows)) ==
              "total_concepts\t0\n"
              "distinct_icons\t0\n"
              "mean_concepts_per_icon\t0.0\n"
              "generic_icon_count\t0\n"
              "error_rows\t2\n");
    }
}

TEST_CASE("render_relationships lists known types with spaced names") {
    Fixture fx;
    CHECK(render_relationships(fx.graph, 4927003) ==
          "associated morphology: Acute inflammation; "
          "finding site: Anterior uveal tract structure; is a: Disease");
    // The duplicated lung finding site collapses to one entry.
    CHECK(render_relationships(fx.graph, 91000002) ==
          "associated morphology: Abscess; associated morphology: Inflammation; "
          "finding site: Lung structure; is a: Disease");
    CHECK(render_relationships(fx.graph, 404684003).empty());
}

TEST_CASE("render_relationships skips unrecognized types") {
    testutil::TempDir dir;
    testutil::write_file(dir.file("c.tsv"),
                         "id\tlabel\tsemantic_tag\n1\tAlpha\tdisorder\n2\tBeta\tbody-structure\n");
    testutil::write_file(dir.file("r.tsv"),
                         "source_id\trel_type\tdestination_id\tgroup_id\n"
                         "1\tlaterality\t2\t0\n"
                         "1\tfinding_site\t2\t0\n");
    TerminologyGraph graph = TerminologyGraph::load(dir.file("c.tsv"), dir.file("r.tsv"));
    CHECK(render_relationships(graph, 1) == "finding site: Beta");
}

TEST_CASE("review sheets carry labels, relationships, and blank review cells") {
    Fixture fx;
    std::vector<BatchResult> results =
        batch_generate(fx.graph, fx.ont, fx.table, {65363002, 5});
    std::vector<ReviewRow> rows = build_review_rows(fx.graph, results);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].concept_id == 65363002);
    CHECK(rows[0].label == "Otosclerosis");
    CHECK(rows[0].icon_codes == std::vector<std::string>{"current.patho.ear._"});
    CHECK(rows[0].error.empty());
    CHECK(rows[1].concept_id == 5);
    CHECK(rows[1].label.empty());
    CHECK(rows[1].icon_codes.empty());
    CHECK_FALSE(rows[1].error.empty());

    std::string text = render_review(rows);
    auto lines = [&] {
        std::vector<std::string> out;
        std::size_t start = 0;
        while (start < text.size()) {
            std::size_t end = text.find('\n', start);
            out.push_back(text.substr(start, end - start));
            start = end + 1;
        }
        return out;
    }();
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == "concept_id\tlabel\trelationships\ticon_codes\tacceptable\tcomments");
    CHECK(lines[1] ==
          "65363002\tOtosclerosis\tfinding site: Ear ossicle structure; is a: "
          "Disease\tcurrent.patho.ear._\t\t");
    CHECK(lines[2].rfind("5\t\t\tERROR:", 0) == 0);
    CHECK(lines[2].substr(lines[2].size() - 2) == "\t\t");
}

TEST_CASE("sanitized cells never smuggle separators") {
    std::vector<ReviewRow> rows(1);
    rows[0].concept_id = 9;
    rows[0].label = "bad\tlabel\nwith\rbreaks";
    std::string text = render_review(rows);
    CHECK(text.find("bad label with breaks") != std::string::npos);
}

TEST_CASE("splitmix64 matches the reference sequence") {
    std::uint64_t state = 0;
    CHECK(splitmix64_next(state) == 0xe220a8397b1dcdafULL);
    CHECK(splitmix64_next(state) == 0x6e789e6aa1b965f4ULL);
    CHECK(splitmix64_next(state) == 0x06c45d188009454fULL);

    state = 42;
    CHECK(splitmix64_next(state) == 0xbdd732262feb6e95ULL);
    CHECK(splitmix64_next(state) == 0x28efe333b266f103ULL);
    CHECK(splitmix64_next(state) == 0x47526757130f9f52ULL);
}

TEST_CASE("sample_indices draws deterministic ascending subsets") {
    CHECK(sample_indices(30, 10, 42) ==
          std::vector<std::size_t>{3, 4, 13, 14, 16, 17, 19, 20, 24, 29});
    CHECK(sample_indices(30, 10, 0) ==
          std::vector<std::size_t>{0, 4, 7, 10, 14, 17, 20, 21, 23, 25});
    CHECK(sample_indices(30, 10, 42) == sample_indices(30, 10, 42));

    CHECK(sample_indices(5, 5, 7) == std::vector<std::size_t>{0, 1, 2, 3, 4});
    CHECK(sample_indices(5, 9, 7) == std::vector<std::size_t>{0, 1, 2, 3, 4});
    CHECK(sample_indices(5, 0, 7).empty());
    CHECK(sample_indices(0, 0, 7).empty());

    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        std::vector<std::size_t> picked = sample_indices(100, 20, seed);
        CHECK(picked.size() == 20);
        CHECK(std::is_sorted(picked.begin(), picked.end()));
        CHECK(std::adjacent_find(picked.begin(), picked.end()) == picked.end());
        for (std::size_t index : picked) CHECK(index < 100);
    }
}
