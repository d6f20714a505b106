#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "vcmap/icon_engine.hpp"

namespace vcmap {

// --- batch TSV ------------------------------------------------------------

// One parsed row of a batch result file. Either codes or error is filled.
struct BatchRow {
    ConceptId concept_id = 0;
    std::vector<std::string> codes;
    std::string error;
    bool failed() const { return !error.empty(); }
};

// Serializes batch results as TSV: header `concept_id  icon_codes  n_icons`,
// codes space-separated; failures render as `ERROR:<reason>` with n = 0.
std::string render_batch(const std::vector<BatchResult>& results);

std::vector<BatchRow> parse_batch_tsv(const std::string& path);

// Concept-id list, one per line; '#' comments and blanks ignored.
std::vector<ConceptId> load_corpus(const std::string& path);

// --- statistics -----------------------------------------------------------

struct CorpusStats {
    std::size_t total_concepts = 0;                  // successfully mapped rows
    std::map<std::size_t, std::size_t> histogram;    // icons-per-concept -> count
    std::size_t distinct_icons = 0;
    std::size_t total_assignments = 0;               // sum of n_icons
    std::size_t generic_icon_count = 0;              // rows with a bare no-pictogram icon
    std::size_t error_rows = 0;
};

CorpusStats compute_stats(const std::vector<BatchRow>& rows);

// Fixed text block. Percentages and the mean use integer tenths rounding
// (half away from zero) so independent reimplementations match exactly.
std::string render_stats(const CorpusStats& stats);

// --- review sheets ----------------------------------------------------------

struct ReviewRow {
    ConceptId concept_id = 0;
    std::string label;
    std::string relationships;               // rendered, "; "-joined
    std::vector<std::string> icon_codes;
    std::string error;
};

// `<type with spaces>: <target label>` for every known-type relationship of
// the concept, deduplicated and sorted by (type name, target label).
std::string render_relationships(const TerminologyGraph& graph, ConceptId id);

std::vector<ReviewRow> build_review_rows(const TerminologyGraph& graph,
                                         const std::vector<BatchResult>& results);

// TSV with header and empty `acceptable`/`comments` cells for the reviewers.
std::string render_review(const std::vector<ReviewRow>& rows);

// --- sampling ---------------------------------------------------------------

// splitmix64: the full 64-bit output sequence is a pure function of the
// seed, identical on every platform.
std::uint64_t splitmix64_next(std::uint64_t& state);

// Chooses `count` distinct indices from [0, population) by partial
// Fisher-Yates with modulo draws from splitmix64(seed); returns them
// ascending. count >= population returns every index.
std::vector<std::size_t> sample_indices(std::size_t population, std::size_t count,
                                        std::uint64_t seed);

}  // namespace vcmap
