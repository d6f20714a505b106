#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vcmap/anchors.hpp"
#include "vcmap/terminology.hpp"
#include "vcmap/vcm_ontology.hpp"

namespace vcmap {

// Hard cap on distinct modifiers entering one assembly (the candidate space
// is the modifier powerset). Crossing it is a generation error, not a trim.
inline constexpr std::size_t kMaxModifiers = 10;

struct AssemblyResult {
    std::vector<Icon> icons;            // ascending by icon_code
    std::size_t candidates = 0;         // pictograms x modifier subsets
    std::size_t removed_inconsistent = 0;
    std::size_t removed_dominated = 0;
};

// Step 5: builds every (pictogram, modifier subset) icon from the primitive
// list, drops rule violations, then drops every icon for which a strictly
// more specific consistent icon exists. Color and base-shape primitives in
// the list override the current/patho defaults. With no pictogram at all,
// candidates carry the empty pictogram.
AssemblyResult assemble(const VcmOntology& ont, const std::vector<IconPrimitive>& primitives);

// What happened inside one relationship group, step by step.
struct GroupTrace {
    int group_id = 0;
    std::vector<HarvestedConcept> harvested;    // step 1
    std::vector<ResolutionTrace> traces;        // step 2, one per distinct member
    std::set<std::string> resolved;             // step 2, union
    std::set<std::string> retained;             // step 3
    std::vector<IconPrimitive> primitives;      // step 4
    AssemblyResult assembly;                    // step 5
};

struct MappingReport {
    ConceptId concept_id = 0;
    std::vector<GroupTrace> groups;
    std::size_t merged_candidates = 0;     // distinct icons across groups
    std::size_t removed_cross_group = 0;   // dominated during the merge
};

struct IconSet {
    ConceptId concept_id = 0;
    std::vector<Icon> icons;   // ascending by icon_code, never empty
    MappingReport report;
};

// Full pipeline for one concept: harvest groups, resolve every member,
// keep most specific concepts, expand primitives, assemble, then merge the
// group icon sets (union, cross-group dominance pruning, deduplication).
IconSet generate_icons(const TerminologyGraph& graph, const VcmOntology& ont,
                       const AnchorTable& table, ConceptId id);

struct BatchResult {
    ConceptId concept_id = 0;
    std::optional<IconSet> icons;   // empty on error
    std::string error;
};

// Maps many concepts; per-concept failures are recorded, not thrown. With
// threads > 1 the work is split across worker threads; results are slotted
// by index, so output is identical to the sequential run.
std::vector<BatchResult> batch_generate(const TerminologyGraph& graph, const VcmOntology& ont,
                                        const AnchorTable& table,
                                        const std::vector<ConceptId>& ids,
                                        unsigned threads = 1);

// Deterministic multi-line text dump of a mapping report.
std::string render_report(const TerminologyGraph& graph, const MappingReport& report);

}  // namespace vcmap
