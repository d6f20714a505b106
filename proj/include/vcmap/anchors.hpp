#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "vcmap/terminology.hpp"
#include "vcmap/vcm_ontology.hpp"

namespace vcmap {

enum class MatchKind { exact, partial, override };

const std::string& match_kind_name(MatchKind kind);

struct AnchorEntry {
    ConceptId terminology_id = 0;
    std::string vcm_id;
    MatchKind match = MatchKind::exact;

    friend bool operator==(const AnchorEntry&, const AnchorEntry&) = default;
};

// Curated terminology-to-VCM anchor table. Immutable after construction.
class AnchorTable {
  public:
    static AnchorTable load(const std::string& path, const TerminologyGraph& graph,
                            const VcmOntology& ont);
    // Same validation as load, for tables assembled in memory.
    static AnchorTable from_entries(std::vector<AnchorEntry> entries,
                                    const TerminologyGraph& graph, const VcmOntology& ont);

    std::size_t size() const { return size_; }

    // Exact and partial anchors of a concept, sorted by (vcm id, match).
    const std::vector<AnchorEntry>& anchors_for(ConceptId id) const;

    // Override anchor, if installed. Overrides shadow ordinary anchors.
    std::optional<std::string> override_for(ConceptId id) const;

    std::vector<AnchorEntry> all_entries() const;  // deterministic order

  private:
    std::map<ConceptId, std::vector<AnchorEntry>> ordinary_;
    std::map<ConceptId, std::string> overrides_;
    std::size_t size_ = 0;
};

AnchorTable load_anchors(const std::string& path, const TerminologyGraph& graph,
                         const VcmOntology& ont);

// One anchor hit recorded while resolving, with the hierarchy depth at which
// the anchored concept was visited.
struct ResolvedAnchor {
    ConceptId terminology_id = 0;
    std::string vcm_id;
    MatchKind match = MatchKind::exact;
    int depth = 0;

    friend bool operator==(const ResolvedAnchor&, const ResolvedAnchor&) = default;
};

struct ResolutionTrace {
    ConceptId start = 0;
    std::vector<ConceptId> visited;        // breadth-first order, no duplicates
    std::vector<ResolvedAnchor> matched;   // in visit order
    int depth = 0;                         // deepest level visited
};

// Maps one terminology concept to VCM medical concepts. Walks breadth-first
// over the union of is_a parents and part_of wholes, visiting each level in
// ascending id order. An override stops its branch with a single concept; a
// concept with any exact anchor contributes all its anchors and stops; a
// partial anchor contributes and the walk continues; an unanchored concept
// just continues. A visited set guards against revisits.
std::pair<std::set<std::string>, ResolutionTrace> resolve(const AnchorTable& table,
                                                          const TerminologyGraph& graph,
                                                          ConceptId id);

struct AmbiguityRow {
    ConceptId concept_id = 0;
    std::set<std::string> pictograms;

    friend bool operator==(const AmbiguityRow&, const AmbiguityRow&) = default;
};

// Scans every body-structure concept and reports those whose resolution
// reaches two or more distinct central pictograms and that carry no
// override. Rows ascend by concept id.
std::vector<AmbiguityRow> detect_ambiguities(const AnchorTable& table,
                                             const TerminologyGraph& graph,
                                             const VcmOntology& ont);

}  // namespace vcmap
