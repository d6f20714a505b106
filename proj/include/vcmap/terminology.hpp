#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace vcmap {

using ConceptId = std::int64_t;

enum class SemanticTag { disorder, finding, body_structure, morphology, organism, other };

// Relationship types the engine understands. Rows with any other type are
// kept in the store (raw text preserved) but never harvested or rendered.
enum class RelType {
    is_a,
    finding_site,
    associated_morphology,
    temporal_context,
    has_interpretation,
    interprets,
    has_definitional_manifestation,
    pathological_process,
    has_focus,
    causative_agent,
    associated_with,
    due_to,
    part_of,
    unknown,
};

const std::string& rel_type_name(RelType type);
RelType parse_rel_type(const std::string& name);

const std::string& semantic_tag_name(SemanticTag tag);
SemanticTag parse_semantic_tag(const std::string& name, const std::string& context);

struct Concept {
    ConceptId id = 0;
    std::string label;
    SemanticTag tag = SemanticTag::other;
};

struct Relationship {
    ConceptId source = 0;
    RelType type = RelType::unknown;
    std::string raw_type;  // original token; equals rel_type_name(type) when known
    ConceptId destination = 0;
    int group_id = 0;

    friend bool operator==(const Relationship&, const Relationship&) = default;
};

// One entry of a harvested relationship-group list. `via` is empty for the
// queried concept itself, which every group list contains.
struct HarvestedConcept {
    std::optional<RelType> via;
    ConceptId concept_id = 0;

    friend bool operator==(const HarvestedConcept&, const HarvestedConcept&) = default;
};

struct RelationGroup {
    int group_id = 0;
    std::vector<HarvestedConcept> members;  // self first, then (type name, id) ascending
};

// Immutable concept graph. All queries are const and thread-safe after load.
class TerminologyGraph {
  public:
    static TerminologyGraph load(const std::string& concepts_path,
                                 const std::string& relationships_path);

    const Concept& concept_at(ConceptId id) const;      // throws NotFoundError
    bool has_concept(ConceptId id) const;
    std::size_t concept_count() const { return concepts_.size(); }
    std::size_t relationship_count() const { return relationships_.size(); }

    // All concept ids, ascending.
    std::vector<ConceptId> all_concepts() const;

    // Outgoing relationships of a concept, sorted by (group, type name, destination).
    const std::vector<Relationship>& outgoing(ConceptId id) const;

    // Direct is_a parents, ascending, deduplicated.
    const std::vector<ConceptId>& parents(ConceptId id) const;

    // Direct part_of wholes (the concepts this one is a part of), ascending.
    const std::vector<ConceptId>& bigger_than(ConceptId id) const;

    // True iff `ancestor` equals `descendant` or lies on its is_a closure.
    bool subsumes(ConceptId ancestor, ConceptId descendant) const;

  private:
    std::map<ConceptId, Concept> concepts_;
    std::vector<Relationship> relationships_;
    std::map<ConceptId, std::vector<Relationship>> outgoing_;
    std::map<ConceptId, std::vector<ConceptId>> parents_;
    std::map<ConceptId, std::vector<ConceptId>> wholes_;
};

TerminologyGraph load_terminology(const std::string& concepts_path,
                                  const std::string& relationships_path);

// Whitelisted-relationship harvest. Returns one group per group_id > 0 found
// on the concept, each unioned with the group-0 relationships; or a single
// group-0 list when the concept has no grouped relationships. The queried
// concept itself heads every list. is_a/part_of/unknown are never harvested.
std::vector<RelationGroup> related_concepts(const TerminologyGraph& graph, ConceptId id);

// True for types harvested by related_concepts.
bool is_harvestable(RelType type);

}  // namespace vcmap
