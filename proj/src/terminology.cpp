#include "vcmap/terminology.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <sstream>

#include "vcmap/errors.hpp"
#include "vcmap/tsv.hpp"

namespace vcmap {

namespace {

const std::array<std::string, 14> kRelNames = {
    "is_a",
    "finding_site",
    "associated_morphology",
    "temporal_context",
    "has_interpretation",
    "interprets",
    "has_definitional_manifestation",
    "pathological_process",
    "has_focus",
    "causative_agent",
    "associated_with",
    "due_to",
    "part_of",
    "unknown",
};

const std::array<std::string, 6> kTagNames = {
    "disorder", "finding", "body-structure", "morphology", "organism", "other",
};

// Detects a cycle in `edges` (adjacency by id) and returns one as a path,
// or an empty vector when the axis is acyclic. Iterative three-color DFS.
std::vector<ConceptId> find_cycle(const std::map<ConceptId, std::vector<ConceptId>>& edges) {
    enum class Mark { white, grey, black };
    std::map<ConceptId, Mark> mark;
    for (const auto& [id, _] : edges) mark[id] = Mark::white;

    for (const auto& [root, _] : edges) {
        if (mark[root] != Mark::white) continue;
        // stack of (node, next child index); path mirrors the grey chain.
        std::vector<std::pair<ConceptId, std::size_t>> stack{{root, 0}};
        mark[root] = Mark::grey;
        while (!stack.empty()) {
            auto& [node, next] = stack.back();
            auto it = edges.find(node);
            const std::vector<ConceptId>* children = it == edges.end() ? nullptr : &it->second;
            if (children && next < children->size()) {
                ConceptId child = (*children)[next++];
                auto state = mark.find(child);
                Mark m = state == mark.end() ? Mark::white : state->second;
                if (m == Mark::grey) {
                    std::vector<ConceptId> cycle;
                    auto at = std::find_if(stack.begin(), stack.end(),
                                           [child](const auto& p) { return p.first == child; });
                    for (; at != stack.end(); ++at) cycle.push_back(at->first);
                    cycle.push_back(child);
                    return cycle;
                }
                if (m == Mark::white) {
                    mark[child] = Mark::grey;
                    stack.emplace_back(child, 0);
                }
            } else {
                mark[node] = Mark::black;
                stack.pop_back();
            }
        }
    }
    return {};
}

std::string join_ids(const std::vector<ConceptId>& ids, const char* sep) {
    std::ostringstream out;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i) out << sep;
        out << ids[i];
    }
    return out.str();
}

}  // namespace

const std::string& rel_type_name(RelType type) {
    return kRelNames[static_cast<std::size_t>(type)];
}

RelType parse_rel_type(const std::string& name) {
    for (std::size_t i = 0; i + 1 < kRelNames.size(); ++i) {
        if (kRelNames[i] == name) return static_cast<RelType>(i);
    }
    return RelType::unknown;
}

const std::string& semantic_tag_name(SemanticTag tag) {
    return kTagNames[static_cast<std::size_t>(tag)];
}

SemanticTag parse_semantic_tag(const std::string& name, const std::string& context) {
    for (std::size_t i = 0; i < kTagNames.size(); ++i) {
        if (kTagNames[i] == name) return static_cast<SemanticTag>(i);
    }
    throw ParseError(context + ": unknown semantic tag '" + name + "'");
}

bool is_harvestable(RelType type) {
    switch (type) {
        case RelType::is_a:
        case RelType::part_of:
        case RelType::unknown:
            return false;
        default:
            return true;
    }
}

TerminologyGraph TerminologyGraph::load(const std::string& concepts_path,
                                        const std::string& relationships_path) {
    TerminologyGraph graph;

    for (const TsvRow& row : read_tsv(concepts_path, {"id", "label", "semantic_tag"})) {
        std::string context = concepts_path + ":" + std::to_string(row.line_no);
        Concept c;
        c.id = parse_id(row.fields[0], context);
        c.label = row.fields[1];
        if (c.label.empty()) throw ParseError(context + ": empty label");
        c.tag = parse_semantic_tag(row.fields[2], context);
        if (!graph.concepts_.emplace(c.id, c).second) {
            throw ValidationError(context + ": duplicate concept id " + row.fields[0]);
        }
    }

    std::set<ConceptId> dangling;
    std::set<std::tuple<ConceptId, std::string, ConceptId, int>> seen;
    for (const TsvRow& row :
         read_tsv(relationships_path, {"source_id", "rel_type", "destination_id", "group_id"})) {
        std::string context = relationships_path + ":" + std::to_string(row.line_no);
        Relationship rel;
        rel.source = parse_id(row.fields[0], context);
        rel.raw_type = row.fields[1];
        if (rel.raw_type.empty()) throw ParseError(context + ": empty rel_type");
        rel.type = parse_rel_type(rel.raw_type);
        rel.destination = parse_id(row.fields[2], context);
        rel.group_id = parse_group_id(row.fields[3], context);
        if (!graph.concepts_.count(rel.source)) dangling.insert(rel.source);
        if (!graph.concepts_.count(rel.destination)) dangling.insert(rel.destination);
        // Exact duplicate rows collapse to one; load stays idempotent.
        if (!seen.emplace(rel.source, rel.raw_type, rel.destination, rel.group_id).second) {
            continue;
        }
        graph.relationships_.push_back(std::move(rel));
    }
    if (!dangling.empty()) {
        throw ReferenceError(relationships_path + ": undefined concept ids: " +
                             join_ids({dangling.begin(), dangling.end()}, ", "));
    }

    for (const Relationship& rel : graph.relationships_) {
        graph.outgoing_[rel.source].push_back(rel);
        if (rel.type == RelType::is_a) graph.parents_[rel.source].push_back(rel.destination);
        if (rel.type == RelType::part_of) graph.wholes_[rel.source].push_back(rel.destination);
    }
    for (auto& [_, rels] : graph.outgoing_) {
        std::sort(rels.begin(), rels.end(), [](const Relationship& a, const Relationship& b) {
            return std::tie(a.group_id, a.raw_type, a.destination) <
                   std::tie(b.group_id, b.raw_type, b.destination);
        });
    }
    for (auto* index : {&graph.parents_, &graph.wholes_}) {
        for (auto& [_, ids] : *index) {
            std::sort(ids.begin(), ids.end());
            ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        }
    }

    if (auto cycle = find_cycle(graph.parents_); !cycle.empty()) {
        throw CycleError(relationships_path + ": is_a cycle: " + join_ids(cycle, " -> "));
    }
    if (auto cycle = find_cycle(graph.wholes_); !cycle.empty()) {
        throw CycleError(relationships_path + ": part_of cycle: " + join_ids(cycle, " -> "));
    }
    return graph;
}

TerminologyGraph load_terminology(const std::string& concepts_path,
                                  const std::string& relationships_path) {
    return TerminologyGraph::load(concepts_path, relationships_path);
}

const Concept& TerminologyGraph::concept_at(ConceptId id) const {
    auto it = concepts_.find(id);
    if (it == concepts_.end()) {
        throw NotFoundError("unknown concept id " + std::to_string(id));
    }
    return it->second;
}

bool TerminologyGraph::has_concept(ConceptId id) const { return concepts_.count(id) != 0; }

std::vector<ConceptId> TerminologyGraph::all_concepts() const {
    std::vector<ConceptId> ids;
    ids.reserve(concepts_.size());
    for (const auto& [id, _] : concepts_) ids.push_back(id);
    return ids;
}

const std::vector<Relationship>& TerminologyGraph::outgoing(ConceptId id) const {
    concept_at(id);
    static const std::vector<Relationship> empty;
    auto it = outgoing_.find(id);
    return it == outgoing_.end() ? empty : it->second;
}

const std::vector<ConceptId>& TerminologyGraph::parents(ConceptId id) const {
    concept_at(id);
    static const std::vector<ConceptId> empty;
    auto it = parents_.find(id);
    return it == parents_.end() ? empty : it->second;
}

const std::vector<ConceptId>& TerminologyGraph::bigger_than(ConceptId id) const {
    concept_at(id);
    static const std::vector<ConceptId> empty;
    auto it = wholes_.find(id);
    return it == wholes_.end() ? empty : it->second;
}

bool TerminologyGraph::subsumes(ConceptId ancestor, ConceptId descendant) const {
    concept_at(ancestor);
    concept_at(descendant);
    if (ancestor == descendant) return true;
    std::set<ConceptId> visited{descendant};
    std::vector<ConceptId> frontier{descendant};
    while (!frontier.empty()) {
        std::vector<ConceptId> next;
        for (ConceptId c : frontier) {
            for (ConceptId p : parents(c)) {
                if (p == ancestor) return true;
                if (visited.insert(p).second) next.push_back(p);
            }
        }
        frontier = std::move(next);
    }
    return false;
}

std::vector<RelationGroup> related_concepts(const TerminologyGraph& graph, ConceptId id) {
    graph.concept_at(id);

    std::vector<Relationship> harvested;
    std::set<int> group_ids;
    for (const Relationship& rel : graph.outgoing(id)) {
        if (!is_harvestable(rel.type)) continue;
        harvested.push_back(rel);
        if (rel.group_id > 0) group_ids.insert(rel.group_id);
    }

    auto build = [&](int group_id) {
        RelationGroup group;
        group.group_id = group_id;
        group.members.push_back(HarvestedConcept{std::nullopt, id});
        std::vector<HarvestedConcept> rest;
        for (const Relationship& rel : harvested) {
            if (rel.group_id != 0 && rel.group_id != group_id) continue;
            rest.push_back(HarvestedConcept{rel.type, rel.destination});
        }
        std::sort(rest.begin(), rest.end(), [](const HarvestedConcept& a, const HarvestedConcept& b) {
            return std::tie(rel_type_name(*a.via), a.concept_id) <
                   std::tie(rel_type_name(*b.via), b.concept_id);
        });
        rest.erase(std::unique(rest.begin(), rest.end()), rest.end());
        group.members.insert(group.members.end(), rest.begin(), rest.end());
        return group;
    };

    std::vector<RelationGroup> groups;
    if (group_ids.empty()) {
        groups.push_back(build(0));
    } else {
        for (int g : group_ids) groups.push_back(build(g));
    }
    return groups;
}

}  // namespace vcmap
