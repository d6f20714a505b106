#include "vcmap/anchors.hpp"

#include <algorithm>
#include <array>

#include "vcmap/errors.hpp"
#include "vcmap/tsv.hpp"

namespace vcmap {

namespace {

const std::array<std::string, 3> kMatchNames = {"exact", "partial", "override"};

MatchKind parse_match(const std::string& name, const std::string& context) {
    for (std::size_t i = 0; i < kMatchNames.size(); ++i) {
        if (kMatchNames[i] == name) return static_cast<MatchKind>(i);
    }
    throw ParseError(context + ": unknown match kind '" + name + "'");
}

}  // namespace

const std::string& match_kind_name(MatchKind kind) {
    return kMatchNames[static_cast<std::size_t>(kind)];
}

AnchorTable AnchorTable::from_entries(std::vector<AnchorEntry> entries,
                                      const TerminologyGraph& graph, const VcmOntology& ont) {
    AnchorTable table;
    std::set<std::pair<ConceptId, std::string>> seen;
    for (AnchorEntry& entry : entries) {
        std::string where = "anchor " + std::to_string(entry.terminology_id) + " -> " +
                            entry.vcm_id;
        if (!graph.has_concept(entry.terminology_id)) {
            throw ReferenceError(where + ": undefined terminology id");
        }
        if (!ont.has_concept(entry.vcm_id)) {
            throw ReferenceError(where + ": undefined VCM concept");
        }
        if (!seen.emplace(entry.terminology_id, entry.vcm_id).second) {
            throw ValidationError(where + ": duplicate anchor row");
        }
        if (entry.match == MatchKind::override) {
            int pictograms = 0;
            for (const IconPrimitive& prim : ont.primitives_for(entry.vcm_id)) {
                if (prim.kind == PrimitiveKind::central_pictogram) ++pictograms;
            }
            if (pictograms != 1) {
                throw ValidationError(where + ": override target must carry exactly one "
                                      "central pictogram, has " + std::to_string(pictograms));
            }
            if (!table.overrides_.emplace(entry.terminology_id, entry.vcm_id).second) {
                throw ValidationError(where + ": concept already has an override");
            }
        } else {
            table.ordinary_[entry.terminology_id].push_back(entry);
        }
        ++table.size_;
    }
    for (auto& [_, list] : table.ordinary_) {
        std::sort(list.begin(), list.end(), [](const AnchorEntry& a, const AnchorEntry& b) {
            return std::tie(a.vcm_id, a.match) < std::tie(b.vcm_id, b.match);
        });
    }
    return table;
}

AnchorTable AnchorTable::load(const std::string& path, const TerminologyGraph& graph,
                              const VcmOntology& ont) {
    std::vector<AnchorEntry> entries;
    for (const TsvRow& row : read_tsv(path, {"terminology_id", "vcm_id", "match"})) {
        std::string context = path + ":" + std::to_string(row.line_no);
        AnchorEntry entry;
        entry.terminology_id = parse_id(row.fields[0], context);
        entry.vcm_id = row.fields[1];
        if (entry.vcm_id.empty()) throw ParseError(context + ": empty vcm_id");
        entry.match = parse_match(row.fields[2], context);
        entries.push_back(std::move(entry));
    }
    return from_entries(std::move(entries), graph, ont);
}

AnchorTable load_anchors(const std::string& path, const TerminologyGraph& graph,
                         const VcmOntology& ont) {
    return AnchorTable::load(path, graph, ont);
}

const std::vector<AnchorEntry>& AnchorTable::anchors_for(ConceptId id) const {
    static const std::vector<AnchorEntry> empty;
    auto it = ordinary_.find(id);
    return it == ordinary_.end() ? empty : it->second;
}

std::optional<std::string> AnchorTable::override_for(ConceptId id) const {
    auto it = overrides_.find(id);
    if (it == overrides_.end()) return std::nullopt;
    return it->second;
}

std::vector<AnchorEntry> AnchorTable::all_entries() const {
    std::vector<AnchorEntry> out;
    for (const auto& [_, list] : ordinary_) out.insert(out.end(), list.begin(), list.end());
    for (const auto& [id, vcm] : overrides_) {
        out.push_back(AnchorEntry{id, vcm, MatchKind::override});
    }
    return out;
}

std::pair<std::set<std::string>, ResolutionTrace> resolve(const AnchorTable& table,
                                                          const TerminologyGraph& graph,
                                                          ConceptId id) {
    graph.concept_at(id);

    std::set<std::string> result;
    ResolutionTrace trace;
    trace.start = id;

    std::set<ConceptId> enqueued{id};
    std::vector<ConceptId> frontier{id};
    int level = 0;
    while (!frontier.empty()) {
        std::vector<ConceptId> next;
        for (ConceptId current : frontier) {
            trace.visited.push_back(current);
            trace.depth = level;

            if (auto override_id = table.override_for(current)) {
                result.insert(*override_id);
                trace.matched.push_back(
                    ResolvedAnchor{current, *override_id, MatchKind::override, level});
                continue;  // branch stops
            }
            const std::vector<AnchorEntry>& anchors = table.anchors_for(current);
            bool has_exact = std::any_of(anchors.begin(), anchors.end(), [](const AnchorEntry& a) {
                return a.match == MatchKind::exact;
            });
            for (const AnchorEntry& anchor : anchors) {
                result.insert(anchor.vcm_id);
                trace.matched.push_back(
                    ResolvedAnchor{current, anchor.vcm_id, anchor.match, level});
            }
            if (has_exact) continue;  // branch stops

            for (const auto* axis : {&graph.parents(current), &graph.bigger_than(current)}) {
                for (ConceptId up : *axis) {
                    if (enqueued.insert(up).second) next.push_back(up);
                }
            }
        }
        std::sort(next.begin(), next.end());
        frontier = std::move(next);
        ++level;
    }
    return {std::move(result), std::move(trace)};
}

std::vector<AmbiguityRow> detect_ambiguities(const AnchorTable& table,
                                             const TerminologyGraph& graph,
                                             const VcmOntology& ont) {
    std::vector<AmbiguityRow> rows;
    for (ConceptId id : graph.all_concepts()) {
        if (graph.concept_at(id).tag != SemanticTag::body_structure) continue;
        if (table.override_for(id)) continue;
        auto [resolved, trace] = resolve(table, graph, id);
        AmbiguityRow row;
        row.concept_id = id;
        for (const std::string& vcm_id : resolved) {
            for (const IconPrimitive& prim : ont.primitives_for(vcm_id)) {
                if (prim.kind == PrimitiveKind::central_pictogram) {
                    row.pictograms.insert(prim.code);
                }
            }
        }
        if (row.pictograms.size() >= 2) rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace vcmap
