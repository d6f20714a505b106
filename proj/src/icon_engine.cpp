#include "vcmap/icon_engine.hpp"

#include <algorithm>
#include <sstream>
#include <thread>

#include "vcmap/errors.hpp"

namespace vcmap {

namespace {

bool contains(const std::set<std::string>& set, const std::string& value) {
    return set.count(value) != 0;
}

}  // namespace

AssemblyResult assemble(const VcmOntology& ont, const std::vector<IconPrimitive>& primitives) {
    std::vector<IconPrimitive> prims = primitives;
    std::sort(prims.begin(), prims.end());
    prims.erase(std::unique(prims.begin(), prims.end()), prims.end());

    std::set<std::string> colors, shapes;
    std::vector<std::string> pictograms, modifiers;
    for (const IconPrimitive& prim : prims) {
        if (!ont.has_primitive(prim.kind, prim.code)) {
            throw NotFoundError("unknown primitive " + primitive_kind_name(prim.kind) + ":" +
                                prim.code);
        }
        switch (prim.kind) {
            case PrimitiveKind::color: colors.insert(prim.code); break;
            case PrimitiveKind::base_shape: shapes.insert(prim.code); break;
            case PrimitiveKind::central_pictogram: pictograms.push_back(prim.code); break;
            case PrimitiveKind::shape_modifier: modifiers.push_back(prim.code); break;
        }
    }

    // Resolved temporal context wins over the default color; past outranks
    // risk when both appear. The shape turns physiological only when physio
    // resolved and no explicit patho primitive did.
    std::string color = contains(colors, "past")   ? "past"
                        : contains(colors, "risk") ? "risk"
                                                   : "current";
    std::string shape =
        contains(shapes, "physio") && !contains(shapes, "patho") ? "physio" : "patho";

    if (modifiers.size() > kMaxModifiers) {
        throw ValidationError("assembly with " + std::to_string(modifiers.size()) +
                              " distinct modifiers exceeds the limit of " +
                              std::to_string(kMaxModifiers));
    }
    if (pictograms.empty()) pictograms.push_back("");  // the no-pictogram icon

    AssemblyResult result;
    std::vector<Icon> consistent;
    result.candidates = pictograms.size() << modifiers.size();
    for (const std::string& pictogram : pictograms) {
        for (std::size_t mask = 0; mask < (std::size_t{1} << modifiers.size()); ++mask) {
            Icon icon;
            icon.color = color;
            icon.shape = shape;
            icon.pictogram = pictogram;
            for (std::size_t bit = 0; bit < modifiers.size(); ++bit) {
                if (mask & (std::size_t{1} << bit)) icon.modifiers.push_back(modifiers[bit]);
            }
            if (ont.is_consistent(icon)) {
                consistent.push_back(std::move(icon));
            } else {
                ++result.removed_inconsistent;
            }
        }
    }

    for (const Icon& icon : consistent) {
        bool dominated = std::any_of(consistent.begin(), consistent.end(), [&](const Icon& other) {
            return ont.is_more_specific(other, icon);
        });
        if (dominated) {
            ++result.removed_dominated;
        } else {
            result.icons.push_back(icon);
        }
    }
    std::sort(result.icons.begin(), result.icons.end(), [](const Icon& a, const Icon& b) {
        return icon_code(a) < icon_code(b);
    });
    return result;
}

IconSet generate_icons(const TerminologyGraph& graph, const VcmOntology& ont,
                       const AnchorTable& table, ConceptId id) {
    graph.concept_at(id);

    IconSet set;
    set.concept_id = id;
    set.report.concept_id = id;

    std::vector<Icon> merged;
    for (const RelationGroup& group : related_concepts(graph, id)) {
        GroupTrace trace;
        trace.group_id = group.group_id;
        trace.harvested = group.members;

        std::set<ConceptId> resolved_members;
        for (const HarvestedConcept& member : group.members) {
            if (!resolved_members.insert(member.concept_id).second) continue;
            auto [vcm_ids, member_trace] = resolve(table, graph, member.concept_id);
            trace.resolved.insert(vcm_ids.begin(), vcm_ids.end());
            trace.traces.push_back(std::move(member_trace));
        }
        trace.retained = ont.most_specific_concepts(trace.resolved);

        std::vector<IconPrimitive> prims;
        for (const std::string& vcm_id : trace.retained) {
            const auto& linked = ont.primitives_for(vcm_id);
            prims.insert(prims.end(), linked.begin(), linked.end());
        }
        std::sort(prims.begin(), prims.end());
        prims.erase(std::unique(prims.begin(), prims.end()), prims.end());
        trace.primitives = prims;

        trace.assembly = assemble(ont, prims);
        merged.insert(merged.end(), trace.assembly.icons.begin(), trace.assembly.icons.end());
        set.report.groups.push_back(std::move(trace));
    }

    // Merge: dedupe identical icons, then prune across groups.
    std::sort(merged.begin(), merged.end(), [](const Icon& a, const Icon& b) {
        return icon_code(a) < icon_code(b);
    });
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
    set.report.merged_candidates = merged.size();
    for (const Icon& icon : merged) {
        bool dominated = std::any_of(merged.begin(), merged.end(), [&](const Icon& other) {
            return ont.is_more_specific(other, icon);
        });
        if (dominated) {
            ++set.report.removed_cross_group;
        } else {
            set.icons.push_back(icon);
        }
    }
    return set;
}

std::vector<BatchResult> batch_generate(const TerminologyGraph& graph, const VcmOntology& ont,
                                        const AnchorTable& table,
                                        const std::vector<ConceptId>& ids, unsigned threads) {
    std::vector<BatchResult> results(ids.size());
    auto map_one = [&](std::size_t i) {
        results[i].concept_id = ids[i];
        try {
            results[i].icons = generate_icons(graph, ont, table, ids[i]);
        } catch (const std::exception& e) {
            results[i].error = e.what();
        }
    };

    if (threads <= 1 || ids.size() < 2) {
        for (std::size_t i = 0; i < ids.size(); ++i) map_one(i);
        return results;
    }
    unsigned n = std::min<std::size_t>(threads, ids.size());
    std::vector<std::thread> workers;
    workers.reserve(n);
    for (unsigned w = 0; w < n; ++w) {
        workers.emplace_back([&, w] {
            for (std::size_t i = w; i < ids.size(); i += n) map_one(i);
        });
    }
    for (std::thread& worker : workers) worker.join();
    return results;
}

std::string render_report(const TerminologyGraph& graph, const MappingReport& report) {
    std::ostringstream out;
    out << "concept " << report.concept_id << " (" << graph.concept_at(report.concept_id).label << ")\n";
    for (const GroupTrace& group : report.groups) {
        out << "group " << group.group_id << "\n";
        out << "  members:";
        for (std::size_t i = 0; i < group.harvested.size(); ++i) {
            const HarvestedConcept& member = group.harvested[i];
            out << (i ? "; " : " ");
            out << (member.via ? rel_type_name(*member.via) : "self") << " " << member.concept_id;
        }
        out << "\n";
        for (const ResolutionTrace& trace : group.traces) {
            out << "  resolve " << trace.start << " (depth " << trace.depth << ", visited "
                << trace.visited.size() << "):";
            if (trace.matched.empty()) out << " -";
            for (std::size_t i = 0; i < trace.matched.size(); ++i) {
                const ResolvedAnchor& hit = trace.matched[i];
                out << (i ? "; " : " ");
                out << hit.vcm_id << " [" << match_kind_name(hit.match) << " via "
                    << hit.terminology_id << " @" << hit.depth << "]";
            }
            out << "\n";
        }
        out << "  retained:";
        if (group.retained.empty()) out << " -";
        bool first = true;
        for (const std::string& id : group.retained) {
            out << (first ? " " : ", ") << id;
            first = false;
        }
        out << "\n";
        out << "  primitives:";
        if (group.primitives.empty()) out << " -";
        for (std::size_t i = 0; i < group.primitives.size(); ++i) {
            out << (i ? ", " : " ");
            out << primitive_kind_name(group.primitives[i].kind) << ":"
                << group.primitives[i].code;
        }
        out << "\n";
        out << "  assembly: candidates=" << group.assembly.candidates
            << " inconsistent=" << group.assembly.removed_inconsistent
            << " dominated=" << group.assembly.removed_dominated
            << " icons=" << group.assembly.icons.size() << "\n";
    }
    out << "merge: candidates=" << report.merged_candidates
        << " dominated=" << report.removed_cross_group << "\n";
    return out.str();
}

}  // namespace vcmap
