#include "vcmap/vcm_ontology.hpp"

#include <algorithm>
#include <array>
#include <fstream>

#include "vcmap/errors.hpp"
#include "vcmap/tsv.hpp"

namespace vcmap {

namespace {

const std::array<std::string, 4> kKindNames = {
    "color", "base_shape", "central_pictogram", "shape_modifier"};

const std::array<std::string, 5> kCategoryNames = {
    "anatomical_structure", "biological_function", "pathological_process",
    "patient_characteristic", "temporal_aspect"};

const std::set<std::string> kColorCodes = {"current", "risk", "past"};
const std::set<std::string> kShapeCodes = {"physio", "patho"};

PrimitiveKind parse_kind(const std::string& name, const std::string& context) {
    for (std::size_t i = 0; i < kKindNames.size(); ++i) {
        if (kKindNames[i] == name) return static_cast<PrimitiveKind>(i);
    }
    throw ParseError(context + ": unknown primitive kind '" + name + "'");
}

VcmCategory parse_category(const std::string& name, const std::string& context) {
    for (std::size_t i = 0; i < kCategoryNames.size(); ++i) {
        if (kCategoryNames[i] == name) return static_cast<VcmCategory>(i);
    }
    throw ParseError(context + ": unknown category '" + name + "'");
}

// Medical concept ids are lowercase tokens with optional ':' namespacing.
bool is_vcm_id(const std::string& text) {
    if (text.empty() || text[0] < 'a' || text[0] > 'z') return false;
    for (char c : text) {
        bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == ':';
        if (!ok) return false;
    }
    return true;
}

// Parses `<kind>:<code>`; `central_pictogram:_` is allowed when
// `allow_none_pictogram` (the no-pictogram rule target).
IconPrimitive parse_kind_code(const std::string& text, const std::string& context,
                              bool allow_none_pictogram = false) {
    std::size_t colon = text.find(':');
    if (colon == std::string::npos) {
        throw ParseError(context + ": expected kind:code, got '" + text + "'");
    }
    IconPrimitive prim;
    prim.kind = parse_kind(text.substr(0, colon), context);
    prim.code = text.substr(colon + 1);
    bool none_ok = allow_none_pictogram && prim.kind == PrimitiveKind::central_pictogram &&
                   prim.code == "_";
    if (!none_ok && !is_code_token(prim.code)) {
        throw ParseError(context + ": bad primitive code '" + prim.code + "'");
    }
    return prim;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> items;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = text.find(',', start);
        if (comma == std::string::npos) {
            items.push_back(text.substr(start));
            return items;
        }
        items.push_back(text.substr(start, comma - start));
        start = comma + 1;
    }
}

// Value of a `name=<...|->` field; "-" means empty list.
std::vector<std::string> parse_listed_field(const std::string& field, const std::string& name,
                                            const std::string& context) {
    std::string prefix = name + "=";
    if (field.rfind(prefix, 0) != 0) {
        throw ParseError(context + ": expected '" + prefix + "...', got '" + field + "'");
    }
    std::string value = field.substr(prefix.size());
    if (value.empty()) throw ParseError(context + ": empty " + name + " field");
    if (value == "-") return {};
    return split_list(value);
}

// Cycle detection over string-keyed adjacency; returns one cycle or empty.
std::vector<std::string> find_cycle(
    const std::map<std::string, std::vector<std::string>>& edges) {
    enum class Mark { white, grey, black };
    std::map<std::string, Mark> mark;
    std::vector<std::string> cycle;

    auto dfs = [&](auto&& self, const std::string& node,
                   std::vector<std::string>& path) -> bool {
        mark[node] = Mark::grey;
        path.push_back(node);
        auto it = edges.find(node);
        if (it != edges.end()) {
            for (const std::string& next : it->second) {
                auto state = mark.find(next);
                Mark m = state == mark.end() ? Mark::white : state->second;
                if (m == Mark::grey) {
                    auto at = std::find(path.begin(), path.end(), next);
                    cycle.assign(at, path.end());
                    cycle.push_back(next);
                    return true;
                }
                if (m == Mark::white && self(self, next, path)) return true;
            }
        }
        mark[node] = Mark::black;
        path.pop_back();
        return false;
    };

    for (const auto& [node, _] : edges) {
        if (mark.find(node) == mark.end()) {
            std::vector<std::string> path;
            if (dfs(dfs, node, path)) return cycle;
        }
    }
    return {};
}

std::string join(const std::vector<std::string>& items, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += sep;
        out += items[i];
    }
    return out;
}

}  // namespace

const std::string& primitive_kind_name(PrimitiveKind kind) {
    return kKindNames[static_cast<std::size_t>(kind)];
}

const std::string& vcm_category_name(VcmCategory category) {
    return kCategoryNames[static_cast<std::size_t>(category)];
}

VcmOntology VcmOntology::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw NotFoundError(path + ": cannot open file");

    VcmOntology ont;
    struct PendingConcept {
        VcmMedicalConcept node;
        std::vector<IconPrimitive> prims;
        std::string context;
    };
    std::vector<PendingConcept> pending;
    struct PendingLink {
        IconPrimitive specific, general;
        std::string context;
    };
    std::vector<PendingLink> links;
    struct PendingRule {
        ConsistencyRule rule;
        std::string context;
    };
    std::vector<PendingRule> rules;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> fields = split_tabs(line);
        if (fields.size() == 1 && fields[0].empty()) continue;
        std::string context = path + ":" + std::to_string(line_no);
        const std::string& tag = fields[0];

        if (tag == "primitive") {
            if (fields.size() != 3) throw ParseError(context + ": primitive needs 3 fields");
            PrimitiveKind kind = parse_kind(fields[1], context);
            const std::string& code = fields[2];
            if (!is_code_token(code)) {
                throw ParseError(context + ": bad primitive code '" + code + "'");
            }
            if (kind == PrimitiveKind::color && !kColorCodes.count(code)) {
                throw ValidationError(context + ": color code must be one of current/risk/past");
            }
            if (kind == PrimitiveKind::base_shape && !kShapeCodes.count(code)) {
                throw ValidationError(context + ": base_shape code must be physio or patho");
            }
            if (!ont.primitives_[kind].insert(code).second) {
                throw ValidationError(context + ": duplicate primitive " +
                                      primitive_kind_name(kind) + ":" + code);
            }
        } else if (tag == "concept") {
            if (fields.size() != 5) throw ParseError(context + ": concept needs 5 fields");
            PendingConcept p;
            p.context = context;
            p.node.id = fields[1];
            if (!is_vcm_id(p.node.id)) {
                throw ParseError(context + ": bad concept id '" + fields[1] + "'");
            }
            p.node.category = parse_category(fields[2], context);
            p.node.parents = parse_listed_field(fields[3], "parents", context);
            for (const std::string& prim : parse_listed_field(fields[4], "prims", context)) {
                p.prims.push_back(parse_kind_code(prim, context));
            }
            pending.push_back(std::move(p));
        } else if (tag == "forbid") {
            if (fields.size() != 3) throw ParseError(context + ": forbid needs 3 fields");
            PendingRule r;
            r.context = context;
            r.rule.first = parse_kind_code(fields[1], context, /*allow_none_pictogram=*/true);
            r.rule.second = parse_kind_code(fields[2], context);
            if (r.rule.first.kind != PrimitiveKind::central_pictogram &&
                r.rule.first.kind != PrimitiveKind::shape_modifier) {
                throw ParseError(context + ": forbid expects a pictogram or modifier first");
            }
            if (r.rule.second.kind != PrimitiveKind::shape_modifier) {
                throw ParseError(context + ": forbid expects a shape_modifier second");
            }
            rules.push_back(std::move(r));
        } else if (tag == "spec") {
            if (fields.size() != 3) throw ParseError(context + ": spec needs 3 fields");
            PendingLink l;
            l.context = context;
            l.specific = parse_kind_code(fields[1], context);
            l.general = parse_kind_code(fields[2], context);
            if (l.specific.kind != l.general.kind) {
                throw ParseError(context + ": spec link must stay within one kind");
            }
            if (l.specific.kind != PrimitiveKind::central_pictogram &&
                l.specific.kind != PrimitiveKind::shape_modifier) {
                throw ParseError(context + ": spec links apply to pictograms or modifiers");
            }
            if (l.specific.code == l.general.code) {
                throw ValidationError(context + ": spec link relates a code to itself");
            }
            links.push_back(std::move(l));
        } else {
            throw ParseError(context + ": unknown line tag '" + tag + "'");
        }
    }

    // Cross-references are resolved after the whole file is read, so lines
    // may reference concepts and primitives defined later.
    for (PendingConcept& p : pending) {
        for (const IconPrimitive& prim : p.prims) {
            if (!ont.has_primitive(prim.kind, prim.code)) {
                throw ReferenceError(p.context + ": undefined primitive " +
                                     primitive_kind_name(prim.kind) + ":" + prim.code);
            }
        }
        std::sort(p.prims.begin(), p.prims.end());
        p.prims.erase(std::unique(p.prims.begin(), p.prims.end()), p.prims.end());
        std::sort(p.node.parents.begin(), p.node.parents.end());
        p.node.parents.erase(
            std::unique(p.node.parents.begin(), p.node.parents.end()),
            p.node.parents.end());
        p.node.primitives = std::move(p.prims);
        if (p.node.category == VcmCategory::anatomical_structure) {
            int pictograms = 0;
            for (const IconPrimitive& prim : p.node.primitives) {
                if (prim.kind == PrimitiveKind::central_pictogram) ++pictograms;
            }
            if (pictograms > 1) {
                throw ValidationError(p.context + ": anatomical structure " + p.node.id +
                                      " links more than one central pictogram");
            }
        }
        if (!ont.concepts_.emplace(p.node.id, p.node).second) {
            throw ValidationError(p.context + ": duplicate concept id " + p.node.id);
        }
    }
    for (const auto& [id, node] : ont.concepts_) {
        for (const std::string& parent : node.parents) {
            if (!ont.concepts_.count(parent)) {
                throw ReferenceError(path + ": concept " + id + " has undefined parent " +
                                     parent);
            }
        }
    }
    for (const PendingRule& r : rules) {
        bool first_ok = r.rule.first.code == "_" ||
                        ont.has_primitive(r.rule.first.kind, r.rule.first.code);
        if (!first_ok || !ont.has_primitive(r.rule.second.kind, r.rule.second.code)) {
            throw ReferenceError(r.context + ": forbid references an undefined primitive");
        }
        ont.rules_.push_back(r.rule);
    }
    for (const PendingLink& l : links) {
        if (!ont.has_primitive(l.specific.kind, l.specific.code) ||
            !ont.has_primitive(l.general.kind, l.general.code)) {
            throw ReferenceError(l.context + ": spec link references an undefined primitive");
        }
        ont.spec_links_[l.specific.kind][l.specific.code].push_back(l.general.code);
    }
    for (auto& [_, by_code] : ont.spec_links_) {
        for (auto& [__, generals] : by_code) {
            std::sort(generals.begin(), generals.end());
            generals.erase(std::unique(generals.begin(), generals.end()), generals.end());
        }
    }

    if (ont.concepts_.empty() || ont.primitives_.empty()) {
        throw ValidationError(path + ": empty ontology");
    }

    std::map<std::string, std::vector<std::string>> parent_edges;
    for (const auto& [id, node] : ont.concepts_) parent_edges[id] = node.parents;
    if (auto cycle = find_cycle(parent_edges); !cycle.empty()) {
        throw CycleError(path + ": parent cycle: " + join(cycle, " -> "));
    }
    for (const auto& [kind, by_code] : ont.spec_links_) {
        std::map<std::string, std::vector<std::string>> edges;
        for (const auto& [code, generals] : by_code) edges[code] = generals;
        if (auto cycle = find_cycle(edges); !cycle.empty()) {
            throw CycleError(path + ": " + primitive_kind_name(kind) +
                             " specificity cycle: " + join(cycle, " -> "));
        }
    }
    return ont;
}

VcmOntology load_vcm_ontology(const std::string& path) { return VcmOntology::load(path); }

bool VcmOntology::has_concept(const std::string& id) const { return concepts_.count(id) != 0; }

const VcmMedicalConcept& VcmOntology::concept_at(const std::string& id) const {
    auto it = concepts_.find(id);
    if (it == concepts_.end()) throw NotFoundError("unknown VCM concept '" + id + "'");
    return it->second;
}

std::vector<std::string> VcmOntology::all_concepts() const {
    std::vector<std::string> ids;
    ids.reserve(concepts_.size());
    for (const auto& [id, _] : concepts_) ids.push_back(id);
    return ids;
}

bool VcmOntology::has_primitive(PrimitiveKind kind, const std::string& code) const {
    auto it = primitives_.find(kind);
    return it != primitives_.end() && it->second.count(code) != 0;
}

std::vector<std::string> VcmOntology::primitive_codes(PrimitiveKind kind) const {
    auto it = primitives_.find(kind);
    if (it == primitives_.end()) return {};
    return {it->second.begin(), it->second.end()};
}

const std::vector<IconPrimitive>& VcmOntology::primitives_for(const std::string& id) const {
    return concept_at(id).primitives;
}

std::set<std::string> VcmOntology::ancestors_of(const std::string& id) const {
    std::set<std::string> out;
    std::vector<std::string> frontier{id};
    while (!frontier.empty()) {
        std::string current = std::move(frontier.back());
        frontier.pop_back();
        for (const std::string& parent : concept_at(current).parents) {
            if (out.insert(parent).second) frontier.push_back(parent);
        }
    }
    return out;
}

std::set<std::string> VcmOntology::most_specific_concepts(
    const std::set<std::string>& ids) const {
    std::set<std::string> pruned;
    for (const std::string& id : ids) concept_at(id);  // existence check up front
    for (const std::string& id : ids) {
        bool is_ancestor = false;
        for (const std::string& other : ids) {
            if (other == id) continue;
            if (ancestors_of(other).count(id)) {
                is_ancestor = true;
                break;
            }
        }
        if (!is_ancestor) pruned.insert(id);
    }
    return pruned;
}

bool VcmOntology::is_specificity_ancestor(PrimitiveKind kind, const std::string& general,
                                          const std::string& specific) const {
    auto by_kind = spec_links_.find(kind);
    if (by_kind == spec_links_.end()) return false;
    std::set<std::string> visited;
    std::vector<std::string> frontier{specific};
    while (!frontier.empty()) {
        std::string current = std::move(frontier.back());
        frontier.pop_back();
        auto it = by_kind->second.find(current);
        if (it == by_kind->second.end()) continue;
        for (const std::string& up : it->second) {
            if (up == general) return true;
            if (visited.insert(up).second) frontier.push_back(up);
        }
    }
    return false;
}

void VcmOntology::validate_icon(const Icon& icon) const {
    if (!kColorCodes.count(icon.color)) {
        throw ParseError("bad icon color '" + icon.color + "'");
    }
    if (!kShapeCodes.count(icon.shape)) {
        throw ParseError("bad icon shape '" + icon.shape + "'");
    }
    if (!icon.pictogram.empty() &&
        !has_primitive(PrimitiveKind::central_pictogram, icon.pictogram)) {
        throw NotFoundError("unknown pictogram code '" + icon.pictogram + "'");
    }
    for (std::size_t i = 0; i < icon.modifiers.size(); ++i) {
        if (!has_primitive(PrimitiveKind::shape_modifier, icon.modifiers[i])) {
            throw NotFoundError("unknown modifier code '" + icon.modifiers[i] + "'");
        }
        if (i > 0 && icon.modifiers[i - 1] >= icon.modifiers[i]) {
            throw ParseError("icon modifiers must be sorted and unique");
        }
    }
}

bool VcmOntology::is_consistent(const Icon& icon) const {
    validate_icon(icon);
    auto has_modifier = [&](const std::string& code) {
        return std::find(icon.modifiers.begin(), icon.modifiers.end(), code) !=
               icon.modifiers.end();
    };
    for (const ConsistencyRule& rule : rules_) {
        bool first_hit;
        if (rule.first.kind == PrimitiveKind::central_pictogram) {
            first_hit = rule.first.code == "_" ? icon.pictogram.empty()
                                               : icon.pictogram == rule.first.code;
        } else {
            first_hit = has_modifier(rule.first.code);
        }
        if (first_hit && has_modifier(rule.second.code)) return false;
    }
    return true;
}

bool VcmOntology::is_more_specific(const Icon& a, const Icon& b) const {
    validate_icon(a);
    validate_icon(b);
    if (a == b) return false;
    if (a.color != b.color || a.shape != b.shape) return false;

    // b's pictogram must cover a's: equal, absent, or a specificity ancestor.
    if (b.pictogram.empty()) {
        // no pictogram covers everything, including no pictogram
    } else if (a.pictogram.empty()) {
        return false;
    } else if (b.pictogram != a.pictogram &&
               !is_specificity_ancestor(PrimitiveKind::central_pictogram, b.pictogram,
                                        a.pictogram)) {
        return false;
    }

    for (const std::string& bm : b.modifiers) {
        bool covered = false;
        for (const std::string& am : a.modifiers) {
            if (am == bm ||
                is_specificity_ancestor(PrimitiveKind::shape_modifier, bm, am)) {
                covered = true;
                break;
            }
        }
        if (!covered) return false;
    }
    return true;
}

std::string icon_code(const Icon& icon) {
    std::string code = icon.color + "." + icon.shape + ".";
    code += icon.pictogram.empty() ? "_" : icon.pictogram;
    code += ".";
    if (icon.modifiers.empty()) {
        code += "_";
    } else {
        for (std::size_t i = 0; i < icon.modifiers.size(); ++i) {
            if (i) code += "+";
            code += icon.modifiers[i];
        }
    }
    return code;
}

Icon parse_icon_code(const std::string& code) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        std::size_t dot = code.find('.', start);
        if (dot == std::string::npos) {
            parts.push_back(code.substr(start));
            break;
        }
        parts.push_back(code.substr(start, dot - start));
        start = dot + 1;
    }
    if (parts.size() != 4) {
        throw ParseError("icon code '" + code + "': expected 4 dot-separated fields");
    }
    Icon icon;
    if (!kColorCodes.count(parts[0])) {
        throw ParseError("icon code '" + code + "': bad color '" + parts[0] + "'");
    }
    icon.color = parts[0];
    if (!kShapeCodes.count(parts[1])) {
        throw ParseError("icon code '" + code + "': bad shape '" + parts[1] + "'");
    }
    icon.shape = parts[1];
    if (parts[2] == "_") {
        icon.pictogram.clear();
    } else if (is_code_token(parts[2])) {
        icon.pictogram = parts[2];
    } else {
        throw ParseError("icon code '" + code + "': bad pictogram '" + parts[2] + "'");
    }
    if (parts[3] != "_") {
        std::size_t mod_start = 0;
        const std::string& mods = parts[3];
        while (true) {
            std::size_t plus = mods.find('+', mod_start);
            std::string token = plus == std::string::npos
                                    ? mods.substr(mod_start)
                                    : mods.substr(mod_start, plus - mod_start);
            if (!is_code_token(token)) {
                throw ParseError("icon code '" + code + "': bad modifier '" + token + "'");
            }
            if (!icon.modifiers.empty() && icon.modifiers.back() >= token) {
                throw ParseError("icon code '" + code + "': modifiers must be sorted and unique");
            }
            icon.modifiers.push_back(std::move(token));
            if (plus == std::string::npos) break;
            mod_start = plus + 1;
        }
    }
    return icon;
}

}  // namespace vcmap
