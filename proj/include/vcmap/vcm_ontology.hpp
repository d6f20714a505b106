#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

namespace vcmap {

enum class PrimitiveKind { color, base_shape, central_pictogram, shape_modifier };

const std::string& primitive_kind_name(PrimitiveKind kind);

// One atomic icon element, e.g. (central_pictogram, eye).
struct IconPrimitive {
    PrimitiveKind kind = PrimitiveKind::color;
    std::string code;

    friend bool operator==(const IconPrimitive&, const IconPrimitive&) = default;
    friend auto operator<=>(const IconPrimitive&, const IconPrimitive&) = default;
};

enum class VcmCategory {
    anatomical_structure,
    biological_function,
    pathological_process,
    patient_characteristic,
    temporal_aspect,
};

const std::string& vcm_category_name(VcmCategory category);

struct VcmMedicalConcept {
    std::string id;
    VcmCategory category = VcmCategory::anatomical_structure;
    std::vector<std::string> parents;        // ascending, deduplicated
    std::vector<IconPrimitive> primitives;   // sorted by (kind, code), deduplicated
};

// A complete icon. An empty pictogram means "no central pictogram" and is
// written `_` in icon codes; modifiers are always sorted and deduplicated.
struct Icon {
    std::string color = "current";           // current | risk | past
    std::string shape = "patho";             // physio | patho
    std::string pictogram;                   // code or empty
    std::vector<std::string> modifiers;

    friend bool operator==(const Icon&, const Icon&) = default;
};

// Forbidden co-occurrence. `first` is a central pictogram (code `_` matches
// the no-pictogram case) or a shape modifier; `second` is a shape modifier.
struct ConsistencyRule {
    IconPrimitive first;
    IconPrimitive second;
};

// Immutable icon-language model. All queries are const and thread-safe.
class VcmOntology {
  public:
    static VcmOntology load(const std::string& path);

    bool has_concept(const std::string& id) const;
    const VcmMedicalConcept& concept_at(const std::string& id) const;  // throws NotFoundError
    std::size_t concept_count() const { return concepts_.size(); }
    std::vector<std::string> all_concepts() const;

    bool has_primitive(PrimitiveKind kind, const std::string& code) const;
    // Codes of one kind, ascending.
    std::vector<std::string> primitive_codes(PrimitiveKind kind) const;
    const std::vector<ConsistencyRule>& rules() const { return rules_; }

    // Linked primitives of a medical concept, sorted by (kind, code).
    const std::vector<IconPrimitive>& primitives_for(const std::string& id) const;

    // Removes every member that is a strict parent-closure ancestor of
    // another member.
    std::set<std::string> most_specific_concepts(const std::set<std::string>& ids) const;

    // Strict parent-closure ancestors of a medical concept.
    std::set<std::string> ancestors_of(const std::string& id) const;

    // True iff `general` lies on the specificity-link closure of `specific`.
    // Kinds: central_pictogram or shape_modifier.
    bool is_specificity_ancestor(PrimitiveKind kind, const std::string& general,
                                 const std::string& specific) const;

    // True iff no forbidden pair occurs in the icon. Throws NotFoundError on
    // codes absent from the ontology.
    bool is_consistent(const Icon& icon) const;

    // Strict dominance: a and b differ, share color and shape, b's pictogram
    // equals a's or is a specificity ancestor of it (no pictogram is treated
    // as the ancestor of every pictogram), and every modifier of b equals or
    // is a specificity ancestor of some modifier of a.
    bool is_more_specific(const Icon& a, const Icon& b) const;

    // Throws NotFoundError if any code in the icon is unknown, ParseError on
    // structural defects (bad color/shape, unsorted modifiers).
    void validate_icon(const Icon& icon) const;

  private:
    std::map<PrimitiveKind, std::set<std::string>> primitives_;
    std::map<std::string, VcmMedicalConcept> concepts_;
    std::vector<ConsistencyRule> rules_;
    // specific code -> general codes, one map per linkable kind
    std::map<PrimitiveKind, std::map<std::string, std::vector<std::string>>> spec_links_;
};

VcmOntology load_vcm_ontology(const std::string& path);

// Canonical serialization: <color>.<shape>.<pictogram|_>.<m1+m2+...|_>.
std::string icon_code(const Icon& icon);

// Strict inverse of icon_code; rejects anything icon_code cannot emit.
Icon parse_icon_code(const std::string& code);

}  // namespace vcmap
