#include "vcmap/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "vcmap/errors.hpp"
#include "vcmap/tsv.hpp"

namespace vcmap {

namespace {

// TSV cells must stay single-line and tab-free.
std::string sanitize_cell(std::string text) {
    for (char& c : text) {
        if (c == '\t' || c == '\n' || c == '\r') c = ' ';
    }
    return text;
}

std::vector<std::string> split_on(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = text.find(sep, start);
        if (pos == std::string::npos) {
            parts.push_back(text.substr(start));
            return parts;
        }
        parts.push_back(text.substr(start, pos - start));
        start = pos + 1;
    }
}

// Tenths of a percent / of a unit, rounded half away from zero. Integer
// arithmetic keeps this identical across languages.
std::string format_tenths(std::size_t numerator, std::size_t denominator,
                          std::size_t scale) {
    std::size_t tenths =
        denominator == 0 ? 0 : (scale * 10 * numerator * 2 + denominator) / (2 * denominator);
    return std::to_string(tenths / 10) + "." + std::to_string(tenths % 10);
}

}  // namespace

std::string render_batch(const std::vector<BatchResult>& results) {
    std::ostringstream out;
    out << "concept_id\ticon_codes\tn_icons\n";
    for (const BatchResult& result : results) {
        out << result.concept_id << "\t";
        if (!result.icons) {
            out << "ERROR:" << sanitize_cell(result.error) << "\t0\n";
            continue;
        }
        const std::vector<Icon>& icons = result.icons->icons;
        for (std::size_t i = 0; i < icons.size(); ++i) {
            if (i) out << " ";
            out << icon_code(icons[i]);
        }
        out << "\t" << icons.size() << "\n";
    }
    return out.str();
}

std::vector<BatchRow> parse_batch_tsv(const std::string& path) {
    std::vector<BatchRow> rows;
    for (const TsvRow& raw : read_tsv(path, {"concept_id", "icon_codes", "n_icons"})) {
        std::string context = path + ":" + std::to_string(raw.line_no);
        BatchRow row;
        row.concept_id = parse_id(raw.fields[0], context);
        const std::string& cell = raw.fields[1];
        if (cell.rfind("ERROR:", 0) == 0) {
            row.error = cell.substr(6);
            if (raw.fields[2] != "0") {
                throw ParseError(context + ": error rows must have n_icons = 0");
            }
        } else {
            if (cell.empty()) throw ParseError(context + ": empty icon_codes cell");
            for (std::string& code : split_on(cell, ' ')) {
                parse_icon_code(code);  // syntax check; throws ParseError
                row.codes.push_back(std::move(code));
            }
            if (raw.fields[2] != std::to_string(row.codes.size())) {
                throw ParseError(context + ": n_icons does not match icon_codes");
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<ConceptId> load_corpus(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw NotFoundError(path + ": cannot open file");
    std::vector<ConceptId> ids;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        ids.push_back(parse_id(line, path + ":" + std::to_string(line_no)));
    }
    return ids;
}

CorpusStats compute_stats(const std::vector<BatchRow>& rows) {
    CorpusStats stats;
    std::set<std::string> distinct;
    for (const BatchRow& row : rows) {
        if (row.failed()) {
            ++stats.error_rows;
            continue;
        }
        ++stats.total_concepts;
        ++stats.histogram[row.codes.size()];
        stats.total_assignments += row.codes.size();
        bool generic = false;
        for (const std::string& code : row.codes) {
            distinct.insert(code);
            Icon icon = parse_icon_code(code);
            if (icon.pictogram.empty() && icon.modifiers.empty()) generic = true;
        }
        if (generic) ++stats.generic_icon_count;
    }
    stats.distinct_icons = distinct.size();
    return stats;
}

std::string render_stats(const CorpusStats& stats) {
    std::ostringstream out;
    out << "total_concepts\t" << stats.total_concepts << "\n";
    for (const auto& [n_icons, count] : stats.histogram) {
        out << "icons_per_concept\t" << n_icons << "\t" << count << "\t"
            << format_tenths(count, stats.total_concepts, 100) << "%\n";
    }
    out << "distinct_icons\t" << stats.distinct_icons << "\n";
    out << "mean_concepts_per_icon\t"
        << format_tenths(stats.total_assignments, stats.distinct_icons, 1) << "\n";
    out << "generic_icon_count\t" << stats.generic_icon_count << "\n";
    out << "error_rows\t" << stats.error_rows << "\n";
    return out.str();
}

std::string render_relationships(const TerminologyGraph& graph, ConceptId id) {
    std::set<std::string> rendered;
    for (const Relationship& rel : graph.outgoing(id)) {
        if (rel.type == RelType::unknown) continue;
        std::string name = rel_type_name(rel.type);
        std::replace(name.begin(), name.end(), '_', ' ');
        rendered.insert(name + ": " + graph.concept_at(rel.destination).label);
    }
    std::string out;
    for (const std::string& item : rendered) {
        if (!out.empty()) out += "; ";
        out += item;
    }
    return out;
}

std::vector<ReviewRow> build_review_rows(const TerminologyGraph& graph,
                                         const std::vector<BatchResult>& results) {
    std::vector<ReviewRow> rows;
    rows.reserve(results.size());
    for (const BatchResult& result : results) {
        ReviewRow row;
        row.concept_id = result.concept_id;
        row.label = graph.has_concept(result.concept_id) ? graph.concept_at(result.concept_id).label
                                                      : std::string{};
        if (graph.has_concept(result.concept_id)) {
            row.relationships = render_relationships(graph, result.concept_id);
        }
        if (result.icons) {
            for (const Icon& icon : result.icons->icons) {
                row.icon_codes.push_back(icon_code(icon));
            }
        } else {
            row.error = result.error;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string render_review(const std::vector<ReviewRow>& rows) {
    std::ostringstream out;
    out << "concept_id\tlabel\trelationships\ticon_codes\tacceptable\tcomments\n";
    for (const ReviewRow& row : rows) {
        out << row.concept_id << "\t" << sanitize_cell(row.label) << "\t"
            << sanitize_cell(row.relationships) << "\t";
        if (!row.error.empty()) {
            out << "ERROR:" << sanitize_cell(row.error);
        } else {
            for (std::size_t i = 0; i < row.icon_codes.size(); ++i) {
                if (i) out << " ";
                out << row.icon_codes[i];
            }
        }
        out << "\t\t\n";
    }
    return out.str();
}

std::uint64_t splitmix64_next(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::vector<std::size_t> sample_indices(std::size_t population, std::size_t count,
                                        std::uint64_t seed) {
    std::vector<std::size_t> indices(population);
    std::iota(indices.begin(), indices.end(), std::size_t{0});
    if (count >= population) return indices;

    std::uint64_t state = seed;
    for (std::size_t i = 0; i < count; ++i) {
        std::size_t j = i + static_cast<std::size_t>(splitmix64_next(state) % (population - i));
        std::swap(indices[i], indices[j]);
    }
    indices.resize(count);
    std::sort(indices.begin(), indices.end());
    return indices;
}

}  // namespace vcmap
