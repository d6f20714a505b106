// vcmap: maps clinical concepts to canonical icon codes.
//
// Subcommands: map, batch, stats, ambiguities, export-review. Data rows go
// to stdout (or --out); diagnostics go to stderr. Exit codes: 0 success,
// 1 input/load error, 2 unknown concept, 3 generation error. Usage errors
// surface through the argument parser's own codes (>= 100).

#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "vcmap/anchors.hpp"
#include "vcmap/corpus.hpp"
#include "vcmap/errors.hpp"
#include "vcmap/icon_engine.hpp"
#include "vcmap/terminology.hpp"
#include "vcmap/vcm_ontology.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitLoad = 1;
constexpr int kExitUnknownConcept = 2;
constexpr int kExitGeneration = 3;

struct InputPaths {
    std::string concepts;
    std::string relationships;
    std::string vcm;
    std::string anchors;
};

struct Inputs {
    vcmap::TerminologyGraph graph;
    vcmap::VcmOntology ontology;
    vcmap::AnchorTable anchors;
};

void add_input_options(CLI::App& cmd, InputPaths& paths) {
    cmd.add_option("--concepts", paths.concepts, "Concept table (TSV)")->required();
    cmd.add_option("--relationships", paths.relationships, "Relationship table (TSV)")
        ->required();
    cmd.add_option("--vcm", paths.vcm, "Icon ontology file")->required();
    cmd.add_option("--anchors", paths.anchors, "Anchor table (TSV)")->required();
}

std::optional<Inputs> load_inputs(const InputPaths& paths) {
    try {
        vcmap::TerminologyGraph graph =
            vcmap::TerminologyGraph::load(paths.concepts, paths.relationships);
        vcmap::VcmOntology ontology = vcmap::VcmOntology::load(paths.vcm);
        vcmap::AnchorTable anchors = vcmap::AnchorTable::load(paths.anchors, graph, ontology);
        return Inputs{std::move(graph), std::move(ontology), std::move(anchors)};
    } catch (const vcmap::MappingError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return std::nullopt;
    }
}

// Writes a finished data blob to stdout or --out. Only I/O can fail here.
int emit(const std::string& data, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << data;
        return std::cout.good() ? kExitOk : kExitLoad;
    }
    std::ofstream file(out_path, std::ios::binary);
    if (!file) {
        std::cerr << "error: cannot open output file: " << out_path << '\n';
        return kExitLoad;
    }
    file << data;
    file.flush();
    if (!file.good()) {
        std::cerr << "error: failed writing output file: " << out_path << '\n';
        return kExitLoad;
    }
    return kExitOk;
}

// Report dumps ride the data stream as '#' comment lines so downstream
// TSV readers can skip them.
std::string comment_block(const std::string& text) {
    std::string out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        out += "# ";
        out += line;
        out += '\n';
    }
    return out;
}

std::string join_space(const std::vector<std::string>& parts) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i > 0) out += ' ';
        out += parts[i];
    }
    return out;
}

int run_map(const InputPaths& paths, vcmap::ConceptId id, bool verbose,
            const std::string& out_path) {
    std::optional<Inputs> in = load_inputs(paths);
    if (!in) return kExitLoad;
    vcmap::IconSet set;
    try {
        set = vcmap::generate_icons(in->graph, in->ontology, in->anchors, id);
    } catch (const vcmap::NotFoundError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUnknownConcept;
    } catch (const vcmap::MappingError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitGeneration;
    }
    std::string data;
    if (verbose) data += comment_block(vcmap::render_report(in->graph, set.report));
    std::vector<std::string> codes;
    codes.reserve(set.icons.size());
    for (const vcmap::Icon& icon : set.icons) codes.push_back(vcmap::icon_code(icon));
    data += std::to_string(id);
    data += '\t';
    data += join_space(codes);
    data += '\t';
    data += std::to_string(codes.size());
    data += '\n';
    return emit(data, out_path);
}

int run_batch(const InputPaths& paths, const std::string& corpus_path, unsigned threads,
              bool verbose, const std::string& out_path) {
    std::optional<Inputs> in = load_inputs(paths);
    if (!in) return kExitLoad;
    std::vector<vcmap::ConceptId> ids;
    try {
        ids = vcmap::load_corpus(corpus_path);
    } catch (const vcmap::MappingError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitLoad;
    }
    std::vector<vcmap::BatchResult> results =
        vcmap::batch_generate(in->graph, in->ontology, in->anchors, ids, threads);
    std::string data;
    if (verbose) {
        for (const vcmap::BatchResult& result : results) {
            if (result.icons) {
                data += comment_block(vcmap::render_report(in->graph, result.icons->report));
            }
        }
    }
    data += vcmap::render_batch(results);
    int io_rc = emit(data, out_path);
    if (io_rc != kExitOk) return io_rc;
    bool any_ok = false;
    for (const vcmap::BatchResult& result : results) {
        if (result.icons) any_ok = true;
    }
    if (!results.empty() && !any_ok) return kExitGeneration;
    return kExitOk;
}

int run_stats(const std::string& batch_path, const std::string& out_path) {
    std::vector<vcmap::BatchRow> rows;
    try {
        rows = vcmap::parse_batch_tsv(batch_path);
    } catch (const vcmap::MappingError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitLoad;
    }
    return emit(vcmap::render_stats(vcmap::compute_stats(rows)), out_path);
}

int run_ambiguities(const InputPaths& paths, const std::string& out_path) {
    std::optional<Inputs> in = load_inputs(paths);
    if (!in) return kExitLoad;
    std::vector<vcmap::AmbiguityRow> rows =
        vcmap::detect_ambiguities(in->anchors, in->graph, in->ontology);
    std::string data = "concept_id\tpictograms\n";
    for (const vcmap::AmbiguityRow& row : rows) {
        std::vector<std::string> pictos(row.pictograms.begin(), row.pictograms.end());
        data += std::to_string(row.concept_id);
        data += '\t';
        data += join_space(pictos);
        data += '\n';
    }
    return emit(data, out_path);
}

int run_export_review(const InputPaths& paths, const std::string& corpus_path,
                      std::optional<std::size_t> sample, std::uint64_t seed, unsigned threads,
                      const std::string& out_path) {
    std::optional<Inputs> in = load_inputs(paths);
    if (!in) return kExitLoad;
    std::vector<vcmap::ConceptId> ids;
    try {
        ids = vcmap::load_corpus(corpus_path);
    } catch (const vcmap::MappingError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitLoad;
    }
    if (sample) {
        std::vector<std::size_t> picks = vcmap::sample_indices(ids.size(), *sample, seed);
        std::vector<vcmap::ConceptId> chosen;
        chosen.reserve(picks.size());
        for (std::size_t index : picks) chosen.push_back(ids[index]);
        ids = std::move(chosen);
    }
    std::vector<vcmap::BatchResult> results =
        vcmap::batch_generate(in->graph, in->ontology, in->anchors, ids, threads);
    std::vector<vcmap::ReviewRow> rows = vcmap::build_review_rows(in->graph, results);
    return emit(vcmap::render_review(rows), out_path);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Terminology-to-icon mapping engine"};
    app.require_subcommand(1);

    InputPaths paths;
    std::string out_path;
    std::string corpus_path;
    std::string batch_tsv_path;
    vcmap::ConceptId concept_id = 0;
    bool verbose = false;
    unsigned threads = 1;
    std::optional<std::size_t> sample;
    std::uint64_t seed = 0;

    CLI::App* map_cmd = app.add_subcommand("map", "Map one concept to icon codes");
    add_input_options(*map_cmd, paths);
    map_cmd->add_option("--id", concept_id, "Concept id to map")->required();
    map_cmd->add_flag("--verbose", verbose, "Dump the mapping report as '#' comments");
    map_cmd->add_option("--out", out_path, "Write output to a file instead of stdout");

    CLI::App* batch_cmd = app.add_subcommand("batch", "Map a corpus of concept ids to a TSV");
    add_input_options(*batch_cmd, paths);
    batch_cmd->add_option("corpus", corpus_path, "Concept-id list, one per line")->required();
    batch_cmd->add_option("--threads", threads, "Worker threads")->check(CLI::Range(1u, 256u));
    batch_cmd->add_flag("--verbose", verbose, "Dump mapping reports as '#' comments");
    batch_cmd->add_option("--out", out_path, "Write output to a file instead of stdout");

    CLI::App* stats_cmd = app.add_subcommand("stats", "Summarize a batch TSV");
    stats_cmd->add_option("batch", batch_tsv_path, "Batch TSV produced by `batch`")->required();
    stats_cmd->add_option("--out", out_path, "Write output to a file instead of stdout");

    CLI::App* amb_cmd =
        app.add_subcommand("ambiguities", "Report anatomical concepts resolving to >1 pictogram");
    add_input_options(*amb_cmd, paths);
    amb_cmd->add_option("--out", out_path, "Write output to a file instead of stdout");

    CLI::App* review_cmd =
        app.add_subcommand("export-review", "Export a review sheet for a corpus");
    add_input_options(*review_cmd, paths);
    review_cmd->add_option("corpus", corpus_path, "Concept-id list, one per line")->required();
    review_cmd->add_option("--sample", sample, "Review only N randomly chosen concepts");
    review_cmd->add_option("--seed", seed, "Sampling seed (default 0)");
    review_cmd->add_option("--threads", threads, "Worker threads")->check(CLI::Range(1u, 256u));
    review_cmd->add_option("--out", out_path, "Write output to a file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (map_cmd->parsed()) return run_map(paths, concept_id, verbose, out_path);
        if (batch_cmd->parsed())
            return run_batch(paths, corpus_path, threads, verbose, out_path);
        if (stats_cmd->parsed()) return run_stats(batch_tsv_path, out_path);
        if (amb_cmd->parsed()) return run_ambiguities(paths, out_path);
        if (review_cmd->parsed())
            return run_export_review(paths, corpus_path, sample, seed, threads, out_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitLoad;
    }
    return kExitOk;
}
