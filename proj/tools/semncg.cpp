// semncg: command-line front end for the redundancy-aware Sem-nCG metric.
//
//   semncg ingest          convert SummEval-style JSONL into native files
//   semncg score           one document, one reference, one summary
//   semncg multiref-score  one document, several references, one summary
//   semncg bucket-refs     LOR/MOR/HOR assignment per document
//   semncg meta-eval       correlation report against expert annotations
//   semncg sweep           correlation as a function of lambda
//
// Exit codes: 0 success, 1 unreadable or malformed input, 2 invalid usage.
// Failures print {"error": ..., "code": ...} on stdout.

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "semncg/semncg.hpp"

namespace fs = std::filesystem;
using namespace semncg;

namespace {

constexpr int exit_failure = 1;
constexpr int exit_usage = 2;

int fail(const std::string& message, int code) {
    json j;
    j["error"] = message;
    j["code"] = code;
    std::cout << j.dump() << std::endl;
    return code;
}

// A sentence-set file holds either one JSON object or JSON Lines; the first
// record is used.
SentenceSet read_sentence_set(const fs::path& path) {
    std::string text = read_file(path);
    json j;
    try {
        j = json::parse(text);
    } catch (const nlohmann::json::parse_error&) {
        auto records = read_jsonl(path);
        if (records.empty()) throw format_error(path.string() + ": no records");
        j = records.front();
    }
    return sentence_set_from_json(j);
}

struct ScoreArgs {
    std::string doc;
    std::vector<std::string> refs;
    std::string summary;
    std::string embeddings;
    std::string embedding_name;
    std::string matrices;
    std::string penalty = "rouge1";
    std::string gain_scheme = "normalized_relevance";
    std::string rouge_variant = "f1";
    std::string ensemble = "sim";
    std::size_t k = 3;
    double lambda = 0.5;
};

void add_score_options(CLI::App* cmd, ScoreArgs& a, bool multi) {
    cmd->add_option("--doc", a.doc, "Document sentence-set file")->required();
    if (multi)
        cmd->add_option("--ref", a.refs, "Reference sentence-set file (repeatable)")->required();
    else
        cmd->add_option("--ref", a.refs, "Reference sentence-set file")->required()->expected(1);
    cmd->add_option("--summary", a.summary, "Model summary sentence-set file")->required();
    cmd->add_option("--embeddings", a.embeddings, "Directory of embedding files")
        ->envname("SEMNCG_EMBED_DIR")
        ->required();
    cmd->add_option("--embedding-name", a.embedding_name, "Name recorded in the score (default: directory name)");
    cmd->add_option("--matrices", a.matrices, "Directory of external similarity matrices (default: --embeddings)");
    cmd->add_option("--penalty", a.penalty, "Redundancy penalty")
        ->check(CLI::IsMember({"none", "cosine", "rouge1", "bertscore", "moverscore"}));
    cmd->add_option("--gain-scheme", a.gain_scheme)
        ->check(CLI::IsMember({"normalized_relevance", "rank_position"}));
    cmd->add_option("--rouge-variant", a.rouge_variant)->check(CLI::IsMember({"f1", "recall", "precision"}));
    if (multi) cmd->add_option("--ensemble", a.ensemble)->check(CLI::IsMember({"sim", "rel"}));
    cmd->add_option("--k", a.k, "Summary sentences scored")->check(CLI::PositiveNumber);
    cmd->add_option("--lambda", a.lambda, "Weight of Sem-nCG against the redundancy penalty")
        ->check(CLI::Range(0.0, 1.0));
}

int run_score(const ScoreArgs& a) {
    SentenceSet doc = read_sentence_set(a.doc);
    std::vector<SentenceSet> refs;
    for (const auto& r : a.refs) refs.push_back(read_sentence_set(r));
    SentenceSet summary = read_sentence_set(a.summary);

    EmbeddingStore store(a.embeddings, a.embedding_name);
    ScoreConfig cfg;
    cfg.k = a.k;
    cfg.lambda = a.lambda;
    cfg.penalty = parse_Penalty(a.penalty);
    cfg.gain_scheme = parse_GainScheme(a.gain_scheme);
    cfg.rouge_variant = parse_RougeVariant(a.rouge_variant);
    cfg.ensemble = parse_Ensemble(a.ensemble);
    cfg.embedding_name = store.name();

    std::vector<EmbeddedSentences> ref_inputs;
    for (const auto& r : refs) ref_inputs.push_back({r, store.get(r)});

    RedundancyInputs red;
    std::optional<SimilarityMatrix> matrix;
    if (summary.size() >= cfg.k) {
        if (cfg.penalty == Penalty::cosine) red.embeddings = &store.get(summary);
        if (cfg.penalty == Penalty::bertscore || cfg.penalty == Penalty::moverscore) {
            fs::path dir = a.matrices.empty() ? fs::path(a.embeddings) : fs::path(a.matrices);
            matrix = load_external_matrix(matrix_path(dir, summary.id, similarity_kind(cfg.penalty)));
            red.external = &*matrix;
        }
    }

    auto outcome = score_summary({doc, store.get(doc)}, ref_inputs, summary, cfg, red);
    if (!outcome) return fail(outcome.skip_reason, exit_usage);

    json j;
    j["doc_id"] = doc.id;
    json ref_ids = json::array();
    for (const auto& r : refs) ref_ids.push_back(r.id);
    j["references"] = std::move(ref_ids);
    j["summary_id"] = summary.id;
    if (!summary.system_id.empty()) j["system_id"] = summary.system_id;
    json fields = to_json(*outcome.score);
    for (auto& [key, value] : fields.items()) j[key] = value;
    std::cout << j.dump() << std::endl;
    return 0;
}

struct MetaEvalArgs {
    std::string corpus;
    std::string outputs;
    std::string annotations;
    std::vector<std::string> embeddings;
    std::string matrices;
    std::vector<std::string> penalties{"none", "rouge1"};
    std::string gain_scheme = "normalized_relevance";
    std::string rouge_variant = "f1";
    std::size_t k = 3;
    double lambda = 0.5;
    std::vector<std::string> settings{"LOR", "MOR", "HOR"};
    std::string ensemble = "sim";
    std::string mor_id;
    std::string tau_variant = "b";
    std::string out;
    std::string lambda_grid = "0:1:0.1";
};

void add_meta_eval_options(CLI::App* cmd, MetaEvalArgs& a, bool sweep) {
    cmd->add_option("--corpus", a.corpus, "Documents and references (JSONL)")->required();
    cmd->add_option("--outputs", a.outputs, "Model summaries (JSONL)");
    cmd->add_option("--annotations", a.annotations, "Expert annotations (JSONL)")->required();
    cmd->add_option("--embeddings", a.embeddings, "Embedding directory (repeatable, one per embedding)")
        ->envname("SEMNCG_EMBED_DIR")
        ->required();
    cmd->add_option("--matrices", a.matrices, "External similarity matrices (default: first --embeddings)");
    cmd->add_option("--penalty", a.penalties, "Comma-separated penalties")
        ->delimiter(',')
        ->check(CLI::IsMember({"none", "cosine", "rouge1", "bertscore", "moverscore"}));
    cmd->add_option("--gain-scheme", a.gain_scheme)
        ->check(CLI::IsMember({"normalized_relevance", "rank_position"}));
    cmd->add_option("--rouge-variant", a.rouge_variant)->check(CLI::IsMember({"f1", "recall", "precision"}));
    cmd->add_option("--k", a.k)->check(CLI::PositiveNumber);
    cmd->add_option("--lambda", a.lambda)->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--setting", a.settings, "Comma-separated reference settings")
        ->delimiter(',')
        ->check(CLI::IsMember({"LOR", "MOR", "HOR", "multi-LORs", "multi-MORs", "multi-HORs", "multi-mixed"}));
    cmd->add_option("--ensemble", a.ensemble)->check(CLI::IsMember({"sim", "rel"}));
    cmd->add_option("--mor-id", a.mor_id, "Reference id (or suffix after '<doc>/') to use as MOR");
    cmd->add_option("--tau-variant", a.tau_variant)->check(CLI::IsMember({"a", "b"}));
    cmd->add_option("--out", a.out, "Output directory")->required();
    if (sweep) cmd->add_option("--lambda-grid", a.lambda_grid, "Grid as a:b:step");
}

int run_meta_eval(const MetaEvalArgs& a, bool sweep) {
    MetaEvalConfig cfg;
    cfg.k = a.k;
    cfg.lambda = a.lambda;
    cfg.penalties.clear();
    for (const auto& p : a.penalties) cfg.penalties.push_back(parse_Penalty(p));
    cfg.gain_scheme = parse_GainScheme(a.gain_scheme);
    cfg.rouge_variant = parse_RougeVariant(a.rouge_variant);
    cfg.settings.clear();
    for (const auto& s : a.settings) cfg.settings.push_back(parse_ReferenceSetting(s));
    cfg.ensemble = parse_Ensemble(a.ensemble);
    if (!a.mor_id.empty()) cfg.mor_id = a.mor_id;
    cfg.tau_variant = parse_TauVariant(a.tau_variant);
    std::vector<double> grid;
    if (sweep) grid = parse_lambda_grid(a.lambda_grid);

    Corpus corpus = Corpus::load(a.corpus, a.outputs.empty() ? std::nullopt
                                                             : std::optional<fs::path>(a.outputs));
    auto annotations = load_annotations(a.annotations);
    std::vector<EmbeddingStore> stores;
    for (const auto& dir : a.embeddings) stores.emplace_back(dir);
    fs::path matrices = a.matrices.empty() ? fs::path(a.embeddings.front()) : fs::path(a.matrices);

    auto table = compute_components(corpus, stores, cfg, matrices);

    json config = to_json(cfg);
    json names = json::array();
    for (const auto& s : stores) names.push_back(s.name());
    config["embeddings"] = std::move(names);
    if (sweep) config["lambda_grid"] = a.lambda_grid;

    fs::create_directories(a.out);
    fs::path out(a.out);
    if (sweep) {
        auto rows = lambda_sweep(table, annotations, cfg, grid);
        write_file(out / "sweep.csv", sweep_csv(rows, config));
    } else {
        auto report = build_report(correlation_rows(table, annotations, cfg, cfg.lambda));
        write_file(out / "report.csv", report_csv(report, config));
        write_file(out / "report.json", report_json(report, config));
        write_file(out / "scores.jsonl", scores_jsonl(table, cfg));
    }
    write_file(out / "skips.log", skips_log(table.skips, config));
    return 0;
}

struct BucketArgs {
    std::string corpus;
    std::string mor_id;
    std::string out;
};

int run_bucket_refs(const BucketArgs& a) {
    Corpus corpus = Corpus::load(a.corpus);
    std::vector<const SentenceSet*> docs;
    for (const auto& d : corpus.documents) docs.push_back(&d);
    std::sort(docs.begin(), docs.end(), [](auto* x, auto* y) { return x->id < y->id; });

    std::string lines;
    for (const auto* doc : docs) {
        auto it = corpus.references.find(doc->id);
        if (it == corpus.references.end() || it->second.size() < 3) {
            std::cerr << "skipping " << doc->id << ": fewer than 3 references\n";
            continue;
        }
        std::optional<std::size_t> mor;
        if (!a.mor_id.empty()) {
            mor = find_reference(it->second, a.mor_id);
            if (!mor) throw invalid_input("MOR reference '" + a.mor_id + "' not found for '" + doc->id + "'");
        }
        lines += bucket_report(*doc, it->second, bucket_references(*doc, it->second, mor)).dump() + "\n";
    }
    if (a.out.empty())
        std::cout << lines;
    else
        write_file(a.out, lines);
    return 0;
}

struct IngestArgs {
    std::string input;
    std::string format = "auto";
    std::string out;
    std::vector<std::string> extractive{"M0", "M1", "M2", "M5"};
};

int run_ingest(const IngestArgs& a) {
    const std::string raw = read_file(a.input);
    std::vector<std::string> lines;
    std::vector<json> records;  // null where a line is not JSON
    {
        std::istringstream in(raw);
        std::string line;
        while (std::getline(in, line)) {
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            lines.push_back(line);
            records.push_back(json::parse(line, nullptr, false));
            if (records.back().is_discarded()) records.back() = nullptr;
        }
    }
    fs::create_directories(a.out);
    fs::path out(a.out);

    std::string format = a.format;
    if (format == "auto") {
        format = "summeval";
        for (const auto& r : records)
            if (r.is_object()) {
                if (r.contains("role")) format = "native";
                break;
            }
    }

    if (format == "native") {
        std::string kept;
        std::size_t bad = 0;
        std::vector<std::string> log;
        for (std::size_t i = 0; i < lines.size(); ++i) {
            const std::string where = "record " + std::to_string(i + 1);
            try {
                if (records[i].is_null()) throw format_error("not valid JSON");
                sentence_set_from_json(records[i]);
                kept += lines[i] + "\n";
            } catch (const std::exception& e) {
                ++bad;
                log.push_back(where + ": malformed (" + e.what() + "), skipped");
            }
        }
        // Valid native input is passed through untouched.
        write_file(out / "corpus.jsonl", bad == 0 ? raw : kept);
        std::string report = "format: native\nrecords: " + std::to_string(lines.size()) +
                             "\nmalformed: " + std::to_string(bad) + "\n";
        for (const auto& l : log) report += l + "\n";
        write_file(out / "ingest.log", report);
        std::cerr << report;
        return 0;
    }

    IngestOptions opts;
    opts.extractive_systems = {a.extractive.begin(), a.extractive.end()};
    auto r = ingest_summeval(records, opts);
    write_file(out / "corpus.jsonl", to_jsonl(r.corpus));
    write_file(out / "outputs.jsonl", to_jsonl(r.outputs));
    write_file(out / "annotations.jsonl", to_jsonl(r.annotations));
    std::string report = "format: summeval\nrecords: " + std::to_string(r.records) +
                         "\nmalformed: " + std::to_string(r.malformed) +
                         "\nempty_summaries: " + std::to_string(r.empty_summaries) +
                         "\nsegmentation: terminal-punctuation splitter applied to " +
                         std::to_string(r.segmented_fields) + " text fields\n";
    for (const auto& l : r.log) report += l + "\n";
    write_file(out / "ingest.log", report);
    std::cerr << "records: " << r.records << ", malformed: " << r.malformed
              << ", empty summaries: " << r.empty_summaries << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Redundancy-aware Sem-nCG for extractive summarization"};
    app.set_config("--config", "", "TOML-style key = value configuration file");
    app.require_subcommand(1);

    IngestArgs ingest;
    auto* ingest_cmd = app.add_subcommand("ingest", "Convert SummEval-style JSONL into native files");
    ingest_cmd->add_option("--input", ingest.input)->required();
    ingest_cmd->add_option("--format", ingest.format)->check(CLI::IsMember({"auto", "native", "summeval"}));
    ingest_cmd->add_option("--out", ingest.out)->required();
    ingest_cmd->add_option("--extractive-systems", ingest.extractive, "Comma-separated system ids")
        ->delimiter(',');

    ScoreArgs score;
    add_score_options(app.add_subcommand("score", "Score one summary against one reference"), score, false);

    ScoreArgs multi;
    add_score_options(app.add_subcommand("multiref-score", "Score one summary against several references"),
                      multi, true);

    BucketArgs bucket;
    auto* bucket_cmd = app.add_subcommand("bucket-refs", "Assign LOR/MOR/HOR references per document");
    bucket_cmd->add_option("--corpus", bucket.corpus)->required();
    bucket_cmd->add_option("--mor-id", bucket.mor_id);
    bucket_cmd->add_option("--out", bucket.out, "Output JSONL (default: stdout)");

    MetaEvalArgs meta;
    add_meta_eval_options(app.add_subcommand("meta-eval", "Kendall tau against expert annotations"), meta, false);

    MetaEvalArgs sweep;
    add_meta_eval_options(app.add_subcommand("sweep", "Kendall tau over a lambda grid"), sweep, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail(e.what(), exit_usage);
    }

    try {
        if (app.got_subcommand("ingest")) return run_ingest(ingest);
        if (app.got_subcommand("score")) return run_score(score);
        if (app.got_subcommand("multiref-score")) return run_score(multi);
        if (app.got_subcommand("bucket-refs")) return run_bucket_refs(bucket);
        if (app.got_subcommand("meta-eval")) return run_meta_eval(meta, false);
        if (app.got_subcommand("sweep")) return run_meta_eval(sweep, true);
    } catch (const invalid_input& e) {
        return fail(e.what(), exit_usage);
    } catch (const format_error& e) {
        return fail(e.what(), exit_failure);
    } catch (const std::exception& e) {
        return fail(e.what(), exit_failure);
    }
    return exit_usage;
}
