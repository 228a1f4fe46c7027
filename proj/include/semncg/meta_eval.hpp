#pragma once

// Meta-evaluation harness: sample filtering, correlation against expert
// annotations, lambda sweeps and report files.

#include <algorithm>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "semncg/final_score.hpp"
#include "semncg/io.hpp"
#include "semncg/kendall.hpp"
#include "semncg/multi_reference.hpp"
#include "semncg/types.hpp"

namespace semncg {

struct SkipRecord {
    std::string id;
    std::string reason;

    bool operator==(const SkipRecord&) const = default;
};

struct FilterResult {
    std::vector<std::size_t> eligible;  // positions in the input list
    std::vector<SkipRecord> skips;
};

// Keeps extractive summaries with at least k sentences.
inline FilterResult filter_samples(std::span<const SentenceSet> outputs, std::size_t k) {
    FilterResult r;
    for (std::size_t i = 0; i < outputs.size(); ++i) {
        const auto& o = outputs[i];
        if (!o.extractive)
            r.skips.push_back({o.id, "abstractive system"});
        else if (o.size() < k)
            r.skips.push_back({o.id, "summary shorter than k (" + std::to_string(o.size()) + " < " +
                                         std::to_string(k) + ")"});
        else
            r.eligible.push_back(i);
    }
    return r;
}

struct ScoredSample {
    std::string doc_id;
    std::string system_id;
    MetricScore score;
};

struct Correlation {
    std::optional<double> tau;
    std::size_t n = 0;
};

// Kendall tau between final scores and one annotation dimension, over the
// samples present in both lists.
inline Correlation correlate(std::span<const ScoredSample> scores,
                             std::span<const AnnotationRecord> annotations, Dimension dim,
                             TauVariant variant = TauVariant::b) {
    std::map<std::pair<std::string, std::string>, const AnnotationRecord*> by_key;
    for (const auto& a : annotations) by_key[{a.doc_id, a.system_id}] = &a;
    std::vector<double> metric, human;
    for (const auto& s : scores) {
        auto it = by_key.find({s.doc_id, s.system_id});
        if (it == by_key.end()) continue;
        metric.push_back(s.score.final_score());
        human.push_back(it->second->value(dim));
    }
    if (metric.empty()) throw invalid_input("no scored sample has an annotation");
    Correlation c;
    c.n = metric.size();
    if (c.n >= 2) c.tau = kendall_tau(metric, human, variant);
    return c;
}

// ---- corpus ---------------------------------------------------------------

struct Corpus {
    std::vector<SentenceSet> documents;
    std::map<std::string, std::vector<SentenceSet>> references;  // by doc id, file order
    std::vector<SentenceSet> outputs;

    const SentenceSet* document(const std::string& id) const {
        for (const auto& d : documents)
            if (d.id == id) return &d;
        return nullptr;
    }

    void add(SentenceSet s) {
        switch (s.role) {
            case Role::document: documents.push_back(std::move(s)); break;
            case Role::reference:
                if (s.doc_id.empty()) throw format_error("reference '" + s.id + "' has no doc_id");
                references[s.doc_id].push_back(std::move(s));
                break;
            case Role::model_summary:
                if (s.doc_id.empty()) throw format_error("summary '" + s.id + "' has no doc_id");
                outputs.push_back(std::move(s));
                break;
        }
    }

    static Corpus load(const std::filesystem::path& corpus_path,
                       const std::optional<std::filesystem::path>& outputs_path = std::nullopt) {
        Corpus c;
        for (auto& s : load_sentence_sets(corpus_path)) c.add(std::move(s));
        if (outputs_path)
            for (auto& s : load_sentence_sets(*outputs_path)) c.add(std::move(s));
        return c;
    }
};

// Position of the reference matching `mor_id`, either by full id or by the
// part after "<doc_id>/".
inline std::optional<std::size_t> find_reference(std::span<const SentenceSet> refs,
                                                 const std::string& mor_id) {
    for (std::size_t i = 0; i < refs.size(); ++i) {
        const auto& id = refs[i].id;
        if (id == mor_id || id == refs[i].doc_id + "/" + mor_id) return i;
    }
    return std::nullopt;
}

// ---- pipeline -------------------------------------------------------------

struct MetaEvalConfig {
    std::size_t k = 3;
    double lambda = 0.5;
    std::vector<Penalty> penalties{Penalty::none, Penalty::rouge1};
    GainScheme gain_scheme = GainScheme::normalized_relevance;
    RougeVariant rouge_variant = RougeVariant::f1;
    std::vector<ReferenceSetting> settings{ReferenceSetting::LOR, ReferenceSetting::MOR,
                                           ReferenceSetting::HOR};
    Ensemble ensemble = Ensemble::sim;
    std::optional<std::string> mor_id;
    TauVariant tau_variant = TauVariant::b;
};

inline json to_json(const MetaEvalConfig& c) {
    json j;
    j["k"] = c.k;
    j["lambda"] = c.lambda;
    json pens = json::array();
    for (auto p : c.penalties) pens.push_back(to_string(p));
    j["penalty"] = std::move(pens);
    j["gain_scheme"] = to_string(c.gain_scheme);
    j["rouge_variant"] = to_string(c.rouge_variant);
    json settings = json::array();
    for (auto s : c.settings) settings.push_back(to_string(s));
    j["setting"] = std::move(settings);
    j["ensemble"] = to_string(c.ensemble);
    j["mor_id"] = c.mor_id ? json(*c.mor_id) : json(nullptr);
    j["tau_variant"] = to_string(c.tau_variant);
    return j;
}

// One (embedding, penalty, setting, document, system) cell before lambda is
// applied.
struct SampleComponents {
    std::string embedding_name;
    Penalty penalty = Penalty::none;
    ReferenceSetting setting = ReferenceSetting::LOR;
    std::string doc_id;
    std::string system_id;
    std::string summary_id;
    ScoreComponents components;
};

struct ComponentTable {
    std::vector<SampleComponents> samples;
    std::vector<SkipRecord> skips;
};

// Computes Sem-nCG and Score_red for every eligible sample. Documents are
// visited in id order and summaries in system order, so the result does not
// depend on file order. `matrices_dir` holds external similarity matrices
// for the bertscore/moverscore penalties.
inline ComponentTable compute_components(const Corpus& corpus, std::vector<EmbeddingStore>& stores,
                                         const MetaEvalConfig& cfg,
                                         const std::optional<std::filesystem::path>& matrices_dir) {
    ComponentTable table;
    auto filtered = filter_samples(corpus.outputs, cfg.k);
    table.skips = filtered.skips;

    std::map<std::string, std::vector<const SentenceSet*>> by_doc;
    for (auto i : filtered.eligible) by_doc[corpus.outputs[i].doc_id].push_back(&corpus.outputs[i]);
    for (auto& [doc_id, outs] : by_doc)
        std::stable_sort(outs.begin(), outs.end(), [](const SentenceSet* a, const SentenceSet* b) {
            return std::tie(a->system_id, a->id) < std::tie(b->system_id, b->id);
        });

    // Redundancy does not depend on the reference setting; cosine redundancy
    // does depend on the embedding.
    std::map<std::tuple<std::string, std::string, Penalty>, double> red_cache;
    std::map<std::pair<std::string, SimilarityKind>, SimilarityMatrix> matrices;

    auto external_matrix = [&](const SentenceSet& summary, Penalty p) -> const SimilarityMatrix& {
        auto kind = similarity_kind(p);
        auto key = std::make_pair(summary.id, kind);
        auto it = matrices.find(key);
        if (it == matrices.end()) {
            if (!matrices_dir)
                throw invalid_input(std::string(to_string(p)) + " penalty needs a matrices directory");
            std::vector<std::string> warnings;
            auto m = load_external_matrix(matrix_path(*matrices_dir, summary.id, kind), warnings);
            for (auto& w : warnings) table.skips.push_back({summary.id, "warning: " + w});
            it = matrices.emplace(key, std::move(m)).first;
        }
        return it->second;
    };

    for (auto& store : stores) {
        const bool log_skips = &store == &stores.front();
        auto skip_all = [&](const std::vector<const SentenceSet*>& outs, const std::string& reason) {
            if (log_skips)
                for (auto* o : outs) table.skips.push_back({o->id, reason});
        };
        for (const auto& [doc_id, outs] : by_doc) {
            const SentenceSet* doc = corpus.document(doc_id);
            if (!doc) {
                skip_all(outs, "unknown document '" + doc_id + "'");
                continue;
            }
            if (doc->size() < cfg.k) {
                skip_all(outs, "document shorter than k");
                continue;
            }
            auto rit = corpus.references.find(doc_id);
            if (rit == corpus.references.end() || rit->second.size() < 3) {
                skip_all(outs, "document has fewer than 3 references");
                continue;
            }
            const auto& refs = rit->second;
            std::optional<std::size_t> mor;
            if (cfg.mor_id) {
                mor = find_reference(refs, *cfg.mor_id);
                if (!mor)
                    throw invalid_input("MOR reference '" + *cfg.mor_id + "' not found for '" +
                                        doc_id + "'");
            }
            auto buckets = bucket_references(*doc, refs, mor);
            EmbeddedSentences doc_e{*doc, store.get(*doc)};

            for (auto setting : cfg.settings) {
                std::vector<EmbeddedSentences> chosen;
                for (auto r : buckets.select(setting)) chosen.push_back({refs[r], store.get(refs[r])});
                ScoreConfig sc;
                sc.k = cfg.k;
                sc.gain_scheme = cfg.gain_scheme;
                sc.ensemble = cfg.ensemble;
                sc.rouge_variant = cfg.rouge_variant;
                auto gt = ground_truth_for(doc_e, chosen, sc);

                for (const SentenceSet* out : outs) {
                    double sem = sem_ncg_at_k(gt, align_model_summary(*out, *doc), cfg.k);
                    for (auto p : cfg.penalties) {
                        ScoreComponents c;
                        c.sem_ncg = sem;
                        if (p != Penalty::none) {
                            auto key = std::make_tuple(p == Penalty::cosine ? store.name() : std::string(),
                                                       out->id, p);
                            auto it = red_cache.find(key);
                            if (it == red_cache.end()) {
                                RedundancyInputs in;
                                in.rouge_variant = cfg.rouge_variant;
                                if (p == Penalty::cosine) in.embeddings = &store.get(*out);
                                if (p == Penalty::bertscore || p == Penalty::moverscore)
                                    in.external = &external_matrix(*out, p);
                                it = red_cache.emplace(key, redundancy_score(*out, cfg.k, p, in)).first;
                            }
                            c.score_red = it->second;
                        }
                        table.samples.push_back(
                            {store.name(), p, setting, doc_id, out->system_id, out->id, c});
                    }
                }
            }
        }
    }
    return table;
}

inline ScoreConfig score_config_for(const SampleComponents& s, const MetaEvalConfig& cfg) {
    ScoreConfig sc;
    sc.k = cfg.k;
    sc.lambda = cfg.lambda;
    sc.penalty = s.penalty;
    sc.gain_scheme = cfg.gain_scheme;
    sc.rouge_variant = cfg.rouge_variant;
    sc.ensemble = cfg.ensemble;
    sc.embedding_name = s.embedding_name;
    return sc;
}

// Tau for every (embedding, penalty, setting, dimension) cell at one lambda,
// in the order the cells first appear in `table`.
inline std::vector<CorrelationRow> correlation_rows(const ComponentTable& table,
                                                    std::span<const AnnotationRecord> annotations,
                                                    const MetaEvalConfig& cfg, double lambda) {
    using Key = std::tuple<std::string, Penalty, ReferenceSetting>;
    std::vector<Key> order;
    std::map<Key, std::vector<ScoredSample>> groups;
    for (const auto& s : table.samples) {
        Key key{s.embedding_name, s.penalty, s.setting};
        auto [it, inserted] = groups.try_emplace(key);
        if (inserted) order.push_back(key);
        it->second.push_back({s.doc_id, s.system_id, assemble(s.components, score_config_for(s, cfg), lambda)});
    }
    std::vector<CorrelationRow> rows;
    for (const auto& key : order) {
        const auto& [emb, pen, setting] = key;
        for (auto dim : all_dimensions) {
            CorrelationRow row;
            row.embedding_name = emb;
            row.penalty = penalty_label(pen);
            row.setting = setting;
            row.dimension = dim;
            try {
                auto c = correlate(groups[key], annotations, dim, cfg.tau_variant);
                row.tau = c.tau;
                row.n_samples = c.n;
            } catch (const invalid_input&) {
                row.n_samples = 0;
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

// Flags, per (setting, dimension) column, every row holding the column's
// maximum tau. Missing values never win.
inline CorrelationReport build_report(std::vector<CorrelationRow> rows) {
    std::map<std::pair<ReferenceSetting, Dimension>, double> best;
    for (const auto& r : rows) {
        if (!r.tau) continue;
        auto key = std::make_pair(r.setting, r.dimension);
        auto it = best.find(key);
        if (it == best.end() || *r.tau > it->second) best[key] = *r.tau;
    }
    for (auto& r : rows) {
        auto it = best.find({r.setting, r.dimension});
        r.is_column_max = r.tau && it != best.end() && *r.tau == it->second;
    }
    return {std::move(rows)};
}

struct SweepRow {
    double lambda = 0.0;
    CorrelationRow row;
};

inline std::vector<SweepRow> lambda_sweep(const ComponentTable& table,
                                          std::span<const AnnotationRecord> annotations,
                                          const MetaEvalConfig& cfg, std::span<const double> grid) {
    if (grid.empty()) throw invalid_input("lambda grid is empty");
    for (double l : grid) check_unit(l, "lambda");
    std::vector<SweepRow> out;
    for (double l : grid)
        for (auto& r : correlation_rows(table, annotations, cfg, l)) out.push_back({l, std::move(r)});
    return out;
}

// "a:b:step" -> a, a+step, ..., up to b inclusive. Values are rounded to 12
// decimals so 0:1:0.1 gives exactly 0.3 rather than 0.30000000000000004.
inline std::vector<double> parse_lambda_grid(const std::string& text) {
    auto c1 = text.find(':');
    auto c2 = c1 == std::string::npos ? std::string::npos : text.find(':', c1 + 1);
    if (c2 == std::string::npos) throw invalid_input("lambda grid must look like a:b:step");
    double a, b, step;
    try {
        a = std::stod(text.substr(0, c1));
        b = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
        step = std::stod(text.substr(c2 + 1));
    } catch (const std::exception&) {
        throw invalid_input("lambda grid must look like a:b:step");
    }
    if (!(step > 0.0) || b < a) throw invalid_input("lambda grid needs a <= b and step > 0");
    std::vector<double> grid;
    for (std::size_t i = 0;; ++i) {
        double v = std::round((a + static_cast<double>(i) * step) * 1e12) / 1e12;
        if (v > b + 1e-9) break;
        check_unit(v, "lambda");
        grid.push_back(v);
    }
    return grid;
}

// ---- report files ---------------------------------------------------------

inline std::string csv_cell(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline std::string tau_cell(const std::optional<double>& tau) {
    return tau ? format_double(*tau) : "null";
}

inline std::string config_header(const json& config) { return "# config: " + config.dump() + "\n"; }

inline std::string report_csv(const CorrelationReport& report, const json& config) {
    std::string out = config_header(config);
    out += "embedding,penalty,setting,dimension,tau,n,is_column_max\n";
    for (const auto& r : report.rows)
        out += csv_cell(r.embedding_name) + "," + csv_cell(r.penalty) + "," +
               std::string(to_string(r.setting)) + "," + std::string(to_string(r.dimension)) + "," +
               tau_cell(r.tau) + "," + std::to_string(r.n_samples) + "," +
               (r.is_column_max ? "true" : "false") + "\n";
    return out;
}

inline std::string report_json(const CorrelationReport& report, const json& config) {
    json j;
    j["config"] = config;
    json rows = json::array();
    for (const auto& r : report.rows) rows.push_back(to_json(r));
    j["rows"] = std::move(rows);
    return j.dump(2) + "\n";
}

inline CorrelationReport report_from_json(const json& j) {
    CorrelationReport r;
    for (const auto& row : detail::member(j, "rows")) r.rows.push_back(correlation_row_from_json(row));
    return r;
}

inline std::string sweep_csv(std::span<const SweepRow> rows, const json& config) {
    std::string out = config_header(config);
    out += "lambda,embedding,penalty,setting,dimension,tau,n\n";
    for (const auto& s : rows)
        out += format_double(s.lambda) + "," + csv_cell(s.row.embedding_name) + "," +
               csv_cell(s.row.penalty) + "," + std::string(to_string(s.row.setting)) + "," +
               std::string(to_string(s.row.dimension)) + "," + tau_cell(s.row.tau) + "," +
               std::to_string(s.row.n_samples) + "\n";
    return out;
}

// One MetricScore per (document, system, setting) line.
inline std::string scores_jsonl(const ComponentTable& table, const MetaEvalConfig& cfg) {
    std::string out;
    for (const auto& s : table.samples) {
        json j;
        j["doc_id"] = s.doc_id;
        j["system_id"] = s.system_id;
        j["summary_id"] = s.summary_id;
        j["setting"] = to_string(s.setting);
        json fields = to_json(assemble(s.components, score_config_for(s, cfg)));
        for (auto& [k, v] : fields.items()) j[k] = v;
        out += j.dump() + "\n";
    }
    return out;
}

inline std::string skips_log(std::span<const SkipRecord> skips, const json& config) {
    std::string out = config_header(config);
    for (const auto& s : skips) out += s.id + "\t" + s.reason + "\n";
    return out;
}

}  // namespace semncg
