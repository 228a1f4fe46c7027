#pragma once

// Conversion of SummEval-style records into the native JSONL formats.
//
// Input: one JSON object per line with
//   id                  document id
//   model_id            system id
//   decoded             model summary (string, or list of sentences)
//   references          list of reference summaries (strings or lists)
//   expert_annotations  list of {coherence, consistency, fluency, relevance}
//                       on a 1-5 scale
//   text                source article (string or list); optional
//
// Strings are split into sentences on terminal punctuation; lists are taken
// as already segmented.

#include <set>
#include <string>
#include <vector>

#include "semncg/io.hpp"
#include "semncg/tokenize.hpp"
#include "semncg/types.hpp"

namespace semncg {

// Breaks after '.', '!' or '?' (plus any closing quotes or brackets) when
// whitespace follows. Pieces without a token are dropped.
inline std::vector<std::string> split_sentences(std::string_view text) {
    auto is_closer = [](std::string_view s, std::size_t i) -> std::size_t {
        char c = s[i];
        if (c == '"' || c == '\'' || c == ')' || c == ']') return 1;
        if (s.substr(i, 3) == "\xE2\x80\x9D" || s.substr(i, 3) == "\xE2\x80\x99") return 3;
        return 0;
    };
    std::vector<std::string> out;
    auto flush = [&](std::size_t from, std::size_t to) {
        auto piece = text.substr(from, to - from);
        auto b = piece.find_first_not_of(" \t\r\n");
        if (b == std::string_view::npos) return;
        auto e = piece.find_last_not_of(" \t\r\n");
        piece = piece.substr(b, e - b + 1);
        if (!tokenize(piece).empty()) out.emplace_back(piece);
    };
    std::size_t start = 0, i = 0;
    while (i < text.size()) {
        char c = text[i];
        if (c == '.' || c == '!' || c == '?') {
            std::size_t j = i + 1;
            while (j < text.size() && (text[j] == '.' || text[j] == '!' || text[j] == '?')) ++j;
            while (j < text.size()) {
                std::size_t n = is_closer(text, j);
                if (n == 0) break;
                j += n;
            }
            if (j >= text.size() || detail::is_space(text[j])) {
                flush(start, j);
                start = j;
            }
            i = j;
            continue;
        }
        ++i;
    }
    if (start < text.size()) flush(start, text.size());
    return out;
}

struct IngestOptions {
    // Systems whose outputs are extractive; everything else is flagged
    // abstractive. Defaults to SummEval's extractive systems.
    std::set<std::string> extractive_systems{"M0", "M1", "M2", "M5"};
};

struct IngestResult {
    std::vector<SentenceSet> corpus;   // documents, each followed by its references
    std::vector<SentenceSet> outputs;  // model summaries
    std::vector<AnnotationRecord> annotations;
    std::size_t records = 0;
    std::size_t malformed = 0;
    std::size_t empty_summaries = 0;
    std::size_t segmented_fields = 0;
    std::vector<std::string> log;
};

// Expert scores on 1-5 become (x - 1) / 4, averaged over experts.
inline double normalize_expert_mean(const std::vector<double>& raw) {
    if (raw.empty()) throw format_error("no expert scores");
    double sum = 0.0;
    for (double x : raw) {
        if (!std::isfinite(x) || x < 1.0 || x > 5.0)
            throw format_error("expert score " + format_double(x) + " outside 1-5");
        sum += (x - 1.0) / 4.0;
    }
    return sum / static_cast<double>(raw.size());
}

namespace detail {

inline std::vector<std::string> sentences_of(const json& v, std::size_t& segmented) {
    if (v.is_array()) {
        std::vector<std::string> out;
        for (const auto& s : v) {
            if (!s.is_string()) throw format_error("sentence lists must hold strings");
            if (!tokenize(s.get<std::string>()).empty()) out.push_back(s.get<std::string>());
        }
        return out;
    }
    if (v.is_string()) {
        ++segmented;
        return split_sentences(v.get<std::string>());
    }
    throw format_error("expected text or a list of sentences");
}

}  // namespace detail

inline IngestResult ingest_summeval(const std::vector<json>& records, const IngestOptions& opts = {}) {
    IngestResult r;
    std::set<std::string> seen_docs;
    for (const auto& rec : records) {
        ++r.records;
        const std::string where = "record " + std::to_string(r.records);
        try {
            auto doc_id = detail::field<std::string>(rec, "id");
            auto system = detail::field<std::string>(rec, "model_id");
            if (doc_id.empty() || system.empty()) throw format_error("empty id or model_id");

            if (seen_docs.insert(doc_id).second) {
                if (auto it = rec.find("text"); it != rec.end()) {
                    SentenceSet doc{doc_id, Role::document, detail::sentences_of(*it, r.segmented_fields),
                                    {}, {}, true};
                    if (doc.sentences.empty())
                        r.log.push_back(where + ": document '" + doc_id + "' has no sentences");
                    else
                        r.corpus.push_back(std::move(doc));
                } else {
                    r.log.push_back(where + ": no source text for '" + doc_id + "'");
                }
                const auto& refs = detail::member(rec, "references");
                if (!refs.is_array()) throw format_error("'references' must be a list");
                for (std::size_t i = 0; i < refs.size(); ++i) {
                    SentenceSet ref{doc_id + "/ref" + std::to_string(i), Role::reference,
                                    detail::sentences_of(refs[i], r.segmented_fields), doc_id,
                                    {}, true};
                    if (ref.sentences.empty())
                        r.log.push_back(where + ": reference " + std::to_string(i) + " is empty");
                    else
                        r.corpus.push_back(std::move(ref));
                }
            }

            SentenceSet out{doc_id + "/" + system, Role::model_summary,
                            detail::sentences_of(detail::member(rec, "decoded"), r.segmented_fields),
                            doc_id, system, opts.extractive_systems.count(system) > 0};
            if (out.sentences.empty()) {
                ++r.empty_summaries;
                r.log.push_back(where + ": empty summary for " + out.id + " skipped");
                continue;
            }

            AnnotationRecord ann{doc_id, system};
            if (auto it = rec.find("expert_annotations"); it != rec.end()) {
                if (!it->is_array()) throw format_error("'expert_annotations' must be a list");
                std::vector<double> con, rel, coh, flu;
                for (const auto& e : *it) {
                    con.push_back(detail::finite_number(detail::member(e, "consistency"), "consistency"));
                    rel.push_back(detail::finite_number(detail::member(e, "relevance"), "relevance"));
                    coh.push_back(detail::finite_number(detail::member(e, "coherence"), "coherence"));
                    flu.push_back(detail::finite_number(detail::member(e, "fluency"), "fluency"));
                }
                ann.consistency = normalize_expert_mean(con);
                ann.relevance = normalize_expert_mean(rel);
                ann.coherence = normalize_expert_mean(coh);
                ann.fluency = normalize_expert_mean(flu);
                r.annotations.push_back(ann);
            }
            r.outputs.push_back(std::move(out));
        } catch (const format_error& e) {
            ++r.malformed;
            r.log.push_back(where + ": malformed (" + e.what() + "), skipped");
        }
    }
    return r;
}

}  // namespace semncg
