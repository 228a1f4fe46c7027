#pragma once

// Ground-truth rankings, model-to-document alignment and Sem-nCG@k.

#include <algorithm>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "semncg/similarity.hpp"
#include "semncg/tokenize.hpp"
#include "semncg/types.hpp"

namespace semncg {

// A sentence set together with its index-aligned embeddings.
struct EmbeddedSentences {
    const SentenceSet& sentences;
    const EmbeddingSet& embeddings;
};

// r_i = mean over reference sentences j of cosine(doc_i, ref_j).
inline RelevanceVector compute_relevance(const SentenceSet& doc, const SentenceSet& ref,
                                         const EmbeddingSet& doc_embeds,
                                         const EmbeddingSet& ref_embeds) {
    if (ref.sentences.empty()) throw invalid_input("reference '" + ref.id + "' is empty");
    check_aligned(doc, doc_embeds);
    check_aligned(ref, ref_embeds);
    if (doc_embeds.dim != ref_embeds.dim)
        throw invalid_input("embedding dim mismatch between '" + doc.id + "' (" +
                            std::to_string(doc_embeds.dim) + ") and '" + ref.id + "' (" +
                            std::to_string(ref_embeds.dim) + ")");
    RelevanceVector rel{doc.id, std::vector<double>(doc.size(), 0.0)};
    const auto m = static_cast<double>(ref.size());
    for (std::size_t i = 0; i < doc.size(); ++i) {
        double sum = 0.0;
        for (const auto& rv : ref_embeds.vectors) sum += cosine(doc_embeds.vectors[i], rv);
        rel.scores[i] = sum / m;
    }
    return rel;
}

inline RelevanceVector compute_relevance(const EmbeddedSentences& doc, const EmbeddedSentences& ref) {
    return compute_relevance(doc.sentences, ref.sentences, doc.embeddings, ref.embeddings);
}

// Indices by descending relevance; ties keep the lower index first.
inline std::vector<std::size_t> rank_by_relevance(std::span<const double> scores) {
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    return order;
}

// normalized_relevance: g_i = r_i / sum(r), uniform 1/n when sum(r) == 0.
// rank_position: with 1-based rank p_i, g_i = (n - p_i) / sum_{m=0}^{n-1} m,
// so the top sentence gets n - 1 shares and the last gets none.
inline GroundTruthRanking build_ground_truth(const RelevanceVector& rel,
                                             GainScheme scheme = GainScheme::normalized_relevance) {
    if (rel.scores.empty()) throw invalid_input("relevance vector is empty");
    for (double r : rel.scores)
        if (!std::isfinite(r) || r < 0.0)
            throw invalid_input("relevance scores must be finite and non-negative");

    const std::size_t n = rel.scores.size();
    GroundTruthRanking gt;
    gt.doc_id = rel.doc_id;
    gt.gain_scheme = scheme;
    gt.order = rank_by_relevance(rel.scores);
    gt.gains.assign(n, 0.0);

    if (scheme == GainScheme::normalized_relevance) {
        double total = std::accumulate(rel.scores.begin(), rel.scores.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i)
            gt.gains[i] = total > 0.0 ? rel.scores[i] / total : 1.0 / static_cast<double>(n);
    } else {
        if (n == 1) {
            gt.gains[0] = 1.0;
        } else {
            const double denom = static_cast<double>(n * (n - 1) / 2);
            for (std::size_t p = 0; p < n; ++p)
                gt.gains[gt.order[p]] = static_cast<double>(n - (p + 1)) / denom;
        }
    }
    return gt;
}

// Maps each model sentence to a document sentence: an exact token match
// when it is unique, otherwise the best ROUGE-1 F1 match (lower index on
// ties). Never fails; unmatched sentences get score 0.
inline ModelAlignment align_model_summary(const SentenceSet& model, const SentenceSet& doc) {
    if (model.sentences.empty() || doc.sentences.empty())
        throw invalid_input("alignment needs non-empty model summary and document");
    std::vector<std::vector<std::string>> doc_tokens;
    doc_tokens.reserve(doc.size());
    for (const auto& s : doc.sentences) doc_tokens.push_back(tokenize(s));

    ModelAlignment out{model.id, {}};
    for (std::size_t mi = 0; mi < model.size(); ++mi) {
        auto tokens = tokenize(model.sentences[mi]);
        std::size_t exact_hits = 0, exact_index = 0;
        for (std::size_t d = 0; d < doc_tokens.size(); ++d)
            if (!tokens.empty() && doc_tokens[d] == tokens && exact_hits++ == 0) exact_index = d;
        if (exact_hits == 1) {
            out.matches.push_back({mi, exact_index, 1.0, MatchMethod::exact});
            continue;
        }
        std::size_t best = 0;
        double best_score = -1.0;
        for (std::size_t d = 0; d < doc_tokens.size(); ++d) {
            double f = rouge1_f(tokens, doc_tokens[d]);
            if (f > best_score) {
                best_score = f;
                best = d;
            }
        }
        out.matches.push_back({mi, best, best_score, MatchMethod::fuzzy});
    }
    return out;
}

// CG@k / ICG@k. CG@k sums the gains of the distinct document sentences hit
// by the first k model sentences; ICG@k sums the gains of the ideal top k.
inline double sem_ncg_at_k(const GroundTruthRanking& gt, const ModelAlignment& align, std::size_t k) {
    const std::size_t n = gt.order.size();
    if (k == 0) throw invalid_input("k must be positive");
    if (k > align.matches.size())
        throw invalid_input("summary shorter than k (" + std::to_string(align.matches.size()) +
                            " < " + std::to_string(k) + ")");
    if (k > n)
        throw invalid_input("document shorter than k (" + std::to_string(n) + " < " +
                            std::to_string(k) + ")");
    if (gt.gains.size() != n) throw invalid_input("ground truth gains and order differ in length");

    std::vector<std::size_t> rank_of(n);
    for (std::size_t p = 0; p < n; ++p) rank_of[gt.order[p]] = p;

    // Summing in rank order makes CG@k bit-identical to ICG@k when the picks
    // are the ideal set.
    std::vector<std::size_t> picked_ranks;
    for (std::size_t i = 0; i < k; ++i) {
        std::size_t d = align.matches[i].doc_index;
        if (d >= n) throw invalid_input("alignment refers to document sentence out of range");
        picked_ranks.push_back(rank_of[d]);
    }
    std::sort(picked_ranks.begin(), picked_ranks.end());
    picked_ranks.erase(std::unique(picked_ranks.begin(), picked_ranks.end()), picked_ranks.end());

    double cg = 0.0;
    for (std::size_t p : picked_ranks) cg += gt.gains[gt.order[p]];
    double icg = 0.0;
    for (std::size_t p = 0; p < k; ++p) icg += gt.gains[gt.order[p]];

    if (icg <= 0.0) return 1.0;
    return std::min(1.0, cg / icg);
}

}  // namespace semncg
