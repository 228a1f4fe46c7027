#pragma once

// Self-referenced redundancy: the mean, over the first k summary sentences,
// of each sentence's highest similarity to any other of those sentences.

#include <optional>
#include <string>
#include <vector>

#include "semncg/similarity.hpp"
#include "semncg/types.hpp"

namespace semncg {

// `sim(j, i)` returns Sim(x_j, x_i) for sentence positions j != i.
template <class SimFn>
double self_redundancy(std::size_t k, SimFn&& sim) {
    if (k < 2) throw invalid_input("redundancy needs k >= 2");
    double total = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        double best = 0.0;
        bool first = true;
        for (std::size_t j = 0; j < k; ++j) {
            if (j == i) continue;
            double s = sim(j, i);
            if (first || s > best) best = s;
            first = false;
        }
        total += best;
    }
    return clamp_unit(total / static_cast<double>(k));
}

struct RedundancyInputs {
    const EmbeddingSet* embeddings = nullptr;     // cosine backend
    const SimilarityMatrix* external = nullptr;   // bertscore / moverscore
    RougeVariant rouge_variant = RougeVariant::f1;
};

inline SimilarityKind similarity_kind(Penalty p) {
    switch (p) {
        case Penalty::cosine: return SimilarityKind::cosine;
        case Penalty::rouge1: return SimilarityKind::rouge1;
        case Penalty::bertscore: return SimilarityKind::bertscore;
        case Penalty::moverscore: return SimilarityKind::moverscore;
        case Penalty::none: break;
    }
    throw invalid_input("penalty 'none' has no similarity backend");
}

// Score_red over the first k sentences of `summary`. External matrices are
// read as values[row j][col i] = Sim(x_j, x_i), exactly as supplied.
inline double redundancy_score(const SentenceSet& summary, std::size_t k, Penalty backend,
                               const RedundancyInputs& inputs = {}) {
    if (k < 2) throw invalid_input("redundancy needs k >= 2");
    if (k > summary.size())
        throw invalid_input("summary shorter than k (" + std::to_string(summary.size()) + " < " +
                            std::to_string(k) + ")");

    switch (backend) {
        case Penalty::cosine: {
            if (!inputs.embeddings)
                throw invalid_input("cosine redundancy needs embeddings for '" + summary.id + "'");
            check_aligned(summary, *inputs.embeddings);
            const auto& v = inputs.embeddings->vectors;
            return self_redundancy(k, [&](std::size_t j, std::size_t i) { return cosine(v[j], v[i]); });
        }
        case Penalty::rouge1: {
            std::vector<std::vector<std::string>> tokens;
            for (std::size_t i = 0; i < k; ++i) tokens.push_back(tokenize(summary.sentences[i]));
            return self_redundancy(k, [&](std::size_t j, std::size_t i) {
                return rouge1_score(tokens[j], tokens[i], inputs.rouge_variant);
            });
        }
        case Penalty::bertscore:
        case Penalty::moverscore: {
            if (!inputs.external)
                throw invalid_input(std::string(to_string(backend)) +
                                    " redundancy needs an external similarity matrix for '" +
                                    summary.id + "'");
            const auto& m = *inputs.external;
            if (m.kind != similarity_kind(backend) && m.kind != SimilarityKind::external)
                throw invalid_input("matrix kind '" + std::string(to_string(m.kind)) +
                                    "' does not match penalty '" + std::string(to_string(backend)) + "'");
            for (std::size_t j = 0; j < k; ++j)
                for (std::size_t i = 0; i < k; ++i)
                    if (i != j && !m.find(j, i))
                        throw invalid_input("external matrix does not cover the first " +
                                            std::to_string(k) + " sentences");
            return self_redundancy(k, [&](std::size_t j, std::size_t i) {
                return clamp_unit(*m.find(j, i));
            });
        }
        case Penalty::none: break;
    }
    throw invalid_input("penalty 'none' has no redundancy score");
}

inline double redundancy_score(const SimilarityMatrix& m, std::size_t k) {
    if (k > m.rows() || k > m.cols()) throw invalid_input("matrix smaller than k");
    return self_redundancy(k, [&](std::size_t j, std::size_t i) { return clamp_unit(m.values[j][i]); });
}

}  // namespace semncg
