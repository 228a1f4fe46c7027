#pragma once

// Sentence similarity backends: cosine over embeddings, ROUGE-1 over
// tokens, and externally computed matrices loaded from disk.

#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "semncg/io.hpp"
#include "semncg/tokenize.hpp"
#include "semncg/types.hpp"

namespace semncg {

inline double clamp_unit(double x) { return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x); }

// Cosine clamped to [0, 1]. Zero vectors have similarity 0.
inline double cosine(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size())
        throw invalid_input("cosine: dimension mismatch (" + std::to_string(u.size()) + " vs " +
                            std::to_string(v.size()) + ")");
    if (u.empty()) throw invalid_input("cosine: empty vectors");
    double dot = 0.0, nu = 0.0, nv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        dot += u[i] * v[i];
        nu += u[i] * u[i];
        nv += v[i] * v[i];
    }
    if (nu == 0.0 || nv == 0.0) return 0.0;
    // sqrt(nu * nv) keeps the expression symmetric in (u, v).
    return clamp_unit(dot / std::sqrt(nu * nv));
}

struct RougeScores {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

// Unigram overlap with clipped counts.
inline RougeScores rouge1(const std::vector<std::string>& candidate,
                          const std::vector<std::string>& reference) {
    if (candidate.empty() || reference.empty()) return {};
    std::unordered_map<std::string_view, long> ref_counts;
    for (const auto& t : reference) ++ref_counts[t];
    long overlap = 0;
    for (const auto& t : candidate) {
        auto it = ref_counts.find(t);
        if (it != ref_counts.end() && it->second > 0) {
            --it->second;
            ++overlap;
        }
    }
    auto c = static_cast<double>(candidate.size());
    auto r = static_cast<double>(reference.size());
    auto o = static_cast<double>(overlap);
    return {o / c, o / r, 2.0 * o / (c + r)};
}

inline double rouge1_f(const std::vector<std::string>& candidate,
                       const std::vector<std::string>& reference) {
    return rouge1(candidate, reference).f1;
}

inline double rouge1_score(const std::vector<std::string>& candidate,
                           const std::vector<std::string>& reference, RougeVariant variant) {
    auto s = rouge1(candidate, reference);
    switch (variant) {
        case RougeVariant::f1: return s.f1;
        case RougeVariant::recall: return s.recall;
        case RougeVariant::precision: return s.precision;
    }
    return s.f1;
}

struct EmbeddingPair {
    const EmbeddingSet& a;
    const EmbeddingSet& b;
};

// matrix[i][j] = Sim(a_i, b_j). Only the cosine and rouge1 backends are
// computed here; the others come from load_external_matrix.
inline SimilarityMatrix pairwise_matrix(const SentenceSet& a, const SentenceSet& b,
                                        SimilarityKind backend,
                                        std::optional<EmbeddingPair> embeds = std::nullopt,
                                        RougeVariant variant = RougeVariant::f1) {
    SimilarityMatrix m;
    m.kind = backend;
    for (std::size_t i = 0; i < a.size(); ++i) m.row_ids.push_back(i);
    for (std::size_t j = 0; j < b.size(); ++j) m.col_ids.push_back(j);
    m.values.assign(a.size(), std::vector<double>(b.size(), 0.0));

    if (backend == SimilarityKind::cosine) {
        if (!embeds) throw invalid_input("cosine similarity needs embeddings for both sentence sets");
        check_aligned(a, embeds->a);
        check_aligned(b, embeds->b);
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = 0; j < b.size(); ++j)
                m.values[i][j] = cosine(embeds->a.vectors[i], embeds->b.vectors[j]);
    } else if (backend == SimilarityKind::rouge1) {
        std::vector<std::vector<std::string>> ta, tb;
        for (const auto& s : a.sentences) ta.push_back(tokenize(s));
        for (const auto& s : b.sentences) tb.push_back(tokenize(s));
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = 0; j < b.size(); ++j)
                m.values[i][j] = rouge1_score(ta[i], tb[j], variant);
    } else {
        throw invalid_input("backend '" + std::string(to_string(backend)) +
                            "' cannot be computed natively; load an external matrix");
    }
    return m;
}

// Parses a similarity-matrix file, clamps values into [0, 1] and records a
// warning for every clamped value above 1. Negative values clamp silently.
inline SimilarityMatrix load_external_matrix(const std::filesystem::path& path,
                                             std::vector<std::string>& warnings) {
    SimilarityMatrix m = similarity_matrix_from_json(parse_json(read_file(path), path.string()));
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) {
            double& x = m.values[r][c];
            if (x > 1.0)
                warnings.push_back(path.string() + ": value " + format_double(x) + " at (" +
                                   std::to_string(m.row_ids[r]) + ", " +
                                   std::to_string(m.col_ids[c]) + ") clamped to 1");
            x = clamp_unit(x);
        }
    return m;
}

inline SimilarityMatrix load_external_matrix(const std::filesystem::path& path) {
    std::vector<std::string> warnings;
    auto m = load_external_matrix(path, warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
    return m;
}

}  // namespace semncg
