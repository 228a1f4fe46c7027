#pragma once

// Ground truth from several references, and reference bucketing by lexical
// overlap with the source document.

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "semncg/io.hpp"
#include "semncg/ranking.hpp"
#include "semncg/similarity.hpp"
#include "semncg/types.hpp"

namespace semncg {

namespace detail {

// Mean written as first + mean(deviation from first), which is exact when
// every value is identical. Callers sort first so the result does not depend
// on input order.
inline double stable_mean(std::span<const double> xs) {
    double first = xs.front();
    double dev = 0.0;
    for (double x : xs) dev += x - first;
    return first + dev / static_cast<double>(xs.size());
}

inline RelevanceVector average_relevance(const std::string& doc_id, std::size_t n,
                                         const std::vector<std::vector<double>>& per_reference) {
    RelevanceVector out{doc_id, std::vector<double>(n, 0.0)};
    std::vector<double> column(per_reference.size());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t m = 0; m < per_reference.size(); ++m) column[m] = per_reference[m][i];
        std::sort(column.begin(), column.end());
        out.scores[i] = stable_mean(column);
    }
    return out;
}

}  // namespace detail

// Ensemble_sim: the document-by-reference cosine matrix is built for every
// reference, each document sentence's row is averaged, and those averages
// are then averaged across references.
inline RelevanceVector ensemble_sim_relevance(const EmbeddedSentences& doc,
                                              std::span<const EmbeddedSentences> refs) {
    if (refs.empty()) throw invalid_input("reference list is empty");
    std::vector<std::vector<double>> per_reference;
    for (const auto& ref : refs) {
        if (ref.sentences.sentences.empty())
            throw invalid_input("reference '" + ref.sentences.id + "' is empty");
        if (ref.embeddings.dim != doc.embeddings.dim)
            throw invalid_input("embedding dim mismatch for reference '" + ref.sentences.id + "'");
        auto sims = pairwise_matrix(doc.sentences, ref.sentences, SimilarityKind::cosine,
                                    EmbeddingPair{doc.embeddings, ref.embeddings});
        std::vector<double> row_means;
        row_means.reserve(sims.rows());
        for (const auto& row : sims.values) {
            double sum = 0.0;
            for (double x : row) sum += x;
            row_means.push_back(sum / static_cast<double>(row.size()));
        }
        per_reference.push_back(std::move(row_means));
    }
    return detail::average_relevance(doc.sentences.id, doc.sentences.size(), per_reference);
}

// Ensemble_rel: one relevance vector per reference (the single-reference
// definition), averaged per sentence and merged into one ranking.
inline GroundTruthRanking ensemble_rel_ranking(const EmbeddedSentences& doc,
                                               std::span<const EmbeddedSentences> refs,
                                               GainScheme scheme = GainScheme::normalized_relevance) {
    if (refs.empty()) throw invalid_input("reference list is empty");
    std::vector<std::vector<double>> per_reference;
    for (const auto& ref : refs) per_reference.push_back(compute_relevance(doc, ref).scores);
    return build_ground_truth(
        detail::average_relevance(doc.sentences.id, doc.sentences.size(), per_reference), scheme);
}

// Fraction of reference unigrams (clipped multiset counts) found in the
// document.
inline double lexical_overlap(const SentenceSet& ref, const SentenceSet& doc) {
    std::map<std::string, long> doc_counts;
    for (const auto& s : doc.sentences)
        for (auto& t : tokenize(s)) ++doc_counts[std::move(t)];
    long total = 0, hit = 0;
    for (const auto& s : ref.sentences)
        for (const auto& t : tokenize(s)) {
            ++total;
            auto it = doc_counts.find(t);
            if (it != doc_counts.end() && it->second > 0) {
                --it->second;
                ++hit;
            }
        }
    return total == 0 ? 0.0 : static_cast<double>(hit) / static_cast<double>(total);
}

// Positions refer to the input reference list.
struct ReferenceBuckets {
    std::vector<double> overlaps;
    std::vector<std::size_t> ascending;  // references sorted by overlap
    std::size_t lor = 0;
    std::size_t mor = 0;
    std::size_t hor = 0;
    std::vector<std::size_t> lors;
    std::vector<std::size_t> mors;
    std::vector<std::size_t> hors;
    std::vector<std::size_t> mixed;

    const std::vector<std::size_t>& multi(ReferenceSetting s) const {
        switch (s) {
            case ReferenceSetting::multi_LORs: return lors;
            case ReferenceSetting::multi_MORs: return mors;
            case ReferenceSetting::multi_HORs: return hors;
            default: return mixed;
        }
    }

    std::vector<std::size_t> select(ReferenceSetting s) const {
        switch (s) {
            case ReferenceSetting::LOR: return {lor};
            case ReferenceSetting::MOR: return {mor};
            case ReferenceSetting::HOR: return {hor};
            default: return multi(s);
        }
    }
};

// LOR/HOR are the least/most overlapping references and MOR the lower
// median; LORs/MORs/HORs are the bottom, middle and top three. Ties keep
// the lower original index first. `mor_override` pins MOR to a given
// reference position.
inline ReferenceBuckets bucket_references(const SentenceSet& doc, std::span<const SentenceSet> refs,
                                          std::optional<std::size_t> mor_override = std::nullopt) {
    const std::size_t n = refs.size();
    if (n < 3) throw invalid_input("bucketing needs at least 3 references, got " + std::to_string(n));
    ReferenceBuckets b;
    for (const auto& r : refs) b.overlaps.push_back(lexical_overlap(r, doc));
    b.ascending.resize(n);
    std::iota(b.ascending.begin(), b.ascending.end(), std::size_t{0});
    std::stable_sort(b.ascending.begin(), b.ascending.end(),
                     [&](std::size_t x, std::size_t y) { return b.overlaps[x] < b.overlaps[y]; });

    const std::size_t median = (n - 1) / 2;
    b.lor = b.ascending.front();
    b.hor = b.ascending.back();
    b.mor = b.ascending[median];
    if (mor_override) {
        if (*mor_override >= n) throw invalid_input("MOR override out of range");
        b.mor = *mor_override;
    }
    const std::size_t mid_start = std::min(median == 0 ? 0 : median - 1, n - 3);
    b.lors.assign(b.ascending.begin(), b.ascending.begin() + 3);
    b.mors.assign(b.ascending.begin() + static_cast<std::ptrdiff_t>(mid_start),
                  b.ascending.begin() + static_cast<std::ptrdiff_t>(mid_start + 3));
    b.hors.assign(b.ascending.end() - 3, b.ascending.end());
    b.mixed = {b.lor, b.mor, b.hor};
    return b;
}

inline json bucket_report(const SentenceSet& doc, std::span<const SentenceSet> refs,
                          const ReferenceBuckets& b) {
    auto ids = [&](const std::vector<std::size_t>& idx) {
        json a = json::array();
        for (auto i : idx) a.push_back(refs[i].id);
        return a;
    };
    json j;
    j["doc_id"] = doc.id;
    j["overlaps"] = b.overlaps;
    j["LOR"] = refs[b.lor].id;
    j["MOR"] = refs[b.mor].id;
    j["HOR"] = refs[b.hor].id;
    j["LORs"] = ids(b.lors);
    j["MORs"] = ids(b.mors);
    j["HORs"] = ids(b.hors);
    return j;
}

}  // namespace semncg
