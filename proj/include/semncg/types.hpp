#pragma once

// Domain types shared across the library. Every type is a plain value and
// is never mutated after it has been validated.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace semncg {

// Precondition violations: bad k, out-of-range lambda, shape mismatch.
class invalid_input : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Malformed files and records.
class format_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

template <class Enum, std::size_t N>
using name_table = std::array<std::pair<Enum, std::string_view>, N>;

template <class Enum, std::size_t N>
std::string_view enum_name(const name_table<Enum, N>& table, Enum value) {
    for (const auto& [e, name] : table)
        if (e == value) return name;
    throw invalid_input("unknown enum value");
}

template <class Enum, std::size_t N>
Enum enum_parse(const name_table<Enum, N>& table, std::string_view text,
                std::string_view what) {
    for (const auto& [e, name] : table)
        if (name == text) return e;
    throw invalid_input("unknown " + std::string(what) + ": '" + std::string(text) + "'");
}

}  // namespace detail

enum class Role { document, reference, model_summary };
enum class SimilarityKind { cosine, rouge1, bertscore, moverscore, external };
enum class GainScheme { normalized_relevance, rank_position };
enum class MatchMethod { exact, fuzzy };
// Backend used for the redundancy penalty; `none` scores Sem-nCG alone.
enum class Penalty { none, cosine, rouge1, bertscore, moverscore };
enum class RougeVariant { f1, recall, precision };
enum class Dimension { consistency, relevance, coherence, fluency };
enum class ReferenceSetting { LOR, MOR, HOR, multi_LORs, multi_MORs, multi_HORs, multi_mixed };
enum class Ensemble { sim, rel };
enum class TauVariant { b, a };

#define SEMNCG_ENUM_STRINGS(Enum, N, what, ...)                                           \
    inline constexpr detail::name_table<Enum, N> Enum##_names{{__VA_ARGS__}};             \
    inline std::string_view to_string(Enum v) { return detail::enum_name(Enum##_names, v); } \
    inline Enum parse_##Enum(std::string_view s) {                                        \
        return detail::enum_parse(Enum##_names, s, what);                                 \
    }

SEMNCG_ENUM_STRINGS(Role, 3, "role",
                    {Role::document, "document"},
                    {Role::reference, "reference"},
                    {Role::model_summary, "model_summary"})
SEMNCG_ENUM_STRINGS(SimilarityKind, 5, "similarity kind",
                    {SimilarityKind::cosine, "cosine"},
                    {SimilarityKind::rouge1, "rouge1"},
                    {SimilarityKind::bertscore, "bertscore"},
                    {SimilarityKind::moverscore, "moverscore"},
                    {SimilarityKind::external, "external"})
SEMNCG_ENUM_STRINGS(GainScheme, 2, "gain scheme",
                    {GainScheme::normalized_relevance, "normalized_relevance"},
                    {GainScheme::rank_position, "rank_position"})
SEMNCG_ENUM_STRINGS(MatchMethod, 2, "match method",
                    {MatchMethod::exact, "exact"},
                    {MatchMethod::fuzzy, "fuzzy"})
SEMNCG_ENUM_STRINGS(Penalty, 5, "penalty",
                    {Penalty::none, "none"},
                    {Penalty::cosine, "cosine"},
                    {Penalty::rouge1, "rouge1"},
                    {Penalty::bertscore, "bertscore"},
                    {Penalty::moverscore, "moverscore"})
SEMNCG_ENUM_STRINGS(RougeVariant, 3, "rouge variant",
                    {RougeVariant::f1, "f1"},
                    {RougeVariant::recall, "recall"},
                    {RougeVariant::precision, "precision"})
SEMNCG_ENUM_STRINGS(Dimension, 4, "dimension",
                    {Dimension::consistency, "consistency"},
                    {Dimension::relevance, "relevance"},
                    {Dimension::coherence, "coherence"},
                    {Dimension::fluency, "fluency"})
SEMNCG_ENUM_STRINGS(ReferenceSetting, 7, "reference setting",
                    {ReferenceSetting::LOR, "LOR"},
                    {ReferenceSetting::MOR, "MOR"},
                    {ReferenceSetting::HOR, "HOR"},
                    {ReferenceSetting::multi_LORs, "multi-LORs"},
                    {ReferenceSetting::multi_MORs, "multi-MORs"},
                    {ReferenceSetting::multi_HORs, "multi-HORs"},
                    {ReferenceSetting::multi_mixed, "multi-mixed"})
SEMNCG_ENUM_STRINGS(Ensemble, 2, "ensemble",
                    {Ensemble::sim, "sim"},
                    {Ensemble::rel, "rel"})
SEMNCG_ENUM_STRINGS(TauVariant, 2, "tau variant",
                    {TauVariant::b, "b"},
                    {TauVariant::a, "a"})

#undef SEMNCG_ENUM_STRINGS

inline constexpr std::array<Dimension, 4> all_dimensions{
    Dimension::consistency, Dimension::relevance, Dimension::coherence, Dimension::fluency};

inline bool is_multi_reference(ReferenceSetting s) {
    return s != ReferenceSetting::LOR && s != ReferenceSetting::MOR && s != ReferenceSetting::HOR;
}

// An ordered list of sentences. `doc_id` links references and model
// summaries to their source document; `system_id` and `extractive` only
// carry meaning for model summaries.
struct SentenceSet {
    std::string id;
    Role role = Role::document;
    std::vector<std::string> sentences;
    std::string doc_id;
    std::string system_id;
    bool extractive = true;

    std::size_t size() const { return sentences.size(); }
    bool operator==(const SentenceSet&) const = default;
};

struct EmbeddingSet {
    std::string sentence_set_id;
    std::size_t dim = 0;
    std::vector<std::vector<double>> vectors;

    bool operator==(const EmbeddingSet&) const = default;
};

inline void validate(const EmbeddingSet& e) {
    if (e.dim == 0) throw format_error("embedding set '" + e.sentence_set_id + "': dim must be positive");
    for (const auto& v : e.vectors) {
        if (v.size() != e.dim)
            throw format_error("embedding set '" + e.sentence_set_id + "': vector length " +
                               std::to_string(v.size()) + " != dim " + std::to_string(e.dim));
        for (double x : v)
            if (!std::isfinite(x))
                throw format_error("embedding set '" + e.sentence_set_id + "': non-finite component");
    }
}

// Checks that an embedding set lines up index-for-index with its sentences.
inline void check_aligned(const SentenceSet& s, const EmbeddingSet& e) {
    if (e.vectors.size() != s.sentences.size())
        throw invalid_input("embedding count " + std::to_string(e.vectors.size()) +
                            " does not match sentence count " + std::to_string(s.sentences.size()) +
                            " for '" + s.id + "'");
}

// Similarity values indexed by sentence ids. values[r][c] is
// Sim(row_ids[r], col_ids[c]).
struct SimilarityMatrix {
    std::vector<std::size_t> row_ids;
    std::vector<std::size_t> col_ids;
    std::vector<std::vector<double>> values;
    SimilarityKind kind = SimilarityKind::external;

    std::size_t rows() const { return row_ids.size(); }
    std::size_t cols() const { return col_ids.size(); }

    // Looks up by sentence id rather than position.
    std::optional<double> find(std::size_t row_id, std::size_t col_id) const {
        auto r = std::find(row_ids.begin(), row_ids.end(), row_id);
        auto c = std::find(col_ids.begin(), col_ids.end(), col_id);
        if (r == row_ids.end() || c == col_ids.end()) return std::nullopt;
        return values[static_cast<std::size_t>(r - row_ids.begin())]
                     [static_cast<std::size_t>(c - col_ids.begin())];
    }

    bool operator==(const SimilarityMatrix&) const = default;
};

struct RelevanceVector {
    std::string doc_id;
    std::vector<double> scores;

    bool operator==(const RelevanceVector&) const = default;
};

// `order` lists document sentence indices by descending relevance; `gains`
// is indexed by sentence, not by rank.
struct GroundTruthRanking {
    std::string doc_id;
    std::vector<std::size_t> order;
    std::vector<double> gains;
    GainScheme gain_scheme = GainScheme::normalized_relevance;

    bool operator==(const GroundTruthRanking&) const = default;
};

struct AlignmentMatch {
    std::size_t model_index = 0;
    std::size_t doc_index = 0;
    double score = 0.0;
    MatchMethod method = MatchMethod::exact;

    bool operator==(const AlignmentMatch&) const = default;
};

struct ModelAlignment {
    std::string model_summary_id;
    std::vector<AlignmentMatch> matches;

    bool operator==(const ModelAlignment&) const = default;
};

// The (Sem-nCG, Score_red, final) triple together with the configuration
// that produced it. The constructor enforces
//   final == lambda * sem_ncg + (1 - lambda) * (1 - score_red).
class MetricScore {
public:
    static constexpr double tolerance = 1e-12;

    MetricScore(double sem_ncg, double score_red, double final_score, std::size_t k, double lambda,
                Penalty red_backend, std::string embedding_name,
                GainScheme gain_scheme = GainScheme::normalized_relevance)
        : sem_ncg_(sem_ncg), score_red_(score_red), final_(final_score), k_(k), lambda_(lambda),
          red_backend_(red_backend), embedding_name_(std::move(embedding_name)),
          gain_scheme_(gain_scheme) {
        auto unit = [](double x) { return std::isfinite(x) && x >= 0.0 && x <= 1.0; };
        if (!unit(sem_ncg_) || !unit(score_red_) || !unit(final_) || !unit(lambda_))
            throw invalid_input("metric score fields must lie in [0, 1]");
        if (k_ == 0) throw invalid_input("k must be positive");
        double expected = lambda_ * sem_ncg_ + (1.0 - lambda_) * (1.0 - score_red_);
        if (std::abs(expected - final_) > tolerance)
            throw invalid_input("final score does not equal lambda*sem_ncg + (1-lambda)*(1-score_red)");
    }

    double sem_ncg() const { return sem_ncg_; }
    double score_red() const { return score_red_; }
    double final_score() const { return final_; }
    std::size_t k() const { return k_; }
    double lambda() const { return lambda_; }
    Penalty red_backend() const { return red_backend_; }
    const std::string& embedding_name() const { return embedding_name_; }
    GainScheme gain_scheme() const { return gain_scheme_; }

    bool operator==(const MetricScore&) const = default;

private:
    double sem_ncg_;
    double score_red_;
    double final_;
    std::size_t k_;
    double lambda_;
    Penalty red_backend_;
    std::string embedding_name_;
    GainScheme gain_scheme_;
};

// Expert means per dimension, normalized to [0, 1].
struct AnnotationRecord {
    std::string doc_id;
    std::string system_id;
    double consistency = 0.0;
    double relevance = 0.0;
    double coherence = 0.0;
    double fluency = 0.0;

    double value(Dimension d) const {
        switch (d) {
            case Dimension::consistency: return consistency;
            case Dimension::relevance: return relevance;
            case Dimension::coherence: return coherence;
            case Dimension::fluency: return fluency;
        }
        return 0.0;
    }

    bool operator==(const AnnotationRecord&) const = default;
};

inline constexpr std::string_view without_redundancy_label = "w/o redundancy";

inline std::string penalty_label(Penalty p) {
    return p == Penalty::none ? std::string(without_redundancy_label) : std::string(to_string(p));
}

struct CorrelationRow {
    std::string embedding_name;
    std::string penalty;  // backend name, or "w/o redundancy"
    ReferenceSetting setting = ReferenceSetting::LOR;
    Dimension dimension = Dimension::consistency;
    std::optional<double> tau;  // missing when either side is constant
    std::size_t n_samples = 0;
    bool is_column_max = false;

    bool operator==(const CorrelationRow&) const = default;
};

struct CorrelationReport {
    std::vector<CorrelationRow> rows;

    bool operator==(const CorrelationReport&) const = default;
};

}  // namespace semncg
