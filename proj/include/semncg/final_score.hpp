#pragma once

// Redundancy-aware score assembly:
//   score = lambda * sem_ncg + (1 - lambda) * (1 - score_red)

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "semncg/io.hpp"
#include "semncg/multi_reference.hpp"
#include "semncg/ranking.hpp"
#include "semncg/redundancy.hpp"
#include "semncg/types.hpp"

namespace semncg {

inline void check_unit(double x, const char* what) {
    if (!std::isfinite(x) || x < 0.0 || x > 1.0)
        throw invalid_input(std::string(what) + " must lie in [0, 1], got " + format_double(x));
}

inline double combine(double sem_ncg, double score_red, double lambda) {
    check_unit(sem_ncg, "sem_ncg");
    check_unit(score_red, "score_red");
    check_unit(lambda, "lambda");
    return lambda * sem_ncg + (1.0 - lambda) * (1.0 - score_red);
}

// The redundancy value that would make `combine(sem_ncg, ., lambda)` equal
// `final_score`. Undefined at lambda == 1.
inline std::optional<double> implied_redundancy(double sem_ncg, double final_score, double lambda) {
    if (lambda >= 1.0) return std::nullopt;
    return 1.0 - (final_score - lambda * sem_ncg) / (1.0 - lambda);
}

// Compares a published combined score against the formula. Returns a note
// when they disagree by more than `tolerance`.
inline std::optional<std::string> check_reported_score(double sem_ncg, double score_red,
                                                       double lambda, double reported,
                                                       double tolerance = 5e-4) {
    double computed = combine(sem_ncg, score_red, lambda);
    if (std::abs(computed - reported) <= tolerance) return std::nullopt;
    std::string note = "reported score " + format_double(reported) + " differs from computed " +
                       format_double(computed) + " (sem_ncg=" + format_double(sem_ncg) +
                       ", score_red=" + format_double(score_red) + ", lambda=" +
                       format_double(lambda) + ")";
    if (auto implied = implied_redundancy(sem_ncg, reported, lambda))
        note += "; the reported value implies score_red=" + format_double(*implied);
    return note;
}

struct ScoreConfig {
    std::size_t k = 3;
    double lambda = 0.5;
    Penalty penalty = Penalty::rouge1;
    GainScheme gain_scheme = GainScheme::normalized_relevance;
    RougeVariant rouge_variant = RougeVariant::f1;
    Ensemble ensemble = Ensemble::sim;
    std::string embedding_name;
};

// Lambda-independent pieces of a score; lambda is applied afterwards so a
// sweep can reuse them.
struct ScoreComponents {
    double sem_ncg = 0.0;
    std::optional<double> score_red;  // empty for Penalty::none
};

// With Penalty::none the score is Sem-nCG alone, recorded as lambda = 1 and
// score_red = 0 so the MetricScore invariant holds.
inline MetricScore assemble(const ScoreComponents& c, const ScoreConfig& cfg,
                            std::optional<double> lambda_override = std::nullopt) {
    double lambda = lambda_override.value_or(cfg.lambda);
    check_unit(lambda, "lambda");
    if (cfg.penalty == Penalty::none || !c.score_red)
        return MetricScore(c.sem_ncg, 0.0, c.sem_ncg, cfg.k, 1.0, Penalty::none, cfg.embedding_name,
                           cfg.gain_scheme);
    double final_score = combine(c.sem_ncg, *c.score_red, lambda);
    return MetricScore(c.sem_ncg, *c.score_red, final_score, cfg.k, lambda, cfg.penalty,
                       cfg.embedding_name, cfg.gain_scheme);
}

struct ScoreOutcome {
    std::optional<MetricScore> score;
    std::optional<ScoreComponents> components;
    std::string skip_reason;  // set when score is empty

    explicit operator bool() const { return score.has_value(); }
};

// Ground truth for one or more references. A single reference takes the
// plain relevance path; several go through the configured ensemble.
inline GroundTruthRanking ground_truth_for(const EmbeddedSentences& doc,
                                           std::span<const EmbeddedSentences> refs,
                                           const ScoreConfig& cfg) {
    if (refs.empty()) throw invalid_input("at least one reference is required");
    if (refs.size() == 1) return build_ground_truth(compute_relevance(doc, refs[0]), cfg.gain_scheme);
    if (cfg.ensemble == Ensemble::sim)
        return build_ground_truth(ensemble_sim_relevance(doc, refs), cfg.gain_scheme);
    return ensemble_rel_ranking(doc, refs, cfg.gain_scheme);
}

inline ScoreComponents score_components(const GroundTruthRanking& gt, const SentenceSet& doc,
                                        const SentenceSet& model, const ScoreConfig& cfg,
                                        const RedundancyInputs& red_inputs) {
    ScoreComponents c;
    c.sem_ncg = sem_ncg_at_k(gt, align_model_summary(model, doc), cfg.k);
    if (cfg.penalty != Penalty::none) {
        RedundancyInputs in = red_inputs;
        in.rouge_variant = cfg.rouge_variant;
        c.score_red = redundancy_score(model, cfg.k, cfg.penalty, in);
    }
    return c;
}

// relevance -> ground truth -> alignment -> Sem-nCG@k -> Score_red ->
// combined score. Summaries or documents shorter than k are skipped with a
// reason instead of raising.
inline ScoreOutcome score_summary(const EmbeddedSentences& doc,
                                  std::span<const EmbeddedSentences> refs,
                                  const SentenceSet& model, const ScoreConfig& cfg,
                                  const RedundancyInputs& red_inputs = {}) {
    if (model.size() < cfg.k) return {std::nullopt, std::nullopt, "summary shorter than k"};
    if (doc.sentences.size() < cfg.k) return {std::nullopt, std::nullopt, "document shorter than k"};
    auto gt = ground_truth_for(doc, refs, cfg);
    auto c = score_components(gt, doc.sentences, model, cfg, red_inputs);
    return {assemble(c, cfg), c, {}};
}

}  // namespace semncg
