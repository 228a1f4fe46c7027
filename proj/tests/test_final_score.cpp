#include <gtest/gtest.h>

#include "semncg/semncg.hpp"
#include "support/builders.hpp"
#include "support/oracles.hpp"

using namespace semncg;

TEST(Combine, Examples) {
    EXPECT_EQ(combine(0.37, 0.9, 1.0), 0.37);
    EXPECT_EQ(combine(0.37, 0.25, 0.0), 0.75);
    EXPECT_NEAR(combine(0.67, 0.40, 0.5), 0.635, 1e-12);
    EXPECT_NEAR(combine(0.733, 0.40, 0.5), 0.6665, 1e-12);
    EXPECT_NEAR(combine(0.8, 0.40, 0.5), 0.70, 1e-12);
}

TEST(Combine, RejectsOutOfRange) {
    EXPECT_THROW(combine(1.1, 0.2, 0.5), invalid_input);
    EXPECT_THROW(combine(0.5, -0.2, 0.5), invalid_input);
    EXPECT_THROW(combine(0.5, 0.2, 1.2), invalid_input);
    EXPECT_THROW(combine(0.5, 0.2, std::nan("")), invalid_input);
}

TEST(Combine, IdentitiesAndAffineSlope) {
    oracle::Gen g(51);
    for (int t = 0; t < 1000; ++t) {
        double sem = g.unit(), red = g.unit(), lambda = g.unit();
        EXPECT_EQ(combine(sem, red, 1.0), sem);
        EXPECT_EQ(combine(sem, red, 0.0), 1.0 - red);
        double f = combine(sem, red, lambda);
        EXPECT_GE(f, 0.0);
        EXPECT_LE(f, 1.0);
        double h = 0.25;
        double lo = std::min(lambda, 1.0 - h);
        double slope = (combine(sem, red, lo + h) - combine(sem, red, lo)) / h;
        EXPECT_NEAR(slope, sem - (1.0 - red), 1e-12);
    }
}

TEST(Combine, MonotoneInComponents) {
    oracle::Gen g(52);
    for (int t = 0; t < 1000; ++t) {
        double a = g.unit(), b = g.unit(), red = g.unit(), lambda = g.range(0.01, 0.99);
        if (a > b) std::swap(a, b);
        EXPECT_LE(combine(a, red, lambda), combine(b, red, lambda));
        EXPECT_GE(combine(red, a, lambda), combine(red, b, lambda));
    }
}

TEST(ReportedScore, PublishedRevisedValuesAreFlagged) {
    // Sem-nCG and published combined values for the three references.
    struct Case {
        double sem, published, computed;
    };
    for (auto c : {Case{0.67, 0.532, 0.635}, Case{0.733, 0.565, 0.6665}, Case{0.8, 0.599, 0.70}}) {
        EXPECT_NEAR(combine(c.sem, 0.40, 0.5), c.computed, 1e-12);
        auto note = check_reported_score(c.sem, 0.40, 0.5, c.published);
        ASSERT_TRUE(note.has_value());
        EXPECT_NE(note->find("implies score_red="), std::string::npos);
        auto implied = implied_redundancy(c.sem, c.published, 0.5);
        ASSERT_TRUE(implied.has_value());
        EXPECT_NEAR(*implied, 0.60, 0.01);
    }
    EXPECT_FALSE(check_reported_score(0.67, 0.40, 0.5, 0.635).has_value());
    EXPECT_FALSE(implied_redundancy(0.5, 0.5, 1.0).has_value());
}

TEST(Assemble, PenaltyNoneIsSemNcgAlone) {
    ScoreConfig cfg;
    cfg.penalty = Penalty::none;
    cfg.embedding_name = "e";
    auto s = assemble({0.42, std::nullopt}, cfg);
    EXPECT_EQ(s.final_score(), 0.42);
    EXPECT_EQ(s.lambda(), 1.0);
    EXPECT_EQ(s.score_red(), 0.0);
    EXPECT_EQ(s.red_backend(), Penalty::none);

    cfg.penalty = Penalty::rouge1;
    auto r = assemble({0.42, 0.3}, cfg, 0.25);
    EXPECT_EQ(r.lambda(), 0.25);
    EXPECT_DOUBLE_EQ(r.final_score(), 0.25 * 0.42 + 0.75 * 0.7);
    EXPECT_EQ(r.embedding_name(), "e");
}

namespace {

struct Toy {
    SentenceSet doc, ref;
    EmbeddingSet doc_e, ref_e;
};

// Document sentences are distinct basis vectors; the reference points at
// sentences 0, 1 and 2.
Toy toy() {
    Toy t;
    t.doc = build::doc("d", {"Alpha one.", "Beta two.", "Gamma three.", "Delta four.", "Epsilon five."});
    t.ref = build::ref("d/r", "d", {"Ref a.", "Ref b."});
    t.doc_e = build::embeddings(t.doc, build::basis(5, 5));
    t.ref_e = build::embeddings(t.ref, {{0.9, 0.5, 0.3, 0, 0}, {0.8, 0.6, 0.2, 0.05, 0}});
    return t;
}

}  // namespace

TEST(ScoreSummary, IdealAndNonRedundantIsOne) {
    auto t = toy();
    std::vector<EmbeddedSentences> refs{{t.ref, t.ref_e}};
    auto model = build::summary("d/M", "d", "M", {t.doc.sentences[2], t.doc.sentences[0], t.doc.sentences[1]});
    ScoreConfig cfg;
    auto out = score_summary({t.doc, t.doc_e}, refs, model, cfg);
    ASSERT_TRUE(out);
    EXPECT_EQ(out.score->sem_ncg(), 1.0);
    EXPECT_EQ(out.score->score_red(), 0.0);
    EXPECT_EQ(out.score->final_score(), 1.0);
}

TEST(ScoreSummary, ThreeCopiesOfTopSentence) {
    auto t = toy();
    std::vector<EmbeddedSentences> refs{{t.ref, t.ref_e}};
    auto top = t.doc.sentences[0];
    auto model = build::summary("d/M", "d", "M", {top, top, top});
    ScoreConfig cfg;
    cfg.lambda = 0.3;
    auto out = score_summary({t.doc, t.doc_e}, refs, model, cfg);
    ASSERT_TRUE(out);
    auto gt = build_ground_truth(compute_relevance(t.doc, t.ref, t.doc_e, t.ref_e));
    EXPECT_EQ(gt.order[0], 0u);
    double icg = gt.gains[gt.order[0]] + gt.gains[gt.order[1]] + gt.gains[gt.order[2]];
    EXPECT_NEAR(out.score->sem_ncg(), gt.gains[0] / icg, 1e-12);
    EXPECT_EQ(out.score->score_red(), 1.0);
    EXPECT_NEAR(out.score->final_score(), 0.3 * out.score->sem_ncg(), 1e-12);
}

TEST(ScoreSummary, ShortInputsAreSkipped) {
    auto t = toy();
    std::vector<EmbeddedSentences> refs{{t.ref, t.ref_e}};
    auto model = build::summary("d/M", "d", "M", {t.doc.sentences[0], t.doc.sentences[1]});
    auto out = score_summary({t.doc, t.doc_e}, refs, model, ScoreConfig{});
    EXPECT_FALSE(out);
    EXPECT_EQ(out.skip_reason, "summary shorter than k");

    auto tiny = build::doc("d", {"Alpha one.", "Beta two."});
    auto tiny_e = build::embeddings(tiny, build::basis(2, 5));
    auto three = build::summary("d/M", "d", "M", {"Alpha one.", "Beta two.", "Alpha one."});
    auto out2 = score_summary({tiny, tiny_e}, refs, three, ScoreConfig{});
    EXPECT_EQ(out2.skip_reason, "document shorter than k");
}

TEST(ScoreSummary, MatchesCompositionalOracle) {
    oracle::Gen g(53);
    for (int t = 0; t < 300; ++t) {
        std::size_t n = g.index(3, 9), dim = g.index(2, 6), k = g.index(2, 3);
        std::vector<std::string> sents;
        for (std::size_t i = 0; i < n; ++i) sents.push_back("s" + std::to_string(i) + " " + g.sentence(g.index(2, 6), 12));
        auto doc = build::doc("d", sents);
        std::vector<std::vector<double>> dv;
        for (std::size_t i = 0; i < n; ++i) dv.push_back(g.vec(dim));
        auto doc_e = build::embeddings(doc, dv);
        std::size_t m = g.index(1, 3);
        auto ref = build::ref("d/r", "d", build::numbered("ref", m));
        std::vector<std::vector<double>> rv;
        for (std::size_t i = 0; i < m; ++i) rv.push_back(g.vec(dim));
        auto ref_e = build::embeddings(ref, rv);

        std::vector<std::size_t> pick;
        std::vector<std::string> model_sents;
        for (std::size_t i = 0; i < k + g.index(0, 2); ++i) {
            pick.push_back(g.index(0, n - 1));
            model_sents.push_back(sents[pick.back()]);
        }
        auto model = build::summary("d/M", "d", "M", model_sents);
        ScoreConfig cfg;
        cfg.k = k;
        cfg.lambda = g.unit();
        std::vector<EmbeddedSentences> refs{{ref, ref_e}};
        auto out = score_summary({doc, doc_e}, refs, model, cfg);
        ASSERT_TRUE(out);

        std::vector<double> rel(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (auto& r : rv) rel[i] += oracle::cosine(dv[i], r);
            rel[i] /= static_cast<double>(m);
        }
        double total = 0;
        for (double r : rel) total += r;
        std::vector<double> gains(n);
        for (std::size_t i = 0; i < n; ++i) gains[i] = total > 0 ? rel[i] / total : 1.0 / n;
        double sem = std::min(1.0, oracle::sem_ncg(gains, pick, k));

        oracle::Matrix sim(k, std::vector<double>(k, 1.0));
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j)
                sim[j][i] = oracle::rouge1_f(tokenize(model_sents[j]), tokenize(model_sents[i]));
        double red = oracle::redundancy(sim, k);

        EXPECT_NEAR(out.score->sem_ncg(), sem, 1e-12);
        EXPECT_NEAR(out.score->score_red(), red, 1e-12);
        EXPECT_NEAR(out.score->final_score(), cfg.lambda * sem + (1 - cfg.lambda) * (1 - red), 1e-12);
    }
}
