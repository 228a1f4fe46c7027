#include <gtest/gtest.h>

#include "semncg/semncg.hpp"
#include "support/builders.hpp"
#include "support/oracles.hpp"
#include "support/news_example.hpp"

using namespace semncg;

using Indices = std::vector<std::size_t>;

namespace {

ModelAlignment picks(const Indices& docs) {
    ModelAlignment a{"m", {}};
    for (std::size_t i = 0; i < docs.size(); ++i) a.matches.push_back({i, docs[i], 1.0, MatchMethod::exact});
    return a;
}

GroundTruthRanking gt_from(const std::vector<double>& rel) { return build_ground_truth({"d", rel}); }

}  // namespace

TEST(Relevance, SingleMatchingSentence) {
    auto doc = build::doc("d", build::numbered("doc", 4));
    auto ref = build::ref("r", "d", {"Ref."});
    auto de = build::embeddings(doc, build::basis(4, 4));
    auto re = build::embeddings(ref, {{1, 0, 0, 0}});
    auto rel = compute_relevance(doc, ref, de, re);
    EXPECT_EQ(rel.scores, (std::vector<double>{1, 0, 0, 0}));
    EXPECT_EQ(rel.doc_id, "d");
}

TEST(Relevance, TwoReferenceSentencesAverage) {
    auto doc = build::doc("d", build::numbered("doc", 3));
    auto ref = build::ref("r", "d", {"A.", "B."});
    auto de = build::embeddings(doc, build::basis(3, 3));
    auto re = build::embeddings(ref, {{1, 0, 0}, {0, 1, 0}});
    auto rel = compute_relevance(doc, ref, de, re);
    EXPECT_EQ(rel.scores[0], 0.5);
    EXPECT_EQ(rel.scores[1], 0.5);
    EXPECT_EQ(rel.scores[2], 0.0);
    EXPECT_EQ(rel.scores.size(), doc.size());
}

TEST(Relevance, Errors) {
    auto doc = build::doc("d", build::numbered("doc", 2));
    auto ref = build::ref("r", "d", {"A."});
    auto de = build::embeddings(doc, build::basis(2, 2));
    auto re3 = build::embeddings(ref, {{1, 0, 0}});
    EXPECT_THROW(compute_relevance(doc, ref, de, re3), invalid_input);
    SentenceSet empty{"e", Role::reference, {}, "d", {}};
    EmbeddingSet ee{"e", 2, {}};
    EXPECT_THROW(compute_relevance(doc, empty, de, ee), invalid_input);
}

TEST(GroundTruth, Examples) {
    auto gt = gt_from({0.2, 0.8});
    EXPECT_EQ(gt.order, (Indices{1, 0}));
    EXPECT_NEAR(gt.gains[0], 0.2, 1e-15);
    EXPECT_NEAR(gt.gains[1], 0.8, 1e-15);

    EXPECT_EQ(gt_from({0.5, 0.5}).order, (Indices{0, 1}));

    auto zero = gt_from({0, 0, 0});
    for (double g : zero.gains) EXPECT_DOUBLE_EQ(g, 1.0 / 3.0);
    EXPECT_EQ(zero.order, (Indices{0, 1, 2}));
}

TEST(GroundTruth, RankPositionGains) {
    auto gt = build_ground_truth({"d", {0.1, 0.7, 0.4}}, GainScheme::rank_position);
    EXPECT_EQ(gt.order, (Indices{1, 2, 0}));
    EXPECT_DOUBLE_EQ(gt.gains[1], 2.0 / 3.0);
    EXPECT_DOUBLE_EQ(gt.gains[2], 1.0 / 3.0);
    EXPECT_DOUBLE_EQ(gt.gains[0], 0.0);
    EXPECT_EQ(build_ground_truth({"d", {0.3}}, GainScheme::rank_position).gains, (std::vector<double>{1.0}));
}

TEST(GroundTruth, GainsSumToOne) {
    oracle::Gen g(31);
    for (int t = 0; t < 500; ++t) {
        auto rel = g.vec(g.index(1, 12), 0.0, 1.0);
        for (auto scheme : {GainScheme::normalized_relevance, GainScheme::rank_position}) {
            auto gt = build_ground_truth({"d", rel}, scheme);
            double sum = 0;
            for (double x : gt.gains) sum += x;
            EXPECT_NEAR(sum, 1.0, 1e-12);
            for (std::size_t p = 1; p < gt.order.size(); ++p)
                EXPECT_GE(gt.gains[gt.order[p - 1]], gt.gains[gt.order[p]]);
        }
    }
}

TEST(GroundTruth, RejectsBadRelevance) {
    EXPECT_THROW(gt_from({}), invalid_input);
    EXPECT_THROW(gt_from({0.5, -0.1}), invalid_input);
    EXPECT_THROW(gt_from({0.5, std::nan("")}), invalid_input);
}

TEST(Alignment, ExactAndFuzzy) {
    auto doc = build::doc("d", {"Alpha beta gamma.", "Delta epsilon.", "Zeta eta.", "Theta iota.", "Kappa lambda mu."});
    auto model = build::summary("m", "d", "M", {"kappa Lambda mu", "a b x y z"});
    auto a = align_model_summary(model, doc);
    ASSERT_EQ(a.matches.size(), 2u);
    EXPECT_EQ(a.matches[0].doc_index, 4u);
    EXPECT_EQ(a.matches[0].score, 1.0);
    EXPECT_EQ(a.matches[0].method, MatchMethod::exact);
    EXPECT_EQ(a.matches[1].method, MatchMethod::fuzzy);
    EXPECT_EQ(a.matches[1].score, 0.0);
    EXPECT_EQ(a.matches[1].doc_index, 0u);
}

TEST(Alignment, FuzzyPicksHigherRouge) {
    auto doc = build::doc("d", {"p q r s t u v w x y z a.", "a b c d e f g h.", "a b c d e f g h i j k l."});
    auto model = build::summary("m", "d", "M", {"a b"});
    EXPECT_NEAR(oracle::rouge1_f({"a", "b"}, tokenize(doc.sentences[1])), 0.4, 1e-12);
    EXPECT_NEAR(oracle::rouge1_f({"a", "b"}, tokenize(doc.sentences[2])), 2 * 2.0 / 14, 1e-12);
    auto a = align_model_summary(model, doc);
    EXPECT_EQ(a.matches[0].doc_index, 1u);
    EXPECT_NEAR(a.matches[0].score, 0.4, 1e-12);
    EXPECT_EQ(a.matches[0].method, MatchMethod::fuzzy);
}

TEST(Alignment, DuplicateDocumentSentencesTieToLowerIndex) {
    auto doc = build::doc("d", {"Same words here.", "Other.", "Same words here."});
    auto a = align_model_summary(build::summary("m", "d", "M", {"same words here"}), doc);
    EXPECT_EQ(a.matches[0].doc_index, 0u);
    EXPECT_EQ(a.matches[0].method, MatchMethod::fuzzy);
}

TEST(Alignment, WorkedExampleMapsDuplicateTwice) {
    auto doc = build::doc("ex", news_example::article);
    auto a = align_model_summary(build::summary("ex/m", "ex", "M", news_example::model_summary), doc);
    ASSERT_EQ(a.matches.size(), 3u);
    EXPECT_EQ(a.matches[0].doc_index, 1u);
    EXPECT_EQ(a.matches[1].doc_index, 0u);
    EXPECT_EQ(a.matches[2].doc_index, 0u);
    for (const auto& m : a.matches) EXPECT_EQ(m.method, MatchMethod::exact);
}

TEST(SemNcg, Examples) {
    GroundTruthRanking gt{"d", {0, 1, 2}, {0.5, 0.3, 0.2}};
    EXPECT_NEAR(sem_ncg_at_k(gt, picks({0, 2}), 2), 0.875, 1e-12);
    EXPECT_EQ(sem_ncg_at_k(gt, picks({1, 0}), 2), 1.0);
    EXPECT_EQ(sem_ncg_at_k(gt, picks({2, 0, 1}), 3), 1.0);
    // A duplicate hit counts once.
    EXPECT_NEAR(sem_ncg_at_k(gt, picks({0, 0}), 2), 0.5 / 0.8, 1e-12);
}

TEST(SemNcg, Errors) {
    GroundTruthRanking gt{"d", {0, 1, 2}, {0.5, 0.3, 0.2}};
    EXPECT_THROW(sem_ncg_at_k(gt, picks({0, 1}), 3), invalid_input);
    EXPECT_THROW(sem_ncg_at_k(gt, picks({0, 1, 2, 0}), 4), invalid_input);
    EXPECT_THROW(sem_ncg_at_k(gt, picks({0}), 0), invalid_input);
    EXPECT_THROW(sem_ncg_at_k(gt, picks({7}), 1), invalid_input);
    try {
        sem_ncg_at_k(gt, picks({0, 1}), 3);
    } catch (const invalid_input& e) {
        EXPECT_NE(std::string(e.what()).find("summary shorter than k"), std::string::npos);
    }
}

TEST(SemNcg, MatchesOracleAndBounds) {
    oracle::Gen g(32);
    for (int t = 0; t < 1000; ++t) {
        std::size_t n = g.index(1, 10), k = g.index(1, n);
        auto rel = g.coin(0.2) ? g.tied(n, 3) : g.vec(n, 0.0, 1.0);
        auto gt = build_ground_truth({"d", rel}, g.coin() ? GainScheme::rank_position : GainScheme::normalized_relevance);
        Indices docs;
        for (std::size_t i = 0, m = g.index(k, k + 3); i < m; ++i) docs.push_back(g.index(0, n - 1));
        double s = sem_ncg_at_k(gt, picks(docs), k);
        EXPECT_GE(s, 0.0);
        EXPECT_LE(s, 1.0);
        EXPECT_NEAR(s, std::min(1.0, oracle::sem_ncg(gt.gains, docs, k)), 1e-12);
    }
}

TEST(SemNcg, PermutationInvariance) {
    oracle::Gen g(33);
    for (int t = 0; t < 300; ++t) {
        std::size_t n = g.index(2, 10), k = g.index(1, n);
        auto gt = gt_from(g.vec(n, 0.0, 1.0));
        Indices docs;
        for (std::size_t i = 0; i < k; ++i) docs.push_back(g.index(0, n - 1));
        double base = sem_ncg_at_k(gt, picks(docs), k);
        g.shuffle(docs);
        EXPECT_EQ(sem_ncg_at_k(gt, picks(docs), k), base);
    }
}

TEST(SemNcg, MonotoneInGain) {
    oracle::Gen g(34);
    for (int t = 0; t < 300; ++t) {
        std::size_t n = g.index(3, 10), k = g.index(1, n - 1);
        auto gt = gt_from(g.vec(n, 0.0, 1.0));
        Indices order(n);
        for (std::size_t i = 0; i < n; ++i) order[i] = i;
        g.shuffle(order);
        Indices docs(order.begin(), order.begin() + static_cast<long>(k));
        double before = sem_ncg_at_k(gt, picks(docs), k);
        std::size_t slot = g.index(0, k - 1);
        for (std::size_t c = k; c < n; ++c)
            if (gt.gains[order[c]] > gt.gains[docs[slot]]) {
                auto better = docs;
                better[slot] = order[c];
                EXPECT_GE(sem_ncg_at_k(gt, picks(better), k), before);
            }
    }
}

TEST(SemNcg, ScaleInvariance) {
    oracle::Gen g(35);
    for (int t = 0; t < 300; ++t) {
        std::size_t n = g.index(2, 10), k = g.index(1, n);
        auto rel = g.vec(n, 0.01, 1.0);
        double c = g.range(0.01, 100.0);
        auto scaled = rel;
        for (auto& x : scaled) x *= c;
        auto a = gt_from(rel), b = gt_from(scaled);
        EXPECT_EQ(a.order, b.order);
        for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(a.gains[i], b.gains[i], 1e-12);
        Indices docs;
        for (std::size_t i = 0; i < k; ++i) docs.push_back(g.index(0, n - 1));
        EXPECT_NEAR(sem_ncg_at_k(a, picks(docs), k), sem_ncg_at_k(b, picks(docs), k), 1e-12);
    }
}
