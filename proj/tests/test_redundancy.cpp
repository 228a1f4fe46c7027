#include <gtest/gtest.h>

#include <algorithm>

#include "semncg/semncg.hpp"
#include "support/builders.hpp"
#include "support/oracles.hpp"
#include "support/news_example.hpp"

using namespace semncg;

namespace {

SimilarityMatrix matrix(const oracle::Matrix& v, SimilarityKind kind = SimilarityKind::bertscore) {
    SimilarityMatrix m;
    m.kind = kind;
    for (std::size_t i = 0; i < v.size(); ++i) {
        m.row_ids.push_back(i);
        m.col_ids.push_back(i);
    }
    m.values = v;
    return m;
}

double off_diagonal(const oracle::Matrix& m, std::size_t k, bool want_max) {
    double best = want_max ? -1.0 : 2.0;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            if (i != j) best = want_max ? std::max(best, m[i][j]) : std::min(best, m[i][j]);
    return best;
}

}  // namespace

TEST(Redundancy, HandExample) {
    oracle::Matrix v{{1, .2, .6}, {.2, 1, .3}, {.6, .3, 1}};
    EXPECT_NEAR(redundancy_score(matrix(v), 3), 0.5, 1e-12);
    auto s = build::summary("s", "d", "M", {"A.", "B.", "C."});
    auto m = matrix(v);
    RedundancyInputs in;
    in.external = &m;
    EXPECT_NEAR(redundancy_score(s, 3, Penalty::bertscore, in), 0.5, 1e-12);
}

TEST(Redundancy, IdenticalSentencesScoreOne) {
    auto s = build::summary("s", "d", "M", {"Same text here.", "Same text here.", "Same text here."});
    EXPECT_EQ(redundancy_score(s, 3, Penalty::rouge1), 1.0);
    auto e = build::embeddings(s, {{0.3, 0.4}, {0.3, 0.4}, {0.3, 0.4}});
    RedundancyInputs in;
    in.embeddings = &e;
    EXPECT_NEAR(redundancy_score(s, 3, Penalty::cosine, in), 1.0, 1e-15);
    auto m = matrix({{1, 1, 1}, {1, 1, 1}, {1, 1, 1}}, SimilarityKind::moverscore);
    in.external = &m;
    EXPECT_EQ(redundancy_score(s, 3, Penalty::moverscore, in), 1.0);
}

TEST(Redundancy, OrthogonalEmbeddingsScoreZero) {
    auto s = build::summary("s", "d", "M", {"A.", "B.", "C."});
    auto e = build::embeddings(s, build::basis(3, 3));
    RedundancyInputs in;
    in.embeddings = &e;
    EXPECT_EQ(redundancy_score(s, 3, Penalty::cosine, in), 0.0);
}

TEST(Redundancy, WorkedExampleWithRouge) {
    auto s = build::summary("ex", "exdoc", "M", news_example::model_summary);
    auto t = [](std::size_t i) { return tokenize(news_example::model_summary[i]); };
    double f01 = oracle::rouge1_f(t(0), t(1));
    // Sentences 1 and 2 are identical, so each of them scores 1; sentence 0
    // scores its overlap with the duplicate.
    EXPECT_NEAR(redundancy_score(s, 3, Penalty::rouge1), (f01 + 1.0 + 1.0) / 3.0, 1e-12);
}

TEST(Redundancy, MatchesDoubleLoopOracle) {
    oracle::Gen g(41);
    for (int t = 0; t < 1000; ++t) {
        std::size_t k = g.index(2, 8);
        auto v = g.symmetric(k, g.coin(0.3));
        EXPECT_NEAR(redundancy_score(matrix(v), k), oracle::redundancy(v, k), 1e-12);
    }
}

TEST(Redundancy, UsesOnlyFirstKSentences) {
    oracle::Gen g(42);
    for (int t = 0; t < 200; ++t) {
        std::size_t n = g.index(3, 8), k = g.index(2, n - 1);
        auto v = g.symmetric(n);
        EXPECT_NEAR(redundancy_score(matrix(v), k), oracle::redundancy(v, k), 1e-12);
    }
}

TEST(Redundancy, PermutationInvariant) {
    oracle::Gen g(43);
    for (int t = 0; t < 300; ++t) {
        std::size_t k = g.index(2, 8);
        auto v = g.symmetric(k);
        std::vector<std::size_t> p(k);
        for (std::size_t i = 0; i < k; ++i) p[i] = i;
        g.shuffle(p);
        oracle::Matrix w(k, std::vector<double>(k));
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) w[i][j] = v[p[i]][p[j]];
        EXPECT_NEAR(redundancy_score(matrix(w), k), redundancy_score(matrix(v), k), 1e-12);
    }
}

TEST(Redundancy, AddingDuplicateNeverDecreases) {
    oracle::Gen g(44);
    for (int t = 0; t < 300; ++t) {
        std::size_t k = g.index(2, 7);
        auto v = g.symmetric(k);
        std::size_t dup = g.index(0, k - 1);
        oracle::Matrix w(k + 1, std::vector<double>(k + 1));
        auto src = [&](std::size_t i) { return i == k ? dup : i; };
        for (std::size_t i = 0; i <= k; ++i)
            for (std::size_t j = 0; j <= k; ++j) w[i][j] = i == j ? 1.0 : (src(i) == src(j) ? 1.0 : v[src(i)][src(j)]);
        EXPECT_GE(redundancy_score(matrix(w), k + 1), redundancy_score(matrix(v), k) - 1e-15);
    }
}

TEST(Redundancy, BoundedByOffDiagonalExtremes) {
    oracle::Gen g(45);
    for (int t = 0; t < 500; ++t) {
        std::size_t k = g.index(2, 8);
        auto v = g.symmetric(k);
        double r = redundancy_score(matrix(v), k);
        EXPECT_GE(r, off_diagonal(v, k, false) - 1e-15);
        EXPECT_LE(r, off_diagonal(v, k, true) + 1e-15);
    }
}

TEST(Redundancy, AsymmetricMatrixReadAsRowJColumnI) {
    // Sim(x_j, x_i) = values[j][i]: column i's off-diagonal max.
    oracle::Matrix v{{1, 0.9, 0.1}, {0.0, 1, 0.2}, {0.3, 0.4, 1}};
    EXPECT_NEAR(redundancy_score(matrix(v), 3), (0.3 + 0.9 + 0.2) / 3.0, 1e-12);
}

TEST(Redundancy, Errors) {
    auto s = build::summary("s", "d", "M", {"A b.", "C d.", "E f."});
    EXPECT_THROW(redundancy_score(s, 1, Penalty::rouge1), invalid_input);
    EXPECT_THROW(redundancy_score(s, 4, Penalty::rouge1), invalid_input);
    EXPECT_THROW(redundancy_score(s, 3, Penalty::cosine), invalid_input);
    EXPECT_THROW(redundancy_score(s, 3, Penalty::bertscore), invalid_input);
    EXPECT_THROW(redundancy_score(s, 3, Penalty::none), invalid_input);

    auto small = matrix({{1, 0.5}, {0.5, 1}});
    RedundancyInputs in;
    in.external = &small;
    EXPECT_THROW(redundancy_score(s, 3, Penalty::bertscore, in), invalid_input);
    auto wrong_kind = matrix({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, SimilarityKind::moverscore);
    in.external = &wrong_kind;
    EXPECT_THROW(redundancy_score(s, 3, Penalty::bertscore, in), invalid_input);
    auto generic = matrix({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, SimilarityKind::external);
    in.external = &generic;
    EXPECT_EQ(redundancy_score(s, 3, Penalty::bertscore, in), 0.0);
}
