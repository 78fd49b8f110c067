#include "edvkit/treebank_stats.hpp"

#include <map>
#include <random>

#include "doctest.h"
#include "edvkit/divergence.hpp"
#include "testutil.hpp"

using namespace edvkit;

namespace {

// Independent oracle written from the definition: candidate pairs share no
// vertex; a pair crosses when exactly one endpoint of one edge lies strictly
// between the endpoints of the other.
CrossingCounts oracle_crossings(const Sentence& s) {
    std::vector<std::pair<int, int>> edges;
    for (const Token& t : s.tokens)
        if (t.head != 0) edges.emplace_back(t.id, t.head);
    CrossingCounts out;
    for (std::size_t i = 0; i < edges.size(); ++i) {
        for (std::size_t j = i + 1; j < edges.size(); ++j) {
            auto [a, ha] = edges[i];
            auto [b, hb] = edges[j];
            if (a == b || a == hb || ha == b || ha == hb) continue;
            ++out.candidate_pairs;
            int lo1 = std::min(a, ha), hi1 = std::max(a, ha);
            auto strictly_inside = [](int v, int lo, int hi) { return lo < v && v < hi; };
            int inside = strictly_inside(b, lo1, hi1) + strictly_inside(hb, lo1, hi1);
            if (inside == 1) ++out.crossings;
        }
    }
    return out;
}

}  // namespace

TEST_CASE("projective chain has zero crossings") {
    CHECK(crossings_normalized(testutil::chain_sentence(8)) == 0.0);
    CHECK(crossings_normalized(testutil::reverse_chain_sentence(6)) == 0.0);
}

TEST_CASE("4-token crossing fixture") {
    // Edges 1->3, 2->4, 4->3 with token 3 as root: one crossing pair.
    auto s = testutil::make_sentence({3, 4, 0, 3});
    auto c = count_crossings(s);
    CHECK(c.crossings == 1);
    CHECK(c.candidate_pairs == 1);
    CHECK(crossings_normalized(s) == 1.0);
    auto o = oracle_crossings(s);
    CHECK(o.crossings == c.crossings);
    CHECK(o.candidate_pairs == c.candidate_pairs);
}

TEST_CASE("example tree has no crossings") {
    auto s = testutil::example_tree();
    auto c = count_crossings(s);
    auto o = oracle_crossings(s);
    CHECK(c.crossings == 0);
    CHECK(o.crossings == 0);
    CHECK(c.candidate_pairs == o.candidate_pairs);
}

TEST_CASE("crossings match the oracle on random trees") {
    std::mt19937_64 rng(157);
    for (int trial = 0; trial < 200; ++trial) {
        auto s = testutil::random_sentence(rng, 3 + static_cast<int>(rng() % 12));
        auto c = count_crossings(s);
        auto o = oracle_crossings(s);
        CHECK(c.crossings == o.crossings);
        CHECK(c.candidate_pairs == o.candidate_pairs);
        CHECK(c.crossings <= c.candidate_pairs);
        double norm = crossings_normalized(s);
        CHECK(norm >= 0.0);
        CHECK(norm <= 1.0);
    }
}

TEST_CASE("crossings ignore deprel labels") {
    auto s = testutil::make_sentence({3, 4, 0, 3});
    auto relabeled = s;
    for (Token& t : relabeled.tokens) t.deprel = "weird:" + t.deprel;
    CHECK(crossings_normalized(s) == crossings_normalized(relabeled));
}

TEST_CASE("n < 3 or saturated degrees give |Q| = 0 and value 0") {
    CHECK(crossings_normalized(testutil::make_sentence({0, 1})) == 0.0);
    CHECK(crossings_normalized(testutil::make_sentence({0})) == 0.0);
    // Star tree: every edge shares the hub, |Q| = 0.
    CHECK(crossings_normalized(testutil::make_sentence({0, 1, 1, 1, 1})) == 0.0);
}

TEST_CASE("all-pairs convention counts every pair") {
    auto s = testutil::make_sentence({3, 4, 0, 3});
    auto c = count_crossings(s, PairConvention::all_pairs);
    CHECK(c.candidate_pairs == 3);  // C(3,2)
    CHECK(c.crossings == 1);
}

TEST_CASE("treebank crossings is the edge-pair-weighted mean") {
    auto crossing = testutil::make_sentence({3, 4, 0, 3});     // C=1, Q=1
    auto flat = testutil::chain_sentence(5);                   // C=0, Q>0
    auto q_flat = count_crossings(flat).candidate_pairs;
    double expected = 1.0 / static_cast<double>(1 + q_flat);
    CHECK(treebank_crossings({crossing, flat}) == doctest::Approx(expected));
    CHECK(treebank_crossings({flat}) == 0.0);
    CHECK(treebank_crossings({crossing}) == crossings_normalized(crossing));
}

TEST_CASE("binned edv is zero when train equals test") {
    std::mt19937_64 rng(163);
    auto corpus = testutil::random_corpus(rng, 40, 3, 12);
    auto series = binned_edv(corpus, corpus);
    CHECK(!series.values.empty());
    for (const auto& [len, v] : series.values) {
        CHECK(v == 0.0);
        CHECK(series.counts.at(len) >= 1);
    }
}

TEST_CASE("single-length corpus populates one bin") {
    std::mt19937_64 rng(167);
    std::vector<Sentence> train, test;
    for (int i = 0; i < 6; ++i) train.push_back(testutil::random_sentence(rng, 7));
    for (int i = 0; i < 4; ++i) test.push_back(testutil::random_sentence(rng, 7));
    auto series = binned_edv(train, test);
    CHECK(series.values.size() == 1);
    CHECK(series.values.count(7) == 1);
}

TEST_CASE("bins with an empty side are missing") {
    std::mt19937_64 rng(173);
    std::vector<Sentence> train{testutil::random_sentence(rng, 5),
                                testutil::random_sentence(rng, 9)};
    std::vector<Sentence> test{testutil::random_sentence(rng, 5)};
    auto series = binned_edv(train, test);
    CHECK(series.values.count(5) == 1);
    CHECK(series.values.count(9) == 0);
}

TEST_CASE("binned edv matches per-bin recomputation on the fixture") {
    auto treebanks = discover_treebanks(testutil::fixtures_dir() / "mini");
    Treebank alpha = treebanks[0];
    load_all_splits(alpha);
    auto series = binned_edv(alpha);
    std::map<int, std::vector<Sentence>> train_bins, test_bins;
    for (const Sentence& s : alpha.split("train"))
        train_bins[static_cast<int>(s.tokens.size())].push_back(s);
    for (const Sentence& s : alpha.split("test"))
        test_bins[static_cast<int>(s.tokens.size())].push_back(s);
    for (const auto& [len, v] : series.values) {
        auto a = displacement_distribution(train_bins.at(len)).dist;
        auto b = displacement_distribution(test_bins.at(len)).dist;
        CHECK(v == doctest::Approx(transport_oracle(a, b).cost).epsilon(1e-10));
    }
    // Lengths populated on both sides within [3,30] are exactly the series keys.
    for (const auto& [len, sents] : train_bins) {
        if (len < 3 || len > 30) continue;
        CHECK(series.values.count(len) == (test_bins.count(len) ? 1u : 0u));
    }
}

TEST_CASE("binned las: perfect predictions and the partition property") {
    std::mt19937_64 rng(179);
    auto gold = testutil::random_corpus(rng, 50, 2, 34);
    auto series = binned_las(gold, gold);
    for (const auto& [len, v] : series.values) CHECK(v == 1.0);

    // Union of binned sentences plus out-of-range lengths equals the test set.
    std::size_t binned_count = 0;
    for (const auto& [len, c] : series.counts) binned_count += c;
    std::size_t out_of_range = 0;
    for (const Sentence& s : gold) {
        int len = static_cast<int>(s.tokens.size());
        if (len < 3 || len > 30) ++out_of_range;
    }
    CHECK(binned_count + out_of_range == gold.size());
}

TEST_CASE("binned las hand count") {
    auto g5 = testutil::make_sentence({2, 0, 2, 3, 4});
    auto g3 = testutil::make_sentence({2, 0, 2});
    auto p5 = g5;
    p5.tokens[0].head = 3;  // one of five wrong
    auto p3 = g3;           // perfect
    auto series = binned_las({g5, g3}, {p5, p3});
    CHECK(series.values.at(5) == doctest::Approx(0.8));
    CHECK(series.values.at(3) == doctest::Approx(1.0));
    CHECK(series.counts.at(5) == 1);
}
