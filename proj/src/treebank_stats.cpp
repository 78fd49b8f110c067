#include "edvkit/treebank_stats.hpp"

#include <algorithm>

#include "edvkit/divergence.hpp"
#include "edvkit/error.hpp"

namespace edvkit {

CrossingCounts count_crossings(const Sentence& s, PairConvention convention) {
    // Non-root edges as (min, max) endpoint pairs.
    std::vector<std::pair<int, int>> edges;
    std::vector<int> degree(s.tokens.size() + 1, 0);
    for (const Token& t : s.tokens) {
        if (t.head == 0) continue;
        edges.emplace_back(std::min(t.id, t.head), std::max(t.id, t.head));
        ++degree[t.id];
        ++degree[t.head];
    }
    CrossingCounts out;
    const std::size_t m = edges.size();
    if (m < 2) return out;

    if (convention == PairConvention::vertex_disjoint) {
        // |Q| = C(m, 2) - sum_v C(deg(v), 2): pairs of edges sharing no vertex.
        out.candidate_pairs = m * (m - 1) / 2;
        for (int d : degree)
            out.candidate_pairs -= static_cast<std::uint64_t>(d) * (d - 1) / 2;
    } else {
        out.candidate_pairs = m * (m - 1) / 2;
    }

    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            auto [a1, a2] = edges[i];
            auto [b1, b2] = edges[j];
            if (a1 == b1 || a1 == b2 || a2 == b1 || a2 == b2) continue;  // share a vertex
            // Crossing: the spans strictly interleave.
            bool cross = (a1 < b1 && b1 < a2 && a2 < b2) || (b1 < a1 && a1 < b2 && b2 < a2);
            if (cross) ++out.crossings;
        }
    }
    return out;
}

double crossings_normalized(const Sentence& s, PairConvention convention) {
    CrossingCounts c = count_crossings(s, convention);
    if (c.candidate_pairs == 0) return 0.0;
    return static_cast<double>(c.crossings) / static_cast<double>(c.candidate_pairs);
}

double treebank_crossings(const std::vector<Sentence>& sentences,
                          PairConvention convention) {
    std::uint64_t crossings = 0, pairs = 0;
    for (const Sentence& s : sentences) {
        CrossingCounts c = count_crossings(s, convention);
        crossings += c.crossings;
        pairs += c.candidate_pairs;
    }
    if (pairs == 0) return 0.0;
    return static_cast<double>(crossings) / static_cast<double>(pairs);
}

namespace {

std::map<int, std::vector<Sentence>> by_length(const std::vector<Sentence>& sentences,
                                               int lo, int hi) {
    std::map<int, std::vector<Sentence>> out;
    for (const Sentence& s : sentences) {
        int len = static_cast<int>(s.tokens.size());
        if (len >= lo && len <= hi) out[len].push_back(s);
    }
    return out;
}

}  // namespace

BinSeries binned_edv(const std::vector<Sentence>& train,
                     const std::vector<Sentence>& test, int bin_lo, int bin_hi,
                     SupportWindow window) {
    BinSeries series;
    series.bin_lo = bin_lo;
    series.bin_hi = bin_hi;
    auto train_bins = by_length(train, bin_lo, bin_hi);
    auto test_bins = by_length(test, bin_lo, bin_hi);
    for (const auto& [len, train_sents] : train_bins) {
        auto it = test_bins.find(len);
        if (it == test_bins.end()) continue;
        series.values[len] = edv(train_sents, it->second, window);
        series.counts[len] = std::min(train_sents.size(), it->second.size());
    }
    return series;
}

BinSeries binned_edv(const Treebank& tb, int bin_lo, int bin_hi, SupportWindow window) {
    return binned_edv(tb.split("train"), tb.split("test"), bin_lo, bin_hi, window);
}

BinSeries binned_las(const std::vector<Sentence>& gold,
                     const std::vector<Sentence>& predicted, int bin_lo, int bin_hi,
                     LabelGranularity granularity) {
    if (gold.size() != predicted.size())
        throw DataError("binned_las: sentence count mismatch");
    BinSeries series;
    series.bin_lo = bin_lo;
    series.bin_hi = bin_hi;
    std::map<int, std::pair<std::vector<Sentence>, std::vector<Sentence>>> bins;
    for (std::size_t i = 0; i < gold.size(); ++i) {
        int len = static_cast<int>(gold[i].tokens.size());
        if (len < bin_lo || len > bin_hi) continue;
        bins[len].first.push_back(gold[i]);
        bins[len].second.push_back(predicted[i]);
    }
    for (const auto& [len, pair] : bins) {
        series.values[len] = evaluate_las(pair.first, pair.second, granularity);
        series.counts[len] = pair.first.size();
    }
    return series;
}

}  // namespace edvkit
