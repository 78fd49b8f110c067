#pragma once

#include <map>
#include <vector>

#include "edvkit/conllu.hpp"
#include "edvkit/distribution.hpp"

namespace edvkit {

// Per-sentence-length series; lengths with an empty side are simply absent
// from the maps.
struct BinSeries {
    int bin_lo = 3;
    int bin_hi = 30;
    std::map<int, double> values;
    std::map<int, std::uint64_t> counts;
};

// Which edge pairs count as potential crossings.
enum class PairConvention {
    vertex_disjoint,  // default: pairs of edges sharing no vertex
    all_pairs,
};

struct CrossingCounts {
    std::uint64_t crossings = 0;
    std::uint64_t candidate_pairs = 0;
};

CrossingCounts count_crossings(const Sentence& s,
                               PairConvention convention = PairConvention::vertex_disjoint);

// C / |Q| for one sentence; 0 when |Q| = 0.
double crossings_normalized(const Sentence& s,
                            PairConvention convention = PairConvention::vertex_disjoint);

// Edge-pair-weighted mean over a corpus: sum(C) / sum(|Q|).
double treebank_crossings(const std::vector<Sentence>& sentences,
                          PairConvention convention = PairConvention::vertex_disjoint);

// EDV between equal-length train/test subsamples for each exact length.
BinSeries binned_edv(const std::vector<Sentence>& train,
                     const std::vector<Sentence>& test, int bin_lo = 3, int bin_hi = 30,
                     SupportWindow window = {});
BinSeries binned_edv(const Treebank& tb, int bin_lo = 3, int bin_hi = 30,
                     SupportWindow window = {});

// LAS restricted to test sentences of each exact length.
BinSeries binned_las(const std::vector<Sentence>& gold,
                     const std::vector<Sentence>& predicted, int bin_lo = 3,
                     int bin_hi = 30,
                     LabelGranularity granularity = LabelGranularity::universal);

}  // namespace edvkit
