#include "edvkit/distribution.hpp"

#include <algorithm>
#include <numeric>

#include "edvkit/error.hpp"

namespace edvkit {

double DiscreteDistribution::at(int value) const {
    if (value < support_min || value > support_max) return 0.0;
    return mass[static_cast<std::size_t>(value - support_min)];
}

double DiscreteDistribution::mean() const {
    double m = 0.0;
    for (int v = support_min; v <= support_max; ++v) m += v * at(v);
    return m;
}

DiscreteDistribution DiscreteDistribution::from_counts(
    int support_min, const std::vector<std::uint64_t>& counts) {
    std::uint64_t total = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
    if (total == 0) throw NumericError("empty distribution: zero total count");
    DiscreteDistribution d;
    d.support_min = support_min;
    d.support_max = support_min + static_cast<int>(counts.size()) - 1;
    d.total_count = total;
    d.mass.resize(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i)
        d.mass[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
    return d;
}

std::vector<int> edge_displacements(const Sentence& s) {
    std::vector<int> out;
    out.reserve(s.tokens.size());
    for (const Token& t : s.tokens)
        if (t.head != 0) out.push_back(t.id - t.head);
    return out;
}

MedValue med(const Sentence& s) {
    if (s.tokens.size() < 2)
        throw NumericError("MED undefined for a sentence with fewer than 2 tokens");
    long long sum = 0;
    std::uint64_t edges = 0;
    for (const Token& t : s.tokens) {
        if (t.head == 0) continue;
        sum += t.id - t.head;
        ++edges;
    }
    return {static_cast<double>(sum) / static_cast<double>(edges), edges};
}

DisplacementDistribution displacement_distribution(const std::vector<Sentence>& sentences,
                                                   SupportWindow window) {
    if (sentences.empty()) throw NumericError("no sentences");
    if (window.lo > window.hi) throw NumericError("invalid support window");
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(window.hi - window.lo + 1), 0);
    DisplacementDistribution result;
    for (const Sentence& s : sentences) {
        for (int d : edge_displacements(s)) {
            ++result.edges_total;
            if (d >= window.lo && d <= window.hi) {
                ++counts[static_cast<std::size_t>(d - window.lo)];
                ++result.edges_in_range;
            }
        }
    }
    if (result.edges_in_range == 0)
        throw NumericError("no edges inside support window [" + std::to_string(window.lo) +
                           "," + std::to_string(window.hi) + "]");
    result.dist = DiscreteDistribution::from_counts(window.lo, counts);
    return result;
}

DiscreteDistribution length_distribution(const std::vector<Sentence>& sentences) {
    if (sentences.empty()) throw NumericError("no sentences");
    std::size_t max_len = 0;
    for (const Sentence& s : sentences) max_len = std::max(max_len, s.tokens.size());
    std::vector<std::uint64_t> counts(max_len, 0);
    for (const Sentence& s : sentences) ++counts[s.tokens.size() - 1];
    return DiscreteDistribution::from_counts(1, counts);
}

}  // namespace edvkit
