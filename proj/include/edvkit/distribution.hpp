#pragma once

#include <cstdint>
#include <vector>

#include "edvkit/conllu.hpp"

namespace edvkit {

// Probability mass over a contiguous integer support. mass[i] belongs to
// support value support_min + i; entries sum to 1 when total_count > 0.
struct DiscreteDistribution {
    int support_min = 0;
    int support_max = 0;
    std::vector<double> mass;
    std::uint64_t total_count = 0;

    int width() const { return support_max - support_min + 1; }
    double at(int value) const;  // 0 outside support
    double mean() const;

    // Builds from raw per-value counts; throws NumericError when all zero.
    static DiscreteDistribution from_counts(int support_min,
                                            const std::vector<std::uint64_t>& counts);
};

struct MedValue {
    double value = 0.0;
    std::uint64_t edge_count = 0;
};

struct SupportWindow {
    int lo = -30;
    int hi = 30;
};

// Signed offset of each non-root token from its head: id - head.
std::vector<int> edge_displacements(const Sentence& s);

// Mean edge displacement of one sentence, root edge excluded.
// Throws NumericError for single-token sentences.
MedValue med(const Sentence& s);

// Displacement distribution with coverage bookkeeping: edges outside the
// window are excluded before normalization, never clamped.
struct DisplacementDistribution {
    DiscreteDistribution dist;
    std::uint64_t edges_total = 0;    // including out-of-window edges
    std::uint64_t edges_in_range = 0;

    double coverage() const {
        return edges_total == 0 ? 0.0
                                : static_cast<double>(edges_in_range) /
                                      static_cast<double>(edges_total);
    }
};

DisplacementDistribution displacement_distribution(const std::vector<Sentence>& sentences,
                                                   SupportWindow window = {});

// Distribution over sentence token counts; support [1, max observed].
DiscreteDistribution length_distribution(const std::vector<Sentence>& sentences);

}  // namespace edvkit
