#pragma once

#include <vector>

#include "edvkit/distribution.hpp"

namespace edvkit {

// Feasible coupling between two distributions on the same aligned support.
// entries are (source_index, target_index, mass) into that support.
struct TransportPlan {
    struct Entry {
        int source_index;
        int target_index;
        double mass;
    };
    std::vector<Entry> entries;
    double cost = 0.0;
};

// Pads both distributions with zero mass onto the union of their supports.
std::pair<DiscreteDistribution, DiscreteDistribution> align_supports(
    const DiscreteDistribution& p, const DiscreteDistribution& q);

// Vaserstein-1 distance on the unit integer grid, computed by the exact
// CDF closed form. Throws NumericError on unnormalized input.
double vaserstein(const DiscreteDistribution& p, const DiscreteDistribution& q);

// Greedy monotone matching, optimal in one dimension; used to cross-check
// the CDF form. plan.cost == vaserstein(p, q) within 1e-10.
TransportPlan transport_oracle(const DiscreteDistribution& p,
                               const DiscreteDistribution& q);

// Train/test divergence of edge-displacement distributions.
double edv(const Treebank& tb, SupportWindow window = {});
double edv(const std::vector<Sentence>& train, const std::vector<Sentence>& test,
           SupportWindow window = {});

// Train/test divergence of sentence-length distributions.
double slv(const Treebank& tb);
double slv(const std::vector<Sentence>& train, const std::vector<Sentence>& test);

}  // namespace edvkit
