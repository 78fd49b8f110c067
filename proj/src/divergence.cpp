#include "edvkit/divergence.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "edvkit/error.hpp"

namespace edvkit {

namespace {

void check_normalized(const DiscreteDistribution& d, const char* which) {
    double sum = std::accumulate(d.mass.begin(), d.mass.end(), 0.0);
    if (std::abs(sum - 1.0) > 1e-9)
        throw NumericError(std::string("distribution ") + which +
                           " not normalized: mass sums to " + std::to_string(sum));
    for (double m : d.mass)
        if (m < 0.0)
            throw NumericError(std::string("distribution ") + which + " has negative mass");
}

DiscreteDistribution pad_onto(const DiscreteDistribution& d, int lo, int hi) {
    DiscreteDistribution out;
    out.support_min = lo;
    out.support_max = hi;
    out.total_count = d.total_count;
    out.mass.assign(static_cast<std::size_t>(hi - lo + 1), 0.0);
    for (int v = d.support_min; v <= d.support_max; ++v)
        out.mass[static_cast<std::size_t>(v - lo)] = d.at(v);
    return out;
}

}  // namespace

std::pair<DiscreteDistribution, DiscreteDistribution> align_supports(
    const DiscreteDistribution& p, const DiscreteDistribution& q) {
    int lo = std::min(p.support_min, q.support_min);
    int hi = std::max(p.support_max, q.support_max);
    return {pad_onto(p, lo, hi), pad_onto(q, lo, hi)};
}

double vaserstein(const DiscreteDistribution& p, const DiscreteDistribution& q) {
    check_normalized(p, "p");
    check_normalized(q, "q");
    auto [a, b] = align_supports(p, q);
    double cdf_a = 0.0, cdf_b = 0.0, dist = 0.0;
    // Unit grid spacing: W1 is the sum of absolute CDF differences over all
    // grid points except the last (where both CDFs are 1).
    for (std::size_t i = 0; i + 1 < a.mass.size(); ++i) {
        cdf_a += a.mass[i];
        cdf_b += b.mass[i];
        dist += std::abs(cdf_a - cdf_b);
    }
    return dist;
}

TransportPlan transport_oracle(const DiscreteDistribution& p,
                               const DiscreteDistribution& q) {
    check_normalized(p, "p");
    check_normalized(q, "q");
    auto [a, b] = align_supports(p, q);
    TransportPlan plan;
    std::size_t i = 0, j = 0;
    double remain_a = a.mass.empty() ? 0.0 : a.mass[0];
    double remain_b = b.mass.empty() ? 0.0 : b.mass[0];
    const std::size_t n = a.mass.size();
    while (i < n && j < n) {
        double moved = std::min(remain_a, remain_b);
        if (moved > 0.0) {
            plan.entries.push_back({static_cast<int>(i), static_cast<int>(j), moved});
            plan.cost += moved * std::abs(static_cast<double>(i) - static_cast<double>(j));
            remain_a -= moved;
            remain_b -= moved;
        }
        if (remain_a <= remain_b) {
            if (++i < n) remain_a = a.mass[i];
        } else {
            if (++j < n) remain_b = b.mass[j];
        }
    }
    return plan;
}

double edv(const std::vector<Sentence>& train, const std::vector<Sentence>& test,
           SupportWindow window) {
    return vaserstein(displacement_distribution(train, window).dist,
                      displacement_distribution(test, window).dist);
}

double edv(const Treebank& tb, SupportWindow window) {
    return edv(tb.split("train"), tb.split("test"), window);
}

double slv(const std::vector<Sentence>& train, const std::vector<Sentence>& test) {
    return vaserstein(length_distribution(train), length_distribution(test));
}

double slv(const Treebank& tb) {
    return slv(tb.split("train"), tb.split("test"));
}

}  // namespace edvkit
