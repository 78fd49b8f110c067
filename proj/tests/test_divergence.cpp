#include "edvkit/divergence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "doctest.h"
#include "edvkit/error.hpp"
#include "edvkit/numeric.hpp"
#include "reference_fixtures.hpp"
#include "testutil.hpp"

using namespace edvkit;

namespace {

DiscreteDistribution point_mass(int value, int lo, int hi) {
    DiscreteDistribution d;
    d.support_min = lo;
    d.support_max = hi;
    d.total_count = 1;
    d.mass.assign(static_cast<std::size_t>(hi - lo + 1), 0.0);
    d.mass[static_cast<std::size_t>(value - lo)] = 1.0;
    return d;
}

// Exhaustive minimum over the vertices of the transport polytope for tiny
// instances: every basis of m+n-1 cells whose induced equality system has a
// unique nonnegative solution is a vertex.
double lp_vertex_oracle(const DiscreteDistribution& p, const DiscreteDistribution& q) {
    auto [a, b] = align_supports(p, q);
    const int m = static_cast<int>(a.mass.size());
    const int cells = m * m;
    const int basis_size = 2 * m - 1;
    std::vector<int> idx(static_cast<std::size_t>(cells));
    std::iota(idx.begin(), idx.end(), 0);

    double best = std::numeric_limits<double>::infinity();
    std::vector<int> chosen;
    // Enumerate all cell subsets of size basis_size.
    std::vector<int> comb(static_cast<std::size_t>(basis_size));
    std::iota(comb.begin(), comb.end(), 0);
    auto advance = [&]() {
        int i = basis_size - 1;
        while (i >= 0 && comb[static_cast<std::size_t>(i)] == cells - basis_size + i) --i;
        if (i < 0) return false;
        ++comb[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < basis_size; ++j)
            comb[static_cast<std::size_t>(j)] = comb[static_cast<std::size_t>(j - 1)] + 1;
        return true;
    };
    do {
        // Equality constraints: m row sums + m column sums, one redundant.
        // Solve the 2m-1 x 2m-1 system over the chosen cells (drop the last
        // column constraint).
        std::vector<std::vector<double>> mat(
            static_cast<std::size_t>(basis_size),
            std::vector<double>(static_cast<std::size_t>(basis_size), 0.0));
        std::vector<double> rhs(static_cast<std::size_t>(basis_size), 0.0);
        for (int r = 0; r < m; ++r) rhs[static_cast<std::size_t>(r)] = a.mass[static_cast<std::size_t>(r)];
        for (int c = 0; c < m - 1; ++c)
            rhs[static_cast<std::size_t>(m + c)] = b.mass[static_cast<std::size_t>(c)];
        for (int k = 0; k < basis_size; ++k) {
            int cell = comb[static_cast<std::size_t>(k)];
            int r = cell / m, c = cell % m;
            mat[static_cast<std::size_t>(r)][static_cast<std::size_t>(k)] = 1.0;
            if (c < m - 1) mat[static_cast<std::size_t>(m + c)][static_cast<std::size_t>(k)] = 1.0;
        }
        std::vector<double> sol;
        try {
            sol = solve_linear(mat, rhs);
        } catch (const NumericError&) {
            continue;  // degenerate basis
        }
        bool feasible = true;
        double cost = 0.0;
        for (int k = 0; k < basis_size; ++k) {
            if (sol[static_cast<std::size_t>(k)] < -1e-9) {
                feasible = false;
                break;
            }
            int cell = comb[static_cast<std::size_t>(k)];
            cost += std::max(0.0, sol[static_cast<std::size_t>(k)]) *
                    std::abs(cell / m - cell % m);
        }
        if (feasible) best = std::min(best, cost);
    } while (advance());
    return best;
}

}  // namespace

TEST_CASE("vaserstein of identical distributions is zero") {
    std::mt19937_64 rng(53);
    auto d = testutil::random_distribution(rng, -5, 5);
    CHECK(vaserstein(d, d) == 0.0);
}

TEST_CASE("point masses two apart cost 2") {
    auto p = point_mass(-1, -1, 1);
    auto q = point_mass(1, -1, 1);
    CHECK(vaserstein(p, q) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("unnormalized input is rejected") {
    DiscreteDistribution bad;
    bad.support_min = 0;
    bad.support_max = 1;
    bad.mass = {0.6, 0.6};
    bad.total_count = 2;
    auto ok = point_mass(0, 0, 1);
    CHECK_THROWS_AS(vaserstein(bad, ok), NumericError);
}

TEST_CASE("uniform {0,1} vs point mass at 1 costs 0.5") {
    DiscreteDistribution u;
    u.support_min = 0;
    u.support_max = 1;
    u.mass = {0.5, 0.5};
    u.total_count = 2;
    auto plan = transport_oracle(u, point_mass(1, 0, 1));
    CHECK(plan.cost == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(vaserstein(u, point_mass(1, 0, 1)) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("identical point masses give an empty-cost plan") {
    auto p = point_mass(2, 0, 3);
    auto plan = transport_oracle(p, p);
    CHECK(plan.cost == 0.0);
    for (const auto& e : plan.entries) CHECK(e.source_index == e.target_index);
}

TEST_CASE("transport plan is feasible: marginals match") {
    std::mt19937_64 rng(59);
    for (int trial = 0; trial < 20; ++trial) {
        auto p = testutil::random_distribution(rng, -4, 4);
        auto q = testutil::random_distribution(rng, -4, 4);
        auto plan = transport_oracle(p, q);
        std::vector<double> row(p.mass.size(), 0.0), col(q.mass.size(), 0.0);
        for (const auto& e : plan.entries) {
            CHECK(e.mass >= 0.0);
            row[static_cast<std::size_t>(e.source_index)] += e.mass;
            col[static_cast<std::size_t>(e.target_index)] += e.mass;
        }
        for (std::size_t i = 0; i < row.size(); ++i)
            CHECK(row[i] == doctest::Approx(p.mass[i]).epsilon(1e-9));
        for (std::size_t i = 0; i < col.size(); ++i)
            CHECK(col[i] == doctest::Approx(q.mass[i]).epsilon(1e-9));
    }
}

TEST_CASE("CDF method equals transport oracle on random pairs") {
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 50; ++trial) {
        auto p = testutil::random_distribution(rng, -5, 5);
        auto q = testutil::random_distribution(rng, -5, 5);
        CHECK(vaserstein(p, q) == doctest::Approx(transport_oracle(p, q).cost).epsilon(1e-10));
    }
}

TEST_CASE("CDF method equals LP vertex enumeration on tiny instances") {
    std::mt19937_64 rng(67);
    for (int trial = 0; trial < 12; ++trial) {
        auto p = testutil::random_distribution(rng, 0, 2);
        auto q = testutil::random_distribution(rng, 0, 2);
        double lp = lp_vertex_oracle(p, q);
        CHECK(vaserstein(p, q) == doctest::Approx(lp).epsilon(1e-8));
    }
}

TEST_CASE("matches scipy wasserstein reference values") {
    for (const auto& c : reffix::wasserstein_cases) {
        DiscreteDistribution p, q;
        p.support_min = q.support_min = -5;
        p.support_max = q.support_max = 5;
        p.mass = c.p;
        q.mass = c.q;
        p.total_count = q.total_count = 1;
        CHECK(vaserstein(p, q) == doctest::Approx(c.d).epsilon(1e-10));
    }
}

TEST_CASE("symmetry, triangle inequality, scale bound") {
    std::mt19937_64 rng(71);
    for (int trial = 0; trial < 30; ++trial) {
        auto p = testutil::random_distribution(rng, -30, 30);
        auto q = testutil::random_distribution(rng, -30, 30);
        auto r = testutil::random_distribution(rng, -30, 30);
        double pq = vaserstein(p, q);
        CHECK(pq == vaserstein(q, p));  // exact symmetry
        CHECK(pq >= 0.0);
        CHECK(pq <= 60.0);
        CHECK(pq <= vaserstein(p, r) + vaserstein(r, q) + 1e-9);
    }
}

TEST_CASE("support alignment pads rather than erroring") {
    auto p = point_mass(0, 0, 2);
    auto q = point_mass(8, 6, 8);
    CHECK(vaserstein(p, q) == doctest::Approx(8.0).epsilon(1e-12));
}

TEST_CASE("edv on the fixture treebank") {
    auto treebanks = discover_treebanks(testutil::fixtures_dir() / "mini");
    Treebank alpha = treebanks[0];
    load_all_splits(alpha);
    double e = edv(alpha);
    CHECK(e >= 0.0);
    // Same file on both sides -> 0.
    CHECK(edv(alpha.split("train"), alpha.split("train")) == 0.0);

    // Cross-check against the oracle.
    auto train_d = displacement_distribution(alpha.split("train")).dist;
    auto test_d = displacement_distribution(alpha.split("test")).dist;
    CHECK(e == doctest::Approx(transport_oracle(train_d, test_d).cost).epsilon(1e-10));
}

TEST_CASE("slv point-mass example") {
    std::mt19937_64 rng(73);
    std::vector<Sentence> train, test;
    for (int i = 0; i < 5; ++i) train.push_back(testutil::random_sentence(rng, 10));
    for (int i = 0; i < 7; ++i) test.push_back(testutil::random_sentence(rng, 12));
    CHECK(slv(train, test) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(slv(train, train) == 0.0);
}

TEST_CASE("slv on the fixture treebank matches the oracle") {
    auto treebanks = discover_treebanks(testutil::fixtures_dir() / "mini");
    Treebank gamma = treebanks[2];
    load_all_splits(gamma);
    auto a = length_distribution(gamma.split("train"));
    auto b = length_distribution(gamma.split("test"));
    CHECK(slv(gamma) == doctest::Approx(transport_oracle(a, b).cost).epsilon(1e-10));
}

TEST_CASE("edv errors on a missing split") {
    Treebank tb;
    tb.name = "no-test";
    tb.splits["train"] = {testutil::make_sentence({0, 1})};
    CHECK_THROWS_AS(edv(tb), DataError);
}
