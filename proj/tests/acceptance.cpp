// Acceptance suite: one line per criterion, PASS/FAIL/SKIP.
//
// Criteria that need full UD releases look for these environment variables
// and skip (without failing) when the data is not available:
//   EDVKIT_UD25_ROOT  directory of UD v2.5 treebank directories
//   EDVKIT_UD26_ROOT  directory of UD v2.6 treebank directories
//   EDVKIT_UD27_ROOT  directory of UD v2.7 treebank directories
// Exit code is nonzero iff any criterion FAILS.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "edvkit/conllu.hpp"
#include "edvkit/divergence.hpp"
#include "edvkit/error.hpp"
#include "edvkit/morphology.hpp"
#include "edvkit/numeric.hpp"
#include "edvkit/pipeline.hpp"
#include "edvkit/splitter.hpp"
#include "edvkit/statistics.hpp"
#include "reference_fixtures.hpp"
#include "testutil.hpp"

using namespace edvkit;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    enum Kind { pass, fail, skip } kind;
    std::string detail;
};

Outcome PASS(std::string d = "") { return {Outcome::pass, std::move(d)}; }
Outcome FAIL(std::string d) { return {Outcome::fail, std::move(d)}; }
Outcome SKIP(std::string d) { return {Outcome::skip, std::move(d)}; }

std::optional<fs::path> data_root(const char* var) {
    const char* v = std::getenv(var);
    if (!v || !*v) return std::nullopt;
    fs::path p(v);
    if (!fs::is_directory(p)) return std::nullopt;
    return p;
}

double round_1sig(double v) {
    if (v <= 0.0) return v;
    double exp10 = std::pow(10.0, std::floor(std::log10(v)));
    return std::round(v / exp10) * exp10;
}

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

std::set<std::string> read_names(const fs::path& p) {
    std::set<std::string> out;
    std::ifstream in(p);
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        out.insert(line);
    }
    return out;
}

MeasureReport measure_release(const fs::path& root,
                              const std::optional<fs::path>& filter) {
    AnalysisConfig config;
    config.ud_root = root;
    config.output_dir = fs::temp_directory_path() / "edvkit-acceptance";
    config.filter_list = filter;
    return run_measure(config);
}

// ---- criterion 1: EDV point checks ---------------------------------------

Outcome edv_point_checks() {
    auto root = data_root("EDVKIT_UD26_ROOT");
    if (!root) return SKIP("UD v2.6 not available (set EDVKIT_UD26_ROOT)");
    struct Check {
        const char* name;
        double expected;
    } checks[] = {{"Catalan-AnCora", 3e-4}, {"Marathi-UFAL", 5e-3}};
    std::string detail;
    for (const Check& c : checks) {
        AnalysisConfig config;
        config.ud_root = *root;
        auto start = std::chrono::steady_clock::now();
        Treebank tb;
        try {
            tb = load_treebank_by_name(config, c.name);
        } catch (const DataError&) {
            return SKIP(std::string("treebank ") + c.name + " not found under " +
                        root->string());
        }
        double value = edv(tb);
        double seconds = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - start)
                             .count();
        if (seconds >= 10.0)
            return FAIL(std::string(c.name) + " took " + sci(seconds) + " s (>= 10 s)");
        if (std::abs(round_1sig(value) - c.expected) > 1e-12 * c.expected)
            return FAIL(std::string(c.name) + " EDV " + sci(value) + " rounds to " +
                        sci(round_1sig(value)) + ", expected " + sci(c.expected));
        detail += std::string(c.name) + "=" + sci(value) + " (" + sci(seconds) + "s) ";
    }
    return PASS(detail);
}

// ---- criterion 2: support-window coverage ---------------------------------

Outcome coverage_check() {
    struct Release {
        const char* var;
        double expected;
    } releases[] = {{"EDVKIT_UD25_ROOT", 0.9940}, {"EDVKIT_UD26_ROOT", 0.9938}};
    bool any = false;
    std::string detail;
    for (const Release& r : releases) {
        auto root = data_root(r.var);
        if (!root) continue;
        any = true;
        MeasureReport report;
        try {
            report = measure_release(*root, std::nullopt);
        } catch (const DataError& e) {
            return SKIP(std::string(r.var) + ": " + e.what());
        }
        double cov = report.aggregate_coverage;
        if (std::abs(cov - r.expected) > 0.0005)
            return FAIL(std::string(r.var) + " coverage " + sci(cov) + " vs " +
                        sci(r.expected) + " +- 0.0005");
        detail += std::string(r.var) + "=" + sci(cov) + " ";
    }
    if (!any) return SKIP("no UD release available (set EDVKIT_UD25_ROOT / EDVKIT_UD26_ROOT)");
    return PASS(detail);
}

// ---- criterion 3: aggregate EDV over the model sets ------------------------

Outcome aggregate_edv_check() {
    struct Release {
        const char* var;
        const char* filter;
        double expected;
    } releases[] = {
        {"EDVKIT_UD26_ROOT", "filters/ud_v2.6_model_set.txt", 1.40e-3},
        {"EDVKIT_UD25_ROOT", "filters/ud_v2.5_model_set.txt", 1.35e-3}};
    bool any = false;
    std::string detail;
    for (const Release& r : releases) {
        auto root = data_root(r.var);
        if (!root) continue;
        fs::path filter = testutil::fixtures_dir() / r.filter;
        if (read_names(filter).empty()) {
            detail += std::string(r.var) + ": filter list empty, skipped; ";
            continue;
        }
        any = true;
        MeasureReport report = measure_release(*root, filter);
        if (!report.filter_missing_on_disk.empty())
            detail += std::to_string(report.filter_missing_on_disk.size()) +
                      " filter names missing on disk; ";
        if (std::abs(report.mean_edv - r.expected) > 0.10 * r.expected)
            return FAIL(std::string(r.var) + " mean EDV " + sci(report.mean_edv) +
                        " vs " + sci(r.expected) + " +- 10% (" + detail + ")");
        detail += std::string(r.var) + "=" + sci(report.mean_edv) + " ";
    }
    if (!any)
        return SKIP("needs a UD release plus a filled-in model-set filter list (" +
                    detail + ")");
    return PASS(detail);
}

// ---- criterion 4: morphological split cardinalities ------------------------

Outcome complexity_split_check() {
    struct Release {
        const char* var;
        const char* filter;
        const char* complex_list;
        std::size_t expected_complex;
        std::size_t expected_total;
    } releases[] = {{"EDVKIT_UD25_ROOT", "filters/ud_v2.5_model_set.txt",
                     "filters/complex_v2.5.txt", 50, 94},
                    {"EDVKIT_UD26_ROOT", "filters/ud_v2.6_model_set.txt",
                     "filters/complex_v2.6.txt", 47, 90}};
    bool any = false;
    std::string detail;
    for (const Release& r : releases) {
        auto root = data_root(r.var);
        if (!root) continue;
        fs::path filter = testutil::fixtures_dir() / r.filter;
        if (read_names(filter).empty()) {
            detail += std::string(r.var) + ": filter list empty, skipped; ";
            continue;
        }
        any = true;
        MeasureReport report = measure_release(*root, filter);
        if (report.rows.size() != r.expected_total)
            detail += std::string(r.var) + ": measured " +
                      std::to_string(report.rows.size()) + " treebanks (expected " +
                      std::to_string(r.expected_total) + "); ";
        if (report.complex_count != r.expected_complex)
            return FAIL(std::string(r.var) + ": " + std::to_string(report.complex_count) +
                        " complex, expected " + std::to_string(r.expected_complex));
        auto published = read_names(testutil::fixtures_dir() / r.complex_list);
        std::size_t agree = 0, considered = 0;
        for (const MeasureRow& row : report.rows) {
            bool in_published = published.count(row.norm_name) != 0;
            ++considered;
            if (in_published == row.complex_flag) ++agree;
        }
        double agreement = static_cast<double>(agree) / static_cast<double>(considered);
        if (agreement < 0.95)
            return FAIL(std::string(r.var) + ": membership agreement " + sci(agreement) +
                        " < 0.95");
        detail += std::string(r.var) + " agreement=" + sci(agreement) + " ";
    }
    if (!any)
        return SKIP("needs a UD release plus a filled-in model-set filter list (" +
                    detail + ")");
    return PASS(detail);
}

// ---- criterion 5: subsample variance experiment ----------------------------

Outcome variance_check() {
    auto root = data_root("EDVKIT_UD27_ROOT");
    if (!root) return SKIP("UD v2.7 not available (set EDVKIT_UD27_ROOT)");
    const char* treebanks[] = {"Czech-PDT",      "Estonian-EDT", "German-HDT",
                               "Japanese-BCCWJ", "Korean-Kaist", "Persian-PerDT"};
    AnalysisConfig config;
    config.ud_root = *root;
    config.output_dir = fs::temp_directory_path() / "edvkit-acceptance";
    config.seed = 20;
    std::string detail;
    for (const char* name : treebanks) {
        Treebank tb;
        try {
            tb = load_treebank_by_name(config, name);
        } catch (const DataError&) {
            return SKIP(std::string("treebank ") + name + " not found under UD v2.7 root");
        }
        auto rows = variance_experiment(tb.split("train"), tb.split("test"),
                                        {2000, 4000, 6000, 8000}, 20, config.seed);
        for (const VarianceRow& row : rows) {
            double rel = row.std_edv / row.mean_edv;
            if (rel < 0.03 || rel > 0.20)
                return FAIL(std::string(name) + " size " +
                            std::to_string(row.sample_size) + ": std/mean " + sci(rel) +
                            " outside [0.03, 0.20]");
        }
        if (std::string(name) == "Czech-PDT") {
            double m = rows[0].mean_edv, s = rows[0].std_edv;
            if (std::abs(m - 3.8e-4) > 0.15 * 3.8e-4)
                return FAIL("Czech-PDT 2K mean " + sci(m) + " vs 3.8e-4 +- 15%");
            if (std::abs(s - 0.7e-4) > 0.15 * 0.7e-4)
                return FAIL("Czech-PDT 2K std " + sci(s) + " vs 0.7e-4 +- 15%");
            detail += "Czech-PDT 2K mean=" + sci(m) + " std=" + sci(s) + " ";
        }
    }
    return PASS(detail);
}

// ---- criterion 6: statistics oracle suite ----------------------------------

Outcome oracle_vaserstein() {
    std::mt19937_64 rng(1009);
    for (int trial = 0; trial < 500; ++trial) {
        int lo = -static_cast<int>(rng() % 20) - 1;
        int hi = static_cast<int>(rng() % 20) + 1;
        auto p = testutil::random_distribution(rng, lo, hi);
        auto q = testutil::random_distribution(rng, lo, hi);
        double a = vaserstein(p, q);
        double b = transport_oracle(p, q).cost;
        if (std::abs(a - b) > 1e-10)
            return FAIL("pair " + std::to_string(trial) + ": CDF " + sci(a) +
                        " vs oracle " + sci(b));
    }
    return PASS("500 random pairs within 1e-10");
}

Outcome oracle_spearman() {
    std::mt19937_64 rng(1013);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t n = 10 + rng() % 60;
        std::vector<double> x(n), y(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = trial % 2 ? std::round(u(rng)) : u(rng);
            y[i] = trial % 3 ? std::round(u(rng)) : u(rng);
        }
        // Brute-force rank Pearson.
        auto ranks = [](const std::vector<double>& v) {
            std::vector<double> r(v.size());
            for (std::size_t i = 0; i < v.size(); ++i) {
                double below = 0, equal = 0;
                for (std::size_t j = 0; j < v.size(); ++j) {
                    if (v[j] < v[i]) ++below;
                    if (j != i && v[j] == v[i]) ++equal;
                }
                r[i] = 1.0 + below + 0.5 * equal;
            }
            return r;
        };
        try {
            double got = spearman(x, y).rho;
            double want = pearson(ranks(x), ranks(y));
            if (std::abs(got - want) > 1e-12)
                return FAIL("trial " + std::to_string(trial) + ": " + sci(got) + " vs " +
                            sci(want));
        } catch (const NumericError&) {
            continue;  // constant draw
        }
    }
    return PASS("200 random vectors within 1e-12");
}

Outcome oracle_shapiro() {
    for (const auto& c : reffix::shapiro_cases) {
        auto r = shapiro_wilk(c.x);
        if (std::abs(r.w - c.w) > 1e-3)
            return FAIL(std::string(c.name) + ": W " + sci(r.w) + " vs " + sci(c.w));
        bool p_ok = c.p > 1e-12 ? std::abs(r.p_value - c.p) / c.p < 0.10
                                : r.p_value < 1e-6;
        if (!p_ok)
            return FAIL(std::string(c.name) + ": p " + sci(r.p_value) + " vs " + sci(c.p));
    }
    return PASS(std::to_string(reffix::shapiro_cases.size()) + " reference fixtures");
}

Outcome oracle_lmg() {
    // Orthogonal balanced design: importances 50/50.
    std::vector<double> x1, x2, y;
    const double pat1[4] = {1, 1, -1, -1};
    const double pat2[4] = {1, -1, 1, -1};
    for (int r = 0; r < 10; ++r)
        for (int k = 0; k < 4; ++k) {
            x1.push_back(pat1[k]);
            x2.push_back(pat2[k]);
            y.push_back(pat1[k] + pat2[k]);
        }
    auto reg = ols_regression(y, {{"x1", x1}, {"x2", x2}});
    double a = reg.relative_importance[0].second;
    double b = reg.relative_importance[1].second;
    if (std::abs(a - 50.0) > 0.1 || std::abs(b - 50.0) > 0.1)
        return FAIL("orthogonal design importances " + sci(a) + "/" + sci(b));

    std::mt19937_64 rng(1019);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::size_t n = 30 + rng() % 40;
        std::vector<double> p1(n), p2(n), p3(n), yy(n);
        for (std::size_t i = 0; i < n; ++i) {
            p1[i] = u(rng);
            p2[i] = 0.4 * p1[i] + u(rng);
            p3[i] = u(rng);
            yy[i] = 2.0 * p1[i] - p2[i] + 0.5 * p3[i] + 0.2 * u(rng);
        }
        auto r = ols_regression(yy, {{"a", p1}, {"b", p2}, {"c", p3}});
        double sum = 0.0;
        for (const auto& [_, pct] : r.relative_importance) sum += pct;
        if (std::abs(sum - 100.0) > 0.1)
            return FAIL("importances sum " + sci(sum) + " != 100 +- 0.1");
    }
    return PASS("sum 100 +- 0.1 and 50/50 orthogonal case");
}

Outcome oracle_partial_null() {
    std::mt19937_64 rng(1021);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::size_t n = 10 + rng() % 30;
        std::vector<double> x(n), y(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = u(rng);
            y[i] = u(rng);
        }
        auto plain = spearman(x, y);
        auto partial = partial_spearman(x, y, {});
        if (plain.rho != partial.rho || plain.p_value != partial.p_value ||
            plain.ci95 != partial.ci95 || plain.power != partial.power ||
            plain.adj_rho_squared != partial.adj_rho_squared)
            return FAIL("trial " + std::to_string(trial) + ": results differ bit-wise");
    }
    return PASS("50 random instances bit-identical");
}

// ---- criterion 7: table replication ----------------------------------------

Outcome table_replication() {
    return SKIP(
        "the per-treebank measurement tables behind the published correlation "
        "tables are not recoverable from the text (only aggregate statistics are "
        "published); covered by the oracle suite per the criterion's degradation "
        "clause");
}

// ---- criterion 8: splitter properties --------------------------------------

Outcome splitter_properties() {
    std::mt19937_64 rng(1031);
    int dominated = 0;
    const int trials = 50;
    for (int t = 0; t < trials; ++t) {
        int n = 60 + static_cast<int>(rng() % 400);
        std::vector<Sentence> pool;
        for (int i = 0; i < n; ++i) {
            int l = 3 + static_cast<int>(rng() % 14);
            switch (rng() % 3) {
                case 0: pool.push_back(testutil::chain_sentence(l)); break;
                case 1: pool.push_back(testutil::reverse_chain_sentence(l)); break;
                default: pool.push_back(testutil::random_sentence(rng, l));
            }
        }
        std::uint64_t seed = rng();
        auto lo = generate_split(pool, SplitMode::min_edv, seed);
        auto hi = generate_split(pool, SplitMode::max_edv, seed);
        auto lo2 = generate_split(pool, SplitMode::min_edv, seed);

        // Determinism.
        std::ostringstream a, b;
        write_stream(lo.train, a);
        write_stream(lo2.train, b);
        if (a.str() != b.str()) return FAIL("split not deterministic at trial " + std::to_string(t));

        // Partition + proportions + minimum length, for both modes.
        for (const SplitResult* r : {&lo, &hi}) {
            std::size_t total = r->train.size() + r->dev.size() + r->test.size();
            if (total != pool.size())
                return FAIL("partition size mismatch at trial " + std::to_string(t));
            double nd = static_cast<double>(pool.size());
            if (std::abs(static_cast<double>(r->test.size()) - 0.2 * nd) >= 1.0 + 1e-9 ||
                std::abs(static_cast<double>(r->dev.size()) - 0.2 * nd) >= 1.0 + 1e-9 ||
                std::abs(static_cast<double>(r->train.size()) - 0.6 * nd) >= 1.0 + 1e-9)
                return FAIL("proportions off at trial " + std::to_string(t));
            for (const auto* part : {&r->train, &r->dev, &r->test})
                for (const Sentence& s : *part)
                    if (s.tokens.size() <= 2)
                        return FAIL("short sentence leaked at trial " + std::to_string(t));
        }
        if (hi.achieved_edv >= lo.achieved_edv) ++dominated;
    }
    if (dominated < static_cast<int>(0.95 * trials))
        return FAIL("max >= min in only " + std::to_string(dominated) + "/" +
                    std::to_string(trials));

    // Timing: a 40K-sentence pool splits in under 60 s.
    std::vector<Sentence> big;
    big.reserve(40000);
    std::mt19937_64 rng2(1033);
    for (int i = 0; i < 40000; ++i) {
        int l = 3 + static_cast<int>(rng2() % 28);
        big.push_back(i % 2 ? testutil::random_sentence(rng2, l)
                            : testutil::chain_sentence(l));
    }
    auto start = std::chrono::steady_clock::now();
    auto split = generate_split(big, SplitMode::max_edv, 77);
    double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (seconds >= 60.0) return FAIL("40K pool took " + sci(seconds) + " s");
    return PASS("dominance " + std::to_string(dominated) + "/50, 40K pool in " +
                sci(seconds) + " s, achieved EDV " + sci(split.achieved_edv));
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<Outcome()> run;
    };
    const Criterion criteria[] = {
        {"edv-point-checks", edv_point_checks},
        {"support-coverage", coverage_check},
        {"aggregate-edv", aggregate_edv_check},
        {"complexity-split-cardinality", complexity_split_check},
        {"subsample-variance", variance_check},
        {"oracle-vaserstein-cdf-vs-transport", oracle_vaserstein},
        {"oracle-spearman-vs-brute-force", oracle_spearman},
        {"oracle-shapiro-wilk-fixtures", oracle_shapiro},
        {"oracle-lmg-importance", oracle_lmg},
        {"oracle-partial-null-bit-exact", oracle_partial_null},
        {"table-replication", table_replication},
        {"splitter-properties", splitter_properties},
    };
    int failures = 0;
    for (const Criterion& c : criteria) {
        Outcome outcome{Outcome::fail, "unhandled exception"};
        try {
            outcome = c.run();
        } catch (const std::exception& e) {
            outcome = FAIL(std::string("exception: ") + e.what());
        }
        const char* tag = outcome.kind == Outcome::pass   ? "PASS"
                          : outcome.kind == Outcome::skip ? "SKIP"
                                                          : "FAIL";
        std::cout << tag << "  " << c.name;
        if (!outcome.detail.empty()) std::cout << "  -- " << outcome.detail;
        std::cout << "\n";
        if (outcome.kind == Outcome::fail) ++failures;
    }
    if (failures) {
        std::cout << failures << " criterion(s) failed\n";
        return 1;
    }
    return 0;
}
