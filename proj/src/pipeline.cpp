#include "edvkit/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <set>
#include <thread>

#include <nlohmann/json.hpp>

#include "edvkit/csv.hpp"
#include "edvkit/divergence.hpp"
#include "edvkit/error.hpp"
#include "edvkit/morphology.hpp"
#include "edvkit/numeric.hpp"
#include "edvkit/treebank_stats.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace edvkit {

namespace {

std::string num(double v, const char* fmt = "%.10g") {
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

std::uint64_t count_tokens(const std::vector<Sentence>& sents) {
    std::uint64_t n = 0;
    for (const Sentence& s : sents) n += s.tokens.size();
    return n;
}

std::set<std::string> read_name_list(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open filter list " + path.string());
    std::set<std::string> names;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos) continue;
        std::size_t end = line.find_last_not_of(" \t");
        line = line.substr(start, end - start + 1);
        if (line.empty() || line[0] == '#') continue;
        names.insert(line);
    }
    return names;
}

MeasureRow measure_one(Treebank& tb, const AnalysisConfig& config) {
    load_split(tb, "train");
    load_split(tb, "test");
    const auto& train = tb.split("train");
    const auto& test = tb.split("test");

    MeasureRow row;
    row.treebank = tb.name;
    row.norm_name = normalized_treebank_name(tb.name);
    row.train_sentences = train.size();
    row.test_sentences = test.size();
    row.train_tokens = count_tokens(train);
    row.test_tokens = count_tokens(test);
    row.mean_len_train = static_cast<double>(row.train_tokens) / train.size();
    row.mean_len_test = static_cast<double>(row.test_tokens) / test.size();

    auto train_dist = displacement_distribution(train, config.support);
    auto test_dist = displacement_distribution(test, config.support);
    row.edv = vaserstein(train_dist.dist, test_dist.dist);
    row.slv = slv(train, test);
    if (config.dump_distributions) {
        fs::path dir = config.output_dir / "distributions";
        write_distribution_csv(train_dist.dist, dir / (tb.name + "-train.csv"));
        write_distribution_csv(test_dist.dist, dir / (tb.name + "-test.csv"));
        write_distribution_json(train_dist.dist, dir / (tb.name + "-train.json"));
        write_distribution_json(test_dist.dist, dir / (tb.name + "-test.json"));
    }
    row.edges_total = train_dist.edges_total + test_dist.edges_total;
    row.edges_in_range = train_dist.edges_in_range + test_dist.edges_in_range;
    row.coverage = static_cast<double>(row.edges_in_range) / row.edges_total;
    row.crossings = treebank_crossings(train);

    MorphologyOptions mopts;
    mopts.lowercase_forms = config.lowercase_forms;
    ComplexityScores scores = complexity_scores(build_profile(train, mopts));
    row.h_word_norm = scores.h_word_norm;
    row.ttr = scores.ttr;
    row.f_l_norm = scores.f_l_norm;
    row.f_il_norm = scores.f_il_norm;
    row.hpe_norm = scores.hpe_norm;
    row.mc = scores.mc;
    row.f_il_degenerate = scores.f_il_degenerate;
    row.missing_lemma_fraction = scores.missing_lemma_fraction;
    return row;
}

}  // namespace

void validate_config(const AnalysisConfig& config) {
    if (config.support.lo >= config.support.hi)
        throw DataError("support window lower bound must be below the upper bound");
    if (config.bin_lo < 1 || config.bin_lo > config.bin_hi)
        throw DataError("bad length-bin range [" + std::to_string(config.bin_lo) + "," +
                        std::to_string(config.bin_hi) + "]");
    // Keep every in-bin displacement representable inside the window.
    int longest_edge = config.bin_hi - 1;
    if (longest_edge > config.support.hi || -longest_edge < config.support.lo)
        throw DataError("length bins up to " + std::to_string(config.bin_hi) +
                        " need a window covering +-" + std::to_string(longest_edge));
}

void write_distribution_csv(const DiscreteDistribution& dist, const fs::path& path) {
    CsvTable t;
    t.header = {"displacement", "probability", "count"};
    for (int v = dist.support_min; v <= dist.support_max; ++v) {
        double p = dist.at(v);
        auto count = static_cast<std::uint64_t>(
            std::llround(p * static_cast<double>(dist.total_count)));
        t.rows.push_back({std::to_string(v), num(p), std::to_string(count)});
    }
    write_csv(t, path);
}

void write_distribution_json(const DiscreteDistribution& dist, const fs::path& path) {
    json j{{"support_min", dist.support_min},
           {"support_max", dist.support_max},
           {"total_count", dist.total_count},
           {"mass", dist.mass}};
    std::ofstream out(path);
    if (!out) throw DataError("cannot open " + path.string() + " for writing");
    out << j.dump(2) << '\n';
}

Treebank load_treebank_by_name(const AnalysisConfig& config, const std::string& name) {
    auto treebanks = discover_treebanks(config.ud_root);
    for (Treebank& tb : treebanks) {
        if (tb.name == name || normalized_treebank_name(tb.name) == name) {
            load_all_splits(tb);
            return tb;
        }
    }
    throw DataError("treebank '" + name + "' not found under " + config.ud_root.string());
}

MeasureReport run_measure(const AnalysisConfig& config) {
    validate_config(config);
    auto discovered = discover_treebanks(config.ud_root);
    if (discovered.empty())
        throw DataError("no treebanks found under " + config.ud_root.string());
    if (config.dump_distributions)
        fs::create_directories(config.output_dir / "distributions");

    std::optional<std::set<std::string>> filter;
    if (config.filter_list) filter = read_name_list(*config.filter_list);

    MeasureReport report;
    std::vector<Treebank> selected;
    std::set<std::string> matched_filter_names;
    for (Treebank& tb : discovered) {
        if (!tb.source_paths.count("train") || !tb.source_paths.count("test")) continue;
        if (filter) {
            std::string norm = normalized_treebank_name(tb.name);
            if (filter->count(tb.name))
                matched_filter_names.insert(tb.name);
            else if (filter->count(norm))
                matched_filter_names.insert(norm);
            else {
                report.filtered_out.push_back(tb.name);
                continue;
            }
        }
        selected.push_back(std::move(tb));
    }
    if (filter)
        for (const std::string& name : *filter)
            if (!matched_filter_names.count(name))
                report.filter_missing_on_disk.push_back(name);

    std::sort(selected.begin(), selected.end(),
              [](const Treebank& a, const Treebank& b) { return a.name < b.name; });

    std::vector<std::optional<MeasureRow>> rows(selected.size());
    std::vector<std::pair<std::string, std::string>> failures;
    std::mutex failure_mutex;
    std::atomic<std::size_t> next{0};
    unsigned jobs = config.jobs > 0 ? static_cast<unsigned>(config.jobs)
                                    : std::max(1u, std::thread::hardware_concurrency());
    jobs = std::min<unsigned>(jobs, std::max<std::size_t>(selected.size(), 1));

    auto worker = [&]() {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= selected.size()) break;
            try {
                rows[i] = measure_one(selected[i], config);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                failures.emplace_back(selected[i].name, e.what());
            }
            selected[i].splits.clear();  // free parsed sentences
        }
    };
    std::vector<std::thread> threads;
    for (unsigned t = 1; t < jobs; ++t) threads.emplace_back(worker);
    worker();
    for (auto& t : threads) t.join();

    std::sort(failures.begin(), failures.end());
    report.failures = std::move(failures);
    for (auto& r : rows)
        if (r) report.rows.push_back(std::move(*r));

    if (report.rows.empty()) throw DataError("no treebank could be measured");

    std::vector<double> edvs, slvs, mcs;
    std::uint64_t edges_total = 0, edges_in_range = 0;
    for (const MeasureRow& r : report.rows) {
        edvs.push_back(r.edv);
        slvs.push_back(r.slv);
        mcs.push_back(r.mc);
        edges_total += r.edges_total;
        edges_in_range += r.edges_in_range;
    }
    report.mean_edv = mean(edvs);
    report.std_edv = edvs.size() > 1 ? stdev(edvs) : 0.0;
    report.mean_slv = mean(slvs);
    report.aggregate_coverage =
        static_cast<double>(edges_in_range) / static_cast<double>(edges_total);
    double mc_mean = mean(mcs);
    for (MeasureRow& r : report.rows) {
        r.complex_flag = r.mc > mc_mean;
        if (r.complex_flag) ++report.complex_count;
    }
    return report;
}

namespace {

const std::vector<std::string> kMeasureHeader = {
    "treebank", "norm_name", "train_sentences", "train_tokens", "test_sentences",
    "test_tokens", "mean_len_train", "mean_len_test", "edv", "slv", "edges_total",
    "edges_in_range", "coverage", "crossings", "h_word_norm", "ttr", "f_l_norm",
    "f_il_norm", "hpe_norm", "mc", "f_il_degenerate", "missing_lemma_fraction",
    "complex"};

std::vector<std::string> measure_row_fields(const MeasureRow& r) {
    return {r.treebank,
            r.norm_name,
            std::to_string(r.train_sentences),
            std::to_string(r.train_tokens),
            std::to_string(r.test_sentences),
            std::to_string(r.test_tokens),
            num(r.mean_len_train),
            num(r.mean_len_test),
            num(r.edv),
            num(r.slv),
            std::to_string(r.edges_total),
            std::to_string(r.edges_in_range),
            num(r.coverage),
            num(r.crossings),
            num(r.h_word_norm),
            num(r.ttr),
            num(r.f_l_norm),
            num(r.f_il_norm),
            num(r.hpe_norm),
            num(r.mc),
            r.f_il_degenerate ? "true" : "false",
            num(r.missing_lemma_fraction),
            r.complex_flag ? "true" : "false"};
}

json correlation_json(const CorrelationResult& c) {
    return json{{"rho", c.rho},
                {"n", c.n},
                {"ci95_low", c.ci95.first},
                {"ci95_high", c.ci95.second},
                {"rho_squared", c.rho_squared},
                {"adj_rho_squared", c.adj_rho_squared},
                {"p_value", c.p_value},
                {"power", c.power},
                {"covariates", c.covariates}};
}

std::vector<std::string> correlation_fields(const std::string& variable,
                                            const std::string& target,
                                            const std::string& covariates,
                                            const CorrelationResult& c) {
    return {variable,
            target,
            covariates,
            format_value(c.rho),
            std::to_string(c.n),
            format_value(c.ci95.first),
            format_value(c.ci95.second),
            format_value(c.rho_squared),
            format_value(c.adj_rho_squared),
            format_value(c.p_value),
            format_value(c.power)};
}

const std::vector<std::string> kCorrelationHeader = {
    "variable", "target", "covariates", "rho",     "n",    "ci95_low",
    "ci95_high", "rho2",  "adj_rho2",   "p_value", "power"};

}  // namespace

void write_measure_report(const MeasureReport& report, const AnalysisConfig& config) {
    fs::create_directories(config.output_dir);
    CsvTable table;
    table.header = kMeasureHeader;
    for (const MeasureRow& r : report.rows) table.rows.push_back(measure_row_fields(r));
    write_csv(table, config.output_dir / "measure.csv");

    json summary{{"schema_version", kSchemaVersion},
                 {"treebanks", report.rows.size()},
                 {"mean_edv", report.mean_edv},
                 {"std_edv", report.std_edv},
                 {"mean_slv", report.mean_slv},
                 {"aggregate_coverage", report.aggregate_coverage},
                 {"complex_count", report.complex_count},
                 {"filter_missing_on_disk", report.filter_missing_on_disk},
                 {"filtered_out", report.filtered_out}};
    json failures = json::array();
    for (const auto& [name, what] : report.failures)
        failures.push_back({{"treebank", name}, {"error", what}});
    summary["failures"] = failures;
    std::ofstream out(config.output_dir / "measure_summary.json");
    out << summary.dump(2) << '\n';

    if (config.format == AnalysisConfig::Format::json) {
        json rows = json::array();
        for (const MeasureRow& r : report.rows) {
            json j;
            for (std::size_t i = 0; i < kMeasureHeader.size(); ++i)
                j[kMeasureHeader[i]] = measure_row_fields(r)[i];
            rows.push_back(j);
        }
        std::ofstream jout(config.output_dir / "measure.json");
        jout << rows.dump(2) << '\n';
    }
}

namespace {

struct AnalysisFrame {
    std::vector<std::string> names;
    std::map<std::string, std::vector<double>> columns;

    const std::vector<double>& col(const std::string& name) const {
        auto it = columns.find(name);
        if (it == columns.end()) throw DataError("analysis variable '" + name + "' missing");
        return it->second;
    }
    bool has(const std::string& name) const { return columns.count(name) != 0; }
};

AnalysisFrame join_tables(const CsvTable& measure, const AnalysisConfig& config,
                          AnalyzeReport& report) {
    AnalysisFrame frame;
    int name_col = measure.require_column("treebank");
    int norm_col = measure.column("norm_name");

    std::map<std::string, double> las_by_name;
    bool have_las_file = config.las_table.has_value();
    if (have_las_file) {
        CsvTable las = read_csv(*config.las_table);
        int lname = las.require_column("treebank");
        int lval = las.require_column("las");
        for (std::size_t r = 0; r < las.rows.size(); ++r)
            las_by_name[las.cell(r, lname)] = std::stod(las.cell(r, lval));
    }
    int las_col = measure.column("las");
    if (!have_las_file && las_col < 0)
        throw DataError("analyze needs a LAS table (--las) or a 'las' column");

    std::set<std::string> las_used;
    std::vector<std::size_t> kept;
    std::vector<double> las_values;
    for (std::size_t r = 0; r < measure.rows.size(); ++r) {
        std::string name = measure.cell(r, name_col);
        std::string norm = norm_col >= 0 ? measure.cell(r, norm_col) : name;
        double las_value;
        if (have_las_file) {
            auto it = las_by_name.find(name);
            if (it == las_by_name.end()) it = las_by_name.find(norm);
            if (it == las_by_name.end()) {
                report.join_only_in_measure.push_back(name);
                continue;
            }
            las_used.insert(it->first);
            las_value = it->second;
        } else {
            las_value = std::stod(measure.cell(r, las_col));
        }
        kept.push_back(r);
        frame.names.push_back(name);
        las_values.push_back(las_value);
    }
    for (const auto& [name, _] : las_by_name)
        if (!las_used.count(name)) report.join_only_in_las.push_back(name);

    frame.columns["las"] = std::move(las_values);
    const char* numeric_cols[] = {"train_tokens", "train_sentences", "test_tokens",
                                  "test_sentences", "mean_len_train", "mean_len_test",
                                  "edv", "slv", "mc"};
    for (const char* cname : numeric_cols) {
        if (measure.column(cname) < 0) continue;
        auto full = measure.numeric_column(cname);
        std::vector<double> sub;
        sub.reserve(kept.size());
        for (std::size_t r : kept) sub.push_back(full[r]);
        frame.columns[cname] = std::move(sub);
    }
    return frame;
}

FitFamily family_for(const AnalysisConfig& config, const std::string& covariate,
                     FitFamily fallback) {
    auto it = config.fit_families.find(covariate);
    return it == config.fit_families.end() ? fallback : it->second;
}

}  // namespace

AnalyzeReport run_analyze(const AnalysisConfig& config, const fs::path& measure_table) {
    validate_config(config);
    AnalyzeReport report;
    CsvTable measure = read_csv(measure_table);
    AnalysisFrame frame = join_tables(measure, config, report);
    report.n = frame.names.size();
    if (report.n < 4)
        throw DataError("analyze: only " + std::to_string(report.n) +
                        " joined treebanks; need at least 4");
    for (const std::string& name : report.join_only_in_measure)
        std::cerr << "warning: no LAS for treebank " << name << ", dropped\n";
    for (const std::string& name : report.join_only_in_las)
        std::cerr << "warning: LAS row " << name << " matches no measured treebank\n";

    const auto& las = frame.col("las");

    // Normality battery over the variables of interest.
    for (const char* v :
         {"las", "train_tokens", "edv", "mean_len_test", "slv", "test_tokens"})
        if (frame.has(v)) report.normality.emplace_back(v, shapiro_wilk(frame.col(v)));

    // Plain correlations against LAS.
    for (const char* v : {"train_tokens", "train_sentences", "mean_len_train",
                          "test_tokens", "test_sentences", "mean_len_test", "slv", "edv"})
        if (frame.has(v))
            report.spearman_las.push_back({v, "las", "", spearman(frame.col(v), las)});

    // Pairwise correlations between covariate candidates.
    const std::pair<const char*, const char*> pairs[] = {
        {"train_tokens", "edv"},    {"mean_len_test", "edv"},
        {"mean_len_train", "edv"},  {"test_tokens", "edv"},
        {"slv", "edv"},             {"test_tokens", "train_tokens"},
        {"mean_len_test", "train_tokens"}};
    for (const auto& [a, b] : pairs)
        if (frame.has(a) && frame.has(b))
            report.spearman_pairs.push_back(
                {a, b, "", spearman(frame.col(a), frame.col(b))});

    // Partial coefficients for EDV vs LAS.
    const auto& edv_col = frame.col("edv");
    report.partial_edv_las.push_back({"edv", "las", "", spearman(edv_col, las)});
    report.partial_edv_las.push_back(
        {"edv", "las", "train_tokens",
         partial_spearman(edv_col, las, {frame.col("train_tokens")}, {"train_tokens"})});
    report.partial_edv_las.push_back(
        {"edv", "las", "train_tokens+mean_len_test",
         partial_spearman(edv_col, las,
                          {frame.col("train_tokens"), frame.col("mean_len_test")},
                          {"train_tokens", "mean_len_test"})});

    // Regression models over log train tokens, mean test length, EDV.
    std::vector<double> log_tokens;
    for (double v : frame.col("train_tokens")) {
        if (v <= 0.0) throw DataError("analyze: non-positive train_tokens");
        log_tokens.push_back(std::log(v));
    }
    const auto& ltest = frame.col("mean_len_test");
    using Preds = std::vector<std::pair<std::string, std::vector<double>>>;
    auto add_model = [&](const std::string& label, const Preds& preds) {
        report.regressions.emplace_back(label, ols_regression(las, preds));
    };
    add_model("log_train_tokens", {{"log_train_tokens", log_tokens}});
    add_model("log_train_tokens+mean_len_test",
              {{"log_train_tokens", log_tokens}, {"mean_len_test", ltest}});
    add_model("log_train_tokens+edv",
              {{"log_train_tokens", log_tokens}, {"edv", edv_col}});
    add_model("log_train_tokens+mean_len_test+edv",
              {{"log_train_tokens", log_tokens},
               {"mean_len_test", ltest},
               {"edv", edv_col}});

    // Background removal: train tokens (log fit), then mean test length.
    std::vector<FitStage> stages;
    stages.push_back({"train_tokens",
                      family_for(config, "train_tokens", FitFamily::log_linear),
                      frame.col("train_tokens")});
    stages.push_back({"mean_len_test",
                      family_for(config, "mean_len_test", FitFamily::linear), ltest});
    auto stage1 = background_removal(las, {stages[0]});
    report.background_stage1_corr = spearman(edv_col, stage1.normalized_target);
    auto full = background_removal(las, stages);
    report.background_fits = full.fits;
    report.background_final_corr = spearman(edv_col, full.normalized_target);

    // Morphological-complexity subsets, when mc was measured.
    if (frame.has("mc")) {
        const auto& mc = frame.col("mc");
        double mc_mean = mean(mc);
        auto subset_corrs = [&](const std::string& label, auto keep) {
            std::vector<double> se, sl, st;
            for (std::size_t i = 0; i < mc.size(); ++i) {
                if (!keep(i)) continue;
                se.push_back(edv_col[i]);
                sl.push_back(las[i]);
                st.push_back(frame.col("train_tokens")[i]);
            }
            if (se.size() < 6) return;  // too few for the partial
            report.mc_subsets.push_back({"edv", "las:" + label, "", spearman(se, sl)});
            report.mc_subsets.push_back(
                {"edv", "las:" + label, "train_tokens",
                 partial_spearman(se, sl, {st}, {"train_tokens"})});
        };
        subset_corrs("complex", [&](std::size_t i) { return mc[i] > mc_mean; });
        subset_corrs("not_complex", [&](std::size_t i) { return mc[i] <= mc_mean; });
        subset_corrs("full", [](std::size_t) { return true; });
    }

    // Per-length partial coefficients from a binned EDV/LAS table.
    if (config.binned_table) {
        CsvTable binned = read_csv(*config.binned_table);
        int bname = binned.require_column("treebank");
        auto blen = binned.numeric_column("length");
        auto bedv = binned.numeric_column("edv");
        auto blas = binned.numeric_column("las");
        std::map<std::string, double> tokens_by_name;
        for (std::size_t i = 0; i < frame.names.size(); ++i)
            tokens_by_name[frame.names[i]] = frame.col("train_tokens")[i];
        std::map<int, std::vector<std::array<double, 3>>> per_length;
        for (std::size_t r = 0; r < binned.rows.size(); ++r) {
            auto it = tokens_by_name.find(binned.cell(r, bname));
            if (it == tokens_by_name.end()) continue;
            per_length[static_cast<int>(blen[r])].push_back(
                {bedv[r], blas[r], it->second});
        }
        for (const auto& [len, rows] : per_length) {
            if (len < config.bin_lo || len > config.bin_hi) continue;
            if (rows.size() < 6) continue;
            std::vector<double> e, l, t;
            for (const auto& row : rows) {
                e.push_back(row[0]);
                l.push_back(row[1]);
                t.push_back(row[2]);
            }
            try {
                report.binned_partial[len] =
                    partial_spearman(e, l, {t}, {"train_tokens"});
            } catch (const NumericError&) {
                // constant bin (e.g. every EDV identical): not reportable
            }
        }
    }
    return report;
}

void write_analyze_report(const AnalyzeReport& report, const AnalysisConfig& config) {
    fs::create_directories(config.output_dir);

    {
        CsvTable t;
        t.header = {"variable", "w", "p_value", "normal"};
        for (const auto& [name, r] : report.normality)
            t.rows.push_back({name, format_value(r.w), format_value(r.p_value),
                              r.normal_at_005 ? "true" : "false"});
        write_csv(t, config.output_dir / "normality.csv");
    }
    auto write_correlations = [&](const std::vector<LabeledCorrelation>& rows,
                                  const std::string& file) {
        CsvTable t;
        t.header = kCorrelationHeader;
        for (const LabeledCorrelation& c : rows)
            t.rows.push_back(
                correlation_fields(c.variable, c.target, c.covariate, c.result));
        write_csv(t, config.output_dir / file);
    };
    write_correlations(report.spearman_las, "spearman_las.csv");
    write_correlations(report.spearman_pairs, "spearman_pairs.csv");
    write_correlations(report.partial_edv_las, "partial_edv_las.csv");
    if (!report.mc_subsets.empty())
        write_correlations(report.mc_subsets, "mc_subsets.csv");

    {
        CsvTable t;
        t.header = {"model", "adj_r2", "predictor", "estimate", "p_value",
                    "relative_importance_pct"};
        for (const auto& [label, reg] : report.regressions) {
            for (std::size_t j = 0; j < reg.coefficients.size(); ++j) {
                const auto& c = reg.coefficients[j];
                t.rows.push_back({label, format_value(reg.adj_r_squared), c.name,
                                  format_value(c.estimate), format_value(c.p_value),
                                  format_value(reg.relative_importance[j].second)});
            }
        }
        write_csv(t, config.output_dir / "regression.csv");
    }
    {
        CsvTable t;
        t.header = {"stage", "covariate", "family", "slope", "intercept"};
        for (std::size_t i = 0; i < report.background_fits.size(); ++i) {
            const StageFit& f = report.background_fits[i];
            t.rows.push_back({std::to_string(i + 1), f.covariate_name,
                              f.family == FitFamily::log_linear ? "log_linear" : "linear",
                              format_value(f.slope), format_value(f.intercept)});
        }
        write_csv(t, config.output_dir / "background_fits.csv");
    }
    if (!report.binned_partial.empty()) {
        CsvTable t;
        t.header = {"length", "rho", "p_value", "n"};
        for (const auto& [len, c] : report.binned_partial)
            t.rows.push_back({std::to_string(len), format_value(c.rho),
                              format_value(c.p_value), std::to_string(c.n)});
        write_csv(t, config.output_dir / "binned_partial.csv");
    }

    json j{{"schema_version", kSchemaVersion}, {"n", report.n}};
    j["normality"] = json::array();
    for (const auto& [name, r] : report.normality)
        j["normality"].push_back({{"variable", name},
                                  {"w", r.w},
                                  {"p_value", r.p_value},
                                  {"normal", r.normal_at_005}});
    auto corr_array = [](const std::vector<LabeledCorrelation>& rows) {
        json arr = json::array();
        for (const LabeledCorrelation& c : rows) {
            json e = correlation_json(c.result);
            e["variable"] = c.variable;
            e["target"] = c.target;
            arr.push_back(e);
        }
        return arr;
    };
    j["spearman_las"] = corr_array(report.spearman_las);
    j["spearman_pairs"] = corr_array(report.spearman_pairs);
    j["partial_edv_las"] = corr_array(report.partial_edv_las);
    j["mc_subsets"] = corr_array(report.mc_subsets);
    j["regressions"] = json::array();
    for (const auto& [label, reg] : report.regressions) {
        json coeffs = json::array();
        for (std::size_t i = 0; i < reg.coefficients.size(); ++i)
            coeffs.push_back({{"name", reg.coefficients[i].name},
                              {"estimate", reg.coefficients[i].estimate},
                              {"p_value", reg.coefficients[i].p_value},
                              {"relative_importance_pct",
                               reg.relative_importance[i].second}});
        j["regressions"].push_back({{"model", label},
                                    {"n", reg.n},
                                    {"r_squared", reg.r_squared},
                                    {"adj_r_squared", reg.adj_r_squared},
                                    {"coefficients", coeffs}});
    }
    j["background"] = {{"stage1_corr", correlation_json(report.background_stage1_corr)},
                       {"final_corr", correlation_json(report.background_final_corr)}};
    j["binned_partial"] = json::array();
    for (const auto& [len, c] : report.binned_partial) {
        json e = correlation_json(c);
        e["length"] = len;
        j["binned_partial"].push_back(e);
    }
    j["join_only_in_measure"] = report.join_only_in_measure;
    j["join_only_in_las"] = report.join_only_in_las;
    std::ofstream out(config.output_dir / "analysis.json");
    out << j.dump(2) << '\n';
}

SplitManifest run_split(const AnalysisConfig& config, const std::string& treebank_name,
                        SplitMode mode) {
    validate_config(config);
    Treebank tb = load_treebank_by_name(config, treebank_name);
    auto pool = pool_treebank(tb);
    SplitResult split = generate_split(pool, mode, config.seed, config.support);
    SplitManifest manifest;
    manifest.treebank = tb.name;
    manifest.mode = mode;
    manifest.seed = config.seed;
    manifest.pool_size = pool.size();
    manifest.sentence_counts = split.sentence_counts;
    manifest.achieved_edv = split.achieved_edv;
    manifest.achieved_slv = split.achieved_slv;
    manifest.rng_algorithm = split.rng_algorithm;
    write_split_outputs(split, tb.name, config, manifest);
    return manifest;
}

void write_split_outputs(const SplitResult& split, const std::string& treebank_name,
                         const AnalysisConfig& config, SplitManifest& manifest) {
    fs::create_directories(config.output_dir);
    std::string stem = treebank_name + "-edv" + to_string(split.mode);
    const std::array<std::pair<const char*, const std::vector<Sentence>*>, 3> parts{
        {{"train", &split.train}, {"dev", &split.dev}, {"test", &split.test}}};
    for (std::size_t i = 0; i < parts.size(); ++i) {
        fs::path path = config.output_dir / (stem + "-" + parts[i].first + ".conllu");
        write_file(*parts[i].second, path);
        manifest.files[i] = path;
    }
    json j{{"schema_version", kSchemaVersion},
           {"treebank", treebank_name},
           {"mode", to_string(split.mode)},
           {"seed", split.seed},
           {"rng_algorithm", split.rng_algorithm},
           {"pool_size", manifest.pool_size},
           {"train_sentences", split.sentence_counts[0]},
           {"dev_sentences", split.sentence_counts[1]},
           {"test_sentences", split.sentence_counts[2]},
           {"achieved_edv", split.achieved_edv},
           {"achieved_slv", split.achieved_slv},
           {"files",
            {manifest.files[0].filename().string(), manifest.files[1].filename().string(),
             manifest.files[2].filename().string()}}};
    std::ofstream out(config.output_dir / (stem + "-manifest.json"));
    out << j.dump(2) << '\n';
}

std::vector<VarianceRow> run_variance(const AnalysisConfig& config,
                                      const std::string& treebank_name,
                                      const std::vector<std::size_t>& sizes,
                                      std::size_t repeats) {
    validate_config(config);
    Treebank tb = load_treebank_by_name(config, treebank_name);
    auto rows = variance_experiment(tb.split("train"), tb.split("test"), sizes, repeats,
                                    config.seed, config.support);
    write_variance_report(rows, tb.name, config);
    return rows;
}

void write_variance_report(const std::vector<VarianceRow>& rows,
                           const std::string& treebank_name,
                           const AnalysisConfig& config) {
    fs::create_directories(config.output_dir);
    {
        CsvTable t;
        t.header = {"size", "mean_edv", "std_edv", "rel_std"};
        for (const VarianceRow& r : rows)
            t.rows.push_back({std::to_string(r.sample_size), num(r.mean_edv),
                              num(r.std_edv),
                              num(r.mean_edv == 0.0 ? 0.0 : r.std_edv / r.mean_edv)});
        write_csv(t, config.output_dir / (treebank_name + "-variance.csv"));
    }
    {
        CsvTable t;
        t.header = {"size", "repeat", "edv"};
        for (const VarianceRow& r : rows)
            for (std::size_t i = 0; i < r.values.size(); ++i)
                t.rows.push_back({std::to_string(r.sample_size), std::to_string(i),
                                  num(r.values[i])});
        write_csv(t, config.output_dir / (treebank_name + "-variance-values.csv"));
    }
}

}  // namespace edvkit
