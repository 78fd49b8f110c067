#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "edvkit/conllu.hpp"
#include "edvkit/distribution.hpp"
#include "edvkit/splitter.hpp"
#include "edvkit/statistics.hpp"

namespace edvkit {

inline constexpr int kSchemaVersion = 1;

struct AnalysisConfig {
    std::filesystem::path ud_root;
    std::filesystem::path output_dir;
    SupportWindow support{-30, 30};
    int bin_lo = 3;
    int bin_hi = 30;
    std::uint64_t seed = 1;
    enum class Format { csv, json } format = Format::csv;
    std::optional<std::filesystem::path> las_table;
    std::optional<std::filesystem::path> binned_table;
    std::optional<std::filesystem::path> filter_list;
    LabelGranularity granularity = LabelGranularity::universal;
    std::map<std::string, FitFamily> fit_families;  // per-covariate overrides
    bool lowercase_forms = false;
    bool emit_binned = false;
    bool dump_distributions = false;
    int jobs = 0;  // 0 = hardware concurrency
};

// Throws DataError when the window or bin range is inconsistent.
void validate_config(const AnalysisConfig& config);

// One measured treebank, the row format of measure.csv.
struct MeasureRow {
    std::string treebank;
    std::string norm_name;
    std::size_t train_sentences = 0, test_sentences = 0;
    std::uint64_t train_tokens = 0, test_tokens = 0;
    double mean_len_train = 0.0, mean_len_test = 0.0;
    double edv = 0.0, slv = 0.0;
    std::uint64_t edges_total = 0, edges_in_range = 0;
    double coverage = 0.0;
    double crossings = 0.0;
    double h_word_norm = 0.0, ttr = 0.0, f_l_norm = 0.0, f_il_norm = 0.0, hpe_norm = 0.0;
    double mc = 0.0;
    bool f_il_degenerate = false;
    double missing_lemma_fraction = 0.0;
    bool complex_flag = false;
};

struct MeasureReport {
    std::vector<MeasureRow> rows;  // sorted by treebank name
    double mean_edv = 0.0, std_edv = 0.0;
    double mean_slv = 0.0;
    double aggregate_coverage = 0.0;
    std::size_t complex_count = 0;
    std::vector<std::string> filter_missing_on_disk;   // in filter, not found
    std::vector<std::string> filtered_out;             // on disk, not in filter
    std::vector<std::pair<std::string, std::string>> failures;  // name, error
};

MeasureReport run_measure(const AnalysisConfig& config);

struct AnalyzeReport {
    std::vector<std::pair<std::string, NormalityResult>> normality;
    std::vector<LabeledCorrelation> spearman_las;
    std::vector<LabeledCorrelation> spearman_pairs;
    std::vector<LabeledCorrelation> partial_edv_las;
    std::vector<std::pair<std::string, RegressionResult>> regressions;
    std::vector<StageFit> background_fits;
    CorrelationResult background_stage1_corr;  // EDV vs LAS/fit1
    CorrelationResult background_final_corr;   // EDV vs fully normalized LAS
    std::vector<LabeledCorrelation> mc_subsets;     // empty unless mc present
    std::map<int, CorrelationResult> binned_partial;  // empty unless binned input
    std::vector<std::string> join_only_in_measure;
    std::vector<std::string> join_only_in_las;
    std::size_t n = 0;
};

AnalyzeReport run_analyze(const AnalysisConfig& config,
                          const std::filesystem::path& measure_table);

struct SplitManifest {
    std::string treebank;
    SplitMode mode;
    std::uint64_t seed;
    std::size_t pool_size;
    std::array<std::size_t, 3> sentence_counts;
    double achieved_edv;
    double achieved_slv;
    std::string rng_algorithm;
    std::array<std::filesystem::path, 3> files;  // train, dev, test
};

SplitManifest run_split(const AnalysisConfig& config, const std::string& treebank_name,
                        SplitMode mode);

std::vector<VarianceRow> run_variance(const AnalysisConfig& config,
                                      const std::string& treebank_name,
                                      const std::vector<std::size_t>& sizes,
                                      std::size_t repeats);

// Serialization helpers shared by the CLI and tests.
void write_measure_report(const MeasureReport& report, const AnalysisConfig& config);
void write_analyze_report(const AnalyzeReport& report, const AnalysisConfig& config);
void write_split_outputs(const SplitResult& split, const std::string& treebank_name,
                         const AnalysisConfig& config, SplitManifest& manifest);
void write_variance_report(const std::vector<VarianceRow>& rows,
                           const std::string& treebank_name,
                           const AnalysisConfig& config);

// Loads a treebank by directory name from config.ud_root.
Treebank load_treebank_by_name(const AnalysisConfig& config, const std::string& name);

// Distribution exports: CSV columns displacement,probability,count.
void write_distribution_csv(const DiscreteDistribution& dist,
                            const std::filesystem::path& path);
void write_distribution_json(const DiscreteDistribution& dist,
                             const std::filesystem::path& path);

}  // namespace edvkit
