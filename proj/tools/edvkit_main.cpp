// edvkit: treebank train/test divergence toolkit.
//
// Subcommands:
//   measure   per-treebank divergence, coverage, structure and complexity table
//   analyze   correlation / regression / normality battery over a measure table
//   split     MED-guided min/max divergence 60|20|20 resplit of one treebank
//   variance  seeded subsample divergence stability experiment
//   eval-las  labeled attachment score between gold and predicted files

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "edvkit/csv.hpp"
#include "edvkit/error.hpp"
#include "edvkit/pipeline.hpp"
#include "edvkit/treebank_stats.hpp"

using namespace edvkit;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumeric = 3;

void add_common(CLI::App* cmd, AnalysisConfig& config) {
    cmd->add_option("-o,--out", config.output_dir, "Output directory")
        ->default_val("edvkit-out");
    cmd->add_option("--seed", config.seed, "RNG seed")->default_val(1);
    cmd->add_option("--support-lo", config.support.lo,
                    "Displacement window lower bound")
        ->default_val(-30);
    cmd->add_option("--support-hi", config.support.hi,
                    "Displacement window upper bound")
        ->default_val(30);
    cmd->add_option("--bin-lo", config.bin_lo, "Shortest sentence-length bin")
        ->default_val(3);
    cmd->add_option("--bin-hi", config.bin_hi, "Longest sentence-length bin")
        ->default_val(30);
}

void add_ud_root(CLI::App* cmd, AnalysisConfig& config) {
    auto* opt = cmd->add_option("--ud-root", config.ud_root,
                                "Directory holding treebank directories");
    opt->envname("EDVKIT_UD_ROOT");
    opt->required();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"treebank edge-displacement divergence toolkit"};
    app.require_subcommand(1);

    AnalysisConfig config;
    std::string format = "csv";

    auto* measure = app.add_subcommand(
        "measure", "Measure every treebank under --ud-root into measure.csv");
    add_common(measure, config);
    add_ud_root(measure, config);
    measure->add_option("--filter", "File listing treebank names to keep")
        ->check(CLI::ExistingFile);
    measure->add_option("--format", format, "csv or json")->default_val("csv");
    measure->add_flag("--lowercase-forms", config.lowercase_forms,
                      "Lowercase forms/lemmas before vocabulary counting");
    measure->add_option("-j,--jobs", config.jobs, "Worker threads (0 = auto)")
        ->default_val(0);
    measure->add_flag("--binned", config.emit_binned,
                      "Also write per-sentence-length divergence (binned_edv.csv)");
    measure->add_flag("--dump-distributions", config.dump_distributions,
                      "Write each treebank's displacement distributions under "
                      "distributions/");

    auto* analyze = app.add_subcommand(
        "analyze", "Run the statistical battery over a measure.csv table");
    add_common(analyze, config);
    std::string measure_table;
    analyze->add_option("--table", measure_table, "measure.csv-style table")
        ->required()
        ->check(CLI::ExistingFile);
    analyze->add_option("--las", "CSV with columns treebank,las")
        ->check(CLI::ExistingFile);
    analyze->add_option("--binned-table",
                        "CSV with columns treebank,length,edv,las for the "
                        "per-length partial coefficients")
        ->check(CLI::ExistingFile);
    std::vector<std::string> fit_specs;
    analyze->add_option("--fit", fit_specs,
                        "Override a background fit family: covariate=linear|log_linear");

    auto* split = app.add_subcommand(
        "split", "Generate a min or max divergence split for one treebank");
    add_common(split, config);
    add_ud_root(split, config);
    std::string split_treebank, split_mode = "min";
    split->add_option("--treebank", split_treebank, "Treebank directory name")
        ->required();
    split->add_option("--mode", split_mode, "min or max")
        ->check(CLI::IsMember({"min", "max"}));

    auto* variance = app.add_subcommand(
        "variance", "Subsample-size divergence stability experiment");
    add_common(variance, config);
    add_ud_root(variance, config);
    std::string var_treebank;
    std::vector<std::size_t> sizes{2000, 4000, 6000, 8000};
    std::size_t repeats = 20;
    variance->add_option("--treebank", var_treebank, "Treebank directory name")
        ->required();
    variance->add_option("--sizes", sizes, "Training subsample sizes");
    variance->add_option("--repeats", repeats, "Subsets drawn per size")
        ->default_val(20);

    auto* eval = app.add_subcommand("eval-las",
                                    "Labeled attachment score of predicted vs gold");
    std::string gold_path, pred_path, granularity = "universal";
    std::string binned_out, eval_name = "-";
    eval->add_option("--gold", gold_path, "Gold CoNLL-U file")
        ->required()
        ->check(CLI::ExistingFile);
    eval->add_option("--pred", pred_path, "Predicted CoNLL-U file")
        ->required()
        ->check(CLI::ExistingFile);
    eval->add_option("--granularity", granularity, "universal or full")
        ->check(CLI::IsMember({"universal", "full"}));
    eval->add_option("--binned-out", binned_out,
                     "Write per-sentence-length LAS to this CSV");
    eval->add_option("--name", eval_name, "Treebank label used in --binned-out rows");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*measure) {
            if (format == "json") config.format = AnalysisConfig::Format::json;
            if (measure->count("--filter"))
                config.filter_list = measure->get_option("--filter")->as<std::string>();
            MeasureReport report = run_measure(config);
            write_measure_report(report, config);
            if (config.emit_binned) {
                CsvTable t;
                t.header = {"treebank", "length", "metric", "value", "count"};
                for (const MeasureRow& row : report.rows) {
                    Treebank tb = load_treebank_by_name(config, row.treebank);
                    BinSeries series =
                        binned_edv(tb, config.bin_lo, config.bin_hi, config.support);
                    for (const auto& [len, value] : series.values)
                        t.rows.push_back({row.treebank, std::to_string(len), "edv",
                                          format_value(value),
                                          std::to_string(series.counts.at(len))});
                }
                write_csv(t, config.output_dir / "binned_edv.csv");
            }
            std::cout << "measured " << report.rows.size() << " treebanks; mean EDV "
                      << format_value(report.mean_edv) << " (std "
                      << format_value(report.std_edv) << "), coverage "
                      << format_value(report.aggregate_coverage) << "\n";
            for (const auto& [name, what] : report.failures)
                std::cerr << "failed: " << name << ": " << what << "\n";
        } else if (*analyze) {
            if (analyze->count("--las"))
                config.las_table = analyze->get_option("--las")->as<std::string>();
            if (analyze->count("--binned-table"))
                config.binned_table =
                    analyze->get_option("--binned-table")->as<std::string>();
            for (const std::string& spec : fit_specs) {
                auto eq = spec.find('=');
                if (eq == std::string::npos)
                    throw DataError("bad --fit spec '" + spec + "'");
                std::string family = spec.substr(eq + 1);
                if (family != "linear" && family != "log_linear")
                    throw DataError("unknown fit family '" + family + "'");
                config.fit_families[spec.substr(0, eq)] =
                    family == "linear" ? FitFamily::linear : FitFamily::log_linear;
            }
            AnalyzeReport report = run_analyze(config, measure_table);
            write_analyze_report(report, config);
            std::cout << "analyzed " << report.n << " treebanks; reports in "
                      << config.output_dir.string() << "\n";
        } else if (*split) {
            SplitMode mode = split_mode == "min" ? SplitMode::min_edv : SplitMode::max_edv;
            SplitManifest manifest = run_split(config, split_treebank, mode);
            std::cout << "split " << manifest.treebank << " (" << split_mode
                      << "): train/dev/test " << manifest.sentence_counts[0] << "/"
                      << manifest.sentence_counts[1] << "/" << manifest.sentence_counts[2]
                      << ", achieved EDV " << format_value(manifest.achieved_edv) << "\n";
        } else if (*variance) {
            auto rows = run_variance(config, var_treebank, sizes, repeats);
            for (const VarianceRow& r : rows)
                std::cout << r.sample_size << ": mean EDV " << format_value(r.mean_edv)
                          << " std " << format_value(r.std_edv) << "\n";
        } else if (*eval) {
            auto gold = parse_file(gold_path, Strictness::strict);
            auto pred = parse_file(pred_path, Strictness::strict);
            auto gran = granularity == "full" ? LabelGranularity::full
                                              : LabelGranularity::universal;
            double las = evaluate_las(gold, pred, gran);
            std::cout << "LAS = " << format_value(las) << "\n";
            if (!binned_out.empty()) {
                BinSeries series =
                    binned_las(gold, pred, config.bin_lo, config.bin_hi, gran);
                CsvTable t;
                t.header = {"treebank", "length", "metric", "value", "count"};
                for (const auto& [len, value] : series.values)
                    t.rows.push_back({eval_name, std::to_string(len), "las",
                                      format_value(value),
                                      std::to_string(series.counts.at(len))});
                write_csv(t, binned_out);
            }
        }
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return 0;
}
