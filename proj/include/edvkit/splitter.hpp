#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "edvkit/conllu.hpp"
#include "edvkit/distribution.hpp"
#include "edvkit/statistics.hpp"

namespace edvkit {

enum class SplitMode { min_edv, max_edv };

inline const char* to_string(SplitMode m) {
    return m == SplitMode::min_edv ? "min" : "max";
}

// Engine id recorded in manifests; the mt19937_64 stream is fixed by the
// C++ standard and the bounded mapping is the Lemire multiply-shift, so
// splits are reproducible across implementations.
inline constexpr const char* kRngAlgorithm = "mt19937_64+lemire";

struct SplitResult {
    SplitMode mode = SplitMode::min_edv;
    std::vector<Sentence> train, dev, test;
    std::uint64_t seed = 0;
    double achieved_edv = 0.0;
    double achieved_slv = 0.0;
    std::array<std::size_t, 3> sentence_counts{0, 0, 0};  // train, dev, test
    std::string rng_algorithm = kRngAlgorithm;
};

// Per-length lists of (MED, pool index), sorted by (MED, pool index), with
// nearest/farthest queries that consume entries. Ties in MED distance break
// toward the smaller pool index; nearest-length ties toward the smaller
// length.
class MedIndex {
  public:
    explicit MedIndex(const std::vector<Sentence>& pool);

    std::size_t size() const { return size_; }
    bool empty() const { return size_ == 0; }
    std::vector<int> lengths() const;
    const std::vector<std::pair<double, int>>& bin(int length) const;

    int nearest_length(int target) const;
    // Both take from the bin of nearest_length(length_target).
    std::pair<double, int> take_nearest(int length_target, double med_target);
    std::pair<double, int> take_farthest(int length_target, double med_target);
    std::pair<double, int> take_at(int length, std::size_t pos);

  private:
    std::map<int, std::vector<std::pair<double, int>>> bins_;
    std::size_t size_ = 0;
};

// All splits concatenated (train, dev, test order), sentences with <= 2
// tokens removed. Throws DataError when nothing remains.
std::vector<Sentence> pool_treebank(const Treebank& tb);

// Deterministic MED-guided 60|20|20 split of the pool.
SplitResult generate_split(const std::vector<Sentence>& pool, SplitMode mode,
                           std::uint64_t seed, SupportWindow window = {});

// Per-treebank record of one generated split plus externally produced LAS.
struct SplitRecord {
    std::string treebank;
    double las = 0.0;
    double edv = 0.0;
    double slv = 0.0;
    double train_tokens = 0.0;
    double mean_len_test = 0.0;
};

struct DeltaRow {
    std::string treebank;
    double d_las, d_edv, d_slv, d_tokens, d_mean_len_test;
    double mean_tokens, mean_len_test;
};

struct LabeledCorrelation {
    std::string variable;
    std::string target;
    std::string covariate;  // empty when plain
    CorrelationResult result;
};

struct DeltaTable {
    std::vector<DeltaRow> rows;
    std::vector<LabeledCorrelation> correlations;
};

// Deltas are max-split value minus min-split value.
DeltaTable delta_statistics(const std::vector<SplitRecord>& min_records,
                            const std::vector<SplitRecord>& max_records);

struct VarianceRow {
    std::size_t sample_size = 0;
    double mean_edv = 0.0;
    double std_edv = 0.0;
    std::vector<double> values;
};

// For each size, draws `repeats` seeded uniform subsets of the training
// sentences (without replacement) and reports the EDV of each subset
// against the fixed test split.
std::vector<VarianceRow> variance_experiment(const std::vector<Sentence>& train,
                                             const std::vector<Sentence>& test,
                                             const std::vector<std::size_t>& sizes,
                                             std::size_t repeats, std::uint64_t seed,
                                             SupportWindow window = {});

// Uniform `size`-subsets of [0, n), sorted; redrawn on collision while the
// pool admits distinct subsets.
std::vector<std::vector<std::uint32_t>> draw_subsets(std::mt19937_64& rng,
                                                     std::size_t n, std::size_t size,
                                                     std::size_t repeats);

// Lemire multiply-shift bounded draw on a mt19937_64 stream.
std::uint64_t bounded_draw(std::mt19937_64& rng, std::uint64_t n);

}  // namespace edvkit
