#include "edvkit/splitter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "edvkit/divergence.hpp"
#include "edvkit/error.hpp"
#include "edvkit/numeric.hpp"

namespace edvkit {

std::uint64_t bounded_draw(std::mt19937_64& rng, std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(rng()) * n) >> 64);
}

MedIndex::MedIndex(const std::vector<Sentence>& pool) {
    for (std::size_t i = 0; i < pool.size(); ++i) {
        const Sentence& s = pool[i];
        bins_[static_cast<int>(s.tokens.size())].emplace_back(med(s).value,
                                                              static_cast<int>(i));
    }
    for (auto& [_, bin] : bins_) std::sort(bin.begin(), bin.end());
    size_ = pool.size();
}

std::vector<int> MedIndex::lengths() const {
    std::vector<int> out;
    out.reserve(bins_.size());
    for (const auto& [len, _] : bins_) out.push_back(len);
    return out;
}

const std::vector<std::pair<double, int>>& MedIndex::bin(int length) const {
    return bins_.at(length);
}

int MedIndex::nearest_length(int target) const {
    if (bins_.empty()) throw NumericError("MedIndex exhausted");
    auto hi = bins_.lower_bound(target);
    if (hi != bins_.end() && hi->first == target) return target;
    if (hi == bins_.begin()) return hi->first;
    auto lo = std::prev(hi);
    if (hi == bins_.end()) return lo->first;
    int d_lo = target - lo->first, d_hi = hi->first - target;
    return d_lo <= d_hi ? lo->first : hi->first;  // tie: smaller length
}

std::pair<double, int> MedIndex::take_at(int length, std::size_t pos) {
    auto& bin = bins_[length];
    auto entry = bin[pos];
    bin.erase(bin.begin() + static_cast<std::ptrdiff_t>(pos));
    if (bin.empty()) bins_.erase(length);
    --size_;
    return entry;
}

namespace {

// First position of the run of equal MED values containing `pos`; entries in
// a run are ordered by pool index, so the run head carries the smallest.
std::size_t run_start(const std::vector<std::pair<double, int>>& bin, std::size_t pos) {
    while (pos > 0 && bin[pos - 1].first == bin[pos].first) --pos;
    return pos;
}

}  // namespace

std::pair<double, int> MedIndex::take_nearest(int length_target, double med_target) {
    int length = nearest_length(length_target);
    const auto& bin = bins_.at(length);
    auto it = std::lower_bound(bin.begin(), bin.end(),
                               std::make_pair(med_target, std::numeric_limits<int>::min()));
    std::size_t right = static_cast<std::size_t>(it - bin.begin());
    bool has_right = right < bin.size();
    bool has_left = right > 0;
    std::size_t pick;
    if (has_left && has_right) {
        std::size_t left = run_start(bin, right - 1);
        double d_left = std::abs(bin[left].first - med_target);
        double d_right = std::abs(bin[right].first - med_target);
        if (d_left < d_right)
            pick = left;
        else if (d_right < d_left)
            pick = right;
        else
            pick = bin[left].second < bin[right].second ? left : right;
    } else if (has_right) {
        pick = right;
    } else {
        pick = run_start(bin, right - 1);
    }
    return take_at(length, pick);
}

std::pair<double, int> MedIndex::take_farthest(int length_target, double med_target) {
    int length = nearest_length(length_target);
    const auto& bin = bins_.at(length);
    std::size_t lo = 0;
    std::size_t hi = run_start(bin, bin.size() - 1);
    double d_lo = std::abs(bin[lo].first - med_target);
    double d_hi = std::abs(bin[hi].first - med_target);
    std::size_t pick;
    if (d_lo > d_hi)
        pick = lo;
    else if (d_hi > d_lo)
        pick = hi;
    else
        pick = bin[lo].second <= bin[hi].second ? lo : hi;
    return take_at(length, pick);
}

std::vector<Sentence> pool_treebank(const Treebank& tb) {
    if (tb.splits.empty()) throw DataError("treebank '" + tb.name + "' has no splits");
    std::vector<Sentence> pool;
    for (const char* split : {"train", "dev", "test"}) {
        auto it = tb.splits.find(split);
        if (it == tb.splits.end()) continue;
        for (const Sentence& s : it->second)
            if (s.tokens.size() > 2) pool.push_back(s);
    }
    if (pool.empty())
        throw DataError("treebank '" + tb.name +
                        "' has no sentences with more than 2 tokens");
    return pool;
}

SplitResult generate_split(const std::vector<Sentence>& pool, SplitMode mode,
                           std::uint64_t seed, SupportWindow window) {
    const std::size_t n = pool.size();
    if (n < 10) throw DataError("split pool too small: " + std::to_string(n) + " < 10");
    for (const Sentence& s : pool)
        if (s.tokens.size() <= 2)
            throw DataError("split pool contains a sentence with <= 2 tokens");

    std::mt19937_64 rng(seed);
    MedIndex index(pool);

    std::vector<int> train_idx, test_idx;
    double med_sum = 0.0;

    auto add_train = [&](std::pair<double, int> taken) {
        med_sum += taken.first;
        train_idx.push_back(taken.second);
    };

    // Initialization: a random length, then a random sentence of that length;
    // its MED seeds the target.
    std::vector<int> lengths = index.lengths();
    int length0 = lengths[bounded_draw(rng, lengths.size())];
    {
        const auto& bin = index.bin(length0);
        std::size_t pos = bounded_draw(rng, bin.size());
        add_train(index.take_at(length0, pos));
    }
    double round_target = med_sum;  // the seed sentence's MED

    bool first_round = true;
    while (true) {
        std::size_t train_draws = first_round ? 3 : 4;
        if (!first_round) {
            if (index.size() < 5) break;
            round_target = med_sum / static_cast<double>(train_idx.size());
        }
        for (std::size_t i = 0; i < train_draws; ++i)
            add_train(index.take_nearest(length0, round_target));
        double running_mean = med_sum / static_cast<double>(train_idx.size());
        auto test_taken = mode == SplitMode::min_edv
                              ? index.take_nearest(length0, running_mean)
                              : index.take_farthest(length0, running_mean);
        test_idx.push_back(test_taken.second);
        first_round = false;
    }
    // Leftovers (< 5) go to train, in pool order.
    {
        std::set<int> used(train_idx.begin(), train_idx.end());
        used.insert(test_idx.begin(), test_idx.end());
        for (std::size_t i = 0; i < n; ++i)
            if (!used.count(static_cast<int>(i))) train_idx.push_back(static_cast<int>(i));
    }

    // Dev carve: every 4th training sentence in accumulation order, cycling
    // over the remainder until dev holds ~20% of the pool.
    std::size_t dev_target = (n + 2) / 5;
    std::vector<int> dev_idx;
    std::vector<char> moved(train_idx.size(), 0);
    while (dev_idx.size() < dev_target) {
        std::size_t countdown = 3;  // take every 4th remaining
        bool took_any = false;
        for (std::size_t i = 0; i < train_idx.size() && dev_idx.size() < dev_target; ++i) {
            if (moved[i]) continue;
            if (countdown == 0) {
                moved[i] = 1;
                dev_idx.push_back(train_idx[i]);
                took_any = true;
                countdown = 3;
            } else {
                --countdown;
            }
        }
        if (!took_any) break;  // fewer than 4 sentences left per stride pass
    }
    std::vector<int> final_train;
    for (std::size_t i = 0; i < train_idx.size(); ++i)
        if (!moved[i]) final_train.push_back(train_idx[i]);

    SplitResult result;
    result.mode = mode;
    result.seed = seed;
    for (int i : final_train) result.train.push_back(pool[static_cast<std::size_t>(i)]);
    for (int i : dev_idx) result.dev.push_back(pool[static_cast<std::size_t>(i)]);
    for (int i : test_idx) result.test.push_back(pool[static_cast<std::size_t>(i)]);
    result.sentence_counts = {result.train.size(), result.dev.size(), result.test.size()};
    result.achieved_edv = edv(result.train, result.test, window);
    result.achieved_slv = slv(result.train, result.test);
    return result;
}

DeltaTable delta_statistics(const std::vector<SplitRecord>& min_records,
                            const std::vector<SplitRecord>& max_records) {
    std::map<std::string, const SplitRecord*> max_by_name;
    for (const SplitRecord& r : max_records) max_by_name[r.treebank] = &r;
    if (min_records.size() != max_records.size())
        throw DataError("delta_statistics: unpaired records (" +
                        std::to_string(min_records.size()) + " min vs " +
                        std::to_string(max_records.size()) + " max)");

    DeltaTable table;
    for (const SplitRecord& lo : min_records) {
        auto it = max_by_name.find(lo.treebank);
        if (it == max_by_name.end())
            throw DataError("delta_statistics: no max-split record for treebank '" +
                            lo.treebank + "'");
        const SplitRecord& hi = *it->second;
        DeltaRow row;
        row.treebank = lo.treebank;
        row.d_las = hi.las - lo.las;
        row.d_edv = hi.edv - lo.edv;
        row.d_slv = hi.slv - lo.slv;
        row.d_tokens = hi.train_tokens - lo.train_tokens;
        row.d_mean_len_test = hi.mean_len_test - lo.mean_len_test;
        row.mean_tokens = 0.5 * (hi.train_tokens + lo.train_tokens);
        row.mean_len_test = 0.5 * (hi.mean_len_test + lo.mean_len_test);
        table.rows.push_back(row);
    }

    auto column = [&](auto member) {
        std::vector<double> v;
        v.reserve(table.rows.size());
        for (const DeltaRow& r : table.rows) v.push_back(r.*member);
        return v;
    };
    auto d_las = column(&DeltaRow::d_las);
    auto d_edv = column(&DeltaRow::d_edv);
    auto d_slv = column(&DeltaRow::d_slv);
    auto d_tokens = column(&DeltaRow::d_tokens);
    auto d_ltest = column(&DeltaRow::d_mean_len_test);
    auto mean_tokens = column(&DeltaRow::mean_tokens);
    auto mean_ltest = column(&DeltaRow::mean_len_test);

    // Constant columns (e.g. all deltas zero) make a correlation undefined;
    // such rows are omitted rather than failing the whole battery.
    auto plain = [&](const std::string& var, const std::vector<double>& x,
                     const std::string& target, const std::vector<double>& y) {
        try {
            table.correlations.push_back({var, target, "", spearman(x, y)});
        } catch (const NumericError&) {
        }
    };
    auto partial = [&](const std::string& var, const std::vector<double>& x,
                       const std::string& target, const std::vector<double>& y,
                       const std::string& cov_name, const std::vector<double>& cov) {
        try {
            table.correlations.push_back(
                {var, target, cov_name, partial_spearman(x, y, {cov}, {cov_name})});
        } catch (const NumericError&) {
        }
    };
    plain("train_tokens", mean_tokens, "d_las", d_las);
    plain("mean_len_test", mean_ltest, "d_las", d_las);
    plain("d_tokens", d_tokens, "d_las", d_las);
    plain("d_mean_len_test", d_ltest, "d_las", d_las);
    plain("d_slv", d_slv, "d_las", d_las);
    plain("d_edv", d_edv, "d_las", d_las);
    plain("mean_len_test", mean_ltest, "d_edv", d_edv);
    plain("d_slv", d_slv, "d_edv", d_edv);
    partial("d_edv", d_edv, "d_las", d_las, "mean_len_test", mean_ltest);
    partial("d_edv", d_edv, "d_las", d_las, "d_slv", d_slv);
    return table;
}

std::vector<std::vector<std::uint32_t>> draw_subsets(std::mt19937_64& rng, std::size_t n,
                                                     std::size_t size,
                                                     std::size_t repeats) {
    std::vector<std::vector<std::uint32_t>> out;
    std::set<std::vector<std::uint32_t>> seen;
    const bool can_be_distinct = size < n;
    for (std::size_t rep = 0; rep < repeats; ++rep) {
        std::vector<std::uint32_t> idx;
        for (int attempt = 0; attempt < 64; ++attempt) {
            // Partial Fisher-Yates over a fresh index array.
            std::vector<std::uint32_t> all(n);
            std::iota(all.begin(), all.end(), 0);
            for (std::size_t i = 0; i < size; ++i) {
                std::size_t j = i + bounded_draw(rng, n - i);
                std::swap(all[i], all[j]);
            }
            idx.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(size));
            std::sort(idx.begin(), idx.end());
            if (!can_be_distinct || seen.insert(idx).second) break;
        }
        out.push_back(std::move(idx));
    }
    return out;
}

std::vector<VarianceRow> variance_experiment(const std::vector<Sentence>& train,
                                             const std::vector<Sentence>& test,
                                             const std::vector<std::size_t>& sizes,
                                             std::size_t repeats, std::uint64_t seed,
                                             SupportWindow window) {
    const std::size_t n = train.size();
    for (std::size_t size : sizes)
        if (size > n)
            throw DataError("variance_experiment: sample size " + std::to_string(size) +
                            " exceeds training sentences (" + std::to_string(n) + ")");
    auto test_dist = displacement_distribution(test, window).dist;

    std::mt19937_64 rng(seed);
    std::vector<VarianceRow> out;
    for (std::size_t size : sizes) {
        VarianceRow row;
        row.sample_size = size;
        for (const auto& idx : draw_subsets(rng, n, size, repeats)) {
            std::vector<Sentence> subset;
            subset.reserve(size);
            for (std::uint32_t i : idx) subset.push_back(train[i]);
            row.values.push_back(
                vaserstein(displacement_distribution(subset, window).dist, test_dist));
        }
        row.mean_edv = mean(row.values);
        row.std_edv = row.values.size() > 1 ? stdev(row.values) : 0.0;
        out.push_back(std::move(row));
    }
    return out;
}

}  // namespace edvkit
