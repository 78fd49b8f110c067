#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "edvkit/conllu.hpp"

namespace edvkit {

// Count tables a treebank's complexity metrics are computed from.
struct VocabProfile {
    std::map<std::string, std::uint64_t> form_counts;
    std::map<std::string, std::set<std::string>> lemma_to_forms;
    // delexicalized type (UPOS|feats) -> head UPOS tag -> count
    std::map<std::string, std::map<std::string, std::uint64_t>> delex_head_tags;
    std::uint64_t total_tokens = 0;
    std::uint64_t tokens_missing_lemma = 0;  // excluded from lemma_to_forms

    double missing_lemma_fraction() const {
        return total_tokens == 0
                   ? 0.0
                   : static_cast<double>(tokens_missing_lemma) / total_tokens;
    }
};

struct MorphologyOptions {
    bool lowercase_forms = false;  // default byte-exact comparison
};

struct ComplexityScores {
    double h_word_norm = 0.0;
    double ttr = 0.0;
    double f_l_norm = 0.0;
    double f_il_norm = 0.0;
    double hpe_norm = 0.0;
    double mc = 0.0;
    bool f_il_degenerate = false;  // no lemma had >= 2 forms
    double missing_lemma_fraction = 0.0;
};

VocabProfile build_profile(const std::vector<Sentence>& sentences,
                           const MorphologyOptions& opts = {});

// Word entropy divided by log2 |V|; requires |V| >= 2.
double word_entropy_norm(const VocabProfile& p);
// |V| / T.
double type_token_ratio(const VocabProfile& p);
// 1 - 1/(mean forms per lemma).
double form_lemma_ratio_norm(const VocabProfile& p);
// Same over lemmas with >= 2 forms; 0 (flagged) when none exist.
double inflected_form_lemma_ratio_norm(const VocabProfile& p, bool* degenerate = nullptr);
// 1 - mean normalized head-tag entropy per delexicalized type.
double head_pos_entropy_norm(const VocabProfile& p);

double aggregate_mc(const ComplexityScores& s);
ComplexityScores complexity_scores(const VocabProfile& p);

// Treebanks with mc strictly above the mean mc are "complex".
std::pair<std::set<std::string>, std::set<std::string>> complexity_split(
    const std::map<std::string, double>& treebank_mc);

}  // namespace edvkit
