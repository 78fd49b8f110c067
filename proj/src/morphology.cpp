#include "edvkit/morphology.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "edvkit/error.hpp"

namespace edvkit {

namespace {

std::string lowercase(std::string s) {
    // Byte-wise ASCII lowering; callers wanting byte-exact keep the default.
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

double entropy_bits(const std::map<std::string, std::uint64_t>& counts,
                    std::uint64_t total) {
    double h = 0.0;
    for (const auto& [_, c] : counts) {
        double p = static_cast<double>(c) / static_cast<double>(total);
        h -= p * std::log2(p);
    }
    return h;
}

}  // namespace

VocabProfile build_profile(const std::vector<Sentence>& sentences,
                           const MorphologyOptions& opts) {
    VocabProfile p;
    for (const Sentence& s : sentences) {
        for (const Token& t : s.tokens) {
            std::string form = opts.lowercase_forms ? lowercase(t.form) : t.form;
            ++p.form_counts[form];
            ++p.total_tokens;
            if (t.lemma.empty() || t.lemma == "_") {
                ++p.tokens_missing_lemma;
            } else {
                std::string lemma = opts.lowercase_forms ? lowercase(t.lemma) : t.lemma;
                p.lemma_to_forms[lemma].insert(form);
            }
            std::string delex = t.upos + "|" + canonical_feats(t);
            std::string head_tag = t.head == 0 ? "ROOT" : s.tokens[t.head - 1].upos;
            ++p.delex_head_tags[delex][head_tag];
        }
    }
    return p;
}

double word_entropy_norm(const VocabProfile& p) {
    if (p.form_counts.size() < 2)
        throw NumericError("word_entropy_norm: needs a vocabulary of at least 2 forms");
    double h = entropy_bits(p.form_counts, p.total_tokens);
    return h / std::log2(static_cast<double>(p.form_counts.size()));
}

double type_token_ratio(const VocabProfile& p) {
    if (p.total_tokens == 0) throw NumericError("type_token_ratio: empty profile");
    return static_cast<double>(p.form_counts.size()) /
           static_cast<double>(p.total_tokens);
}

double form_lemma_ratio_norm(const VocabProfile& p) {
    if (p.lemma_to_forms.empty())
        throw NumericError("form_lemma_ratio_norm: no lemmas in profile");
    double total_forms = 0.0;
    for (const auto& [_, forms] : p.lemma_to_forms) total_forms += forms.size();
    double fl = total_forms / static_cast<double>(p.lemma_to_forms.size());
    return 1.0 - 1.0 / fl;
}

double inflected_form_lemma_ratio_norm(const VocabProfile& p, bool* degenerate) {
    double total_forms = 0.0;
    std::uint64_t inflected = 0;
    for (const auto& [_, forms] : p.lemma_to_forms) {
        if (forms.size() < 2) continue;
        total_forms += forms.size();
        ++inflected;
    }
    if (degenerate) *degenerate = inflected == 0;
    if (inflected == 0) return 0.0;
    double fil = total_forms / static_cast<double>(inflected);
    return 1.0 - 1.0 / fil;
}

double head_pos_entropy_norm(const VocabProfile& p) {
    if (p.delex_head_tags.empty())
        throw NumericError("head_pos_entropy_norm: empty profile");
    double sum = 0.0;
    for (const auto& [_, tags] : p.delex_head_tags) {
        if (tags.size() < 2) continue;  // single observed head tag: entropy 0
        std::uint64_t total = 0;
        for (const auto& [_t, c] : tags) total += c;
        sum += entropy_bits(tags, total) / std::log2(static_cast<double>(tags.size()));
    }
    return 1.0 - sum / static_cast<double>(p.delex_head_tags.size());
}

double aggregate_mc(const ComplexityScores& s) {
    return (s.h_word_norm + s.ttr + s.f_l_norm + s.f_il_norm + s.hpe_norm) / 5.0;
}

ComplexityScores complexity_scores(const VocabProfile& p) {
    ComplexityScores s;
    s.h_word_norm = word_entropy_norm(p);
    s.ttr = type_token_ratio(p);
    s.f_l_norm = form_lemma_ratio_norm(p);
    s.f_il_norm = inflected_form_lemma_ratio_norm(p, &s.f_il_degenerate);
    s.hpe_norm = head_pos_entropy_norm(p);
    s.mc = aggregate_mc(s);
    s.missing_lemma_fraction = p.missing_lemma_fraction();
    return s;
}

std::pair<std::set<std::string>, std::set<std::string>> complexity_split(
    const std::map<std::string, double>& treebank_mc) {
    if (treebank_mc.size() < 2)
        throw NumericError("complexity_split: need at least 2 treebanks");
    double sum = 0.0;
    for (const auto& [_, mc] : treebank_mc) sum += mc;
    double mean_mc = sum / static_cast<double>(treebank_mc.size());
    std::set<std::string> complex_set, not_complex;
    for (const auto& [name, mc] : treebank_mc)
        (mc > mean_mc ? complex_set : not_complex).insert(name);
    return {complex_set, not_complex};
}

}  // namespace edvkit
