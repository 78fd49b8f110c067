#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace edvkit {

// One syntactic word of a dependency tree. Multiword-token ranges ("1-2")
// and empty nodes ("1.1") are dropped at parse time, so `id` is always the
// 1-based surface position and `head` refers to another id (0 = root).
struct Token {
    int id = 0;
    std::string form;
    std::string lemma;
    std::string upos;
    std::string xpos;                                        // passthrough
    std::vector<std::pair<std::string, std::string>> feats;  // file order
    int head = -1;
    std::string deprel;
    std::string deps;  // passthrough
    std::string misc;  // passthrough

    bool operator==(const Token&) const = default;
};

struct Sentence {
    std::vector<Token> tokens;
    std::optional<std::string> sent_id;
    std::vector<std::string> raw_comments;  // verbatim '#' lines

    std::size_t size() const { return tokens.size(); }
};

struct Treebank {
    std::string name;  // directory name, e.g. "UD_Catalan-AnCora"
    std::map<std::string, std::vector<Sentence>> splits;  // "train"/"dev"/"test"
    std::map<std::string, std::filesystem::path> source_paths;

    bool has_split(const std::string& s) const { return splits.count(s) != 0; }
    const std::vector<Sentence>& split(const std::string& s) const;
};

enum class Strictness { strict, lenient };
enum class LabelGranularity { full, universal };

// Parses a CoNLL-U file into sentences of syntactic words.
// strict: any malformed sentence throws DataError.
// lenient: malformed sentences are skipped with a warning on stderr.
std::vector<Sentence> parse_file(const std::filesystem::path& path,
                                 Strictness strictness = Strictness::lenient);
std::vector<Sentence> parse_stream(std::istream& in, Strictness strictness,
                                   const std::string& origin = "<stream>");

// Validates tree structure; returns an error message or empty string.
std::string validate_sentence(const Sentence& s);

void write_file(const std::vector<Sentence>& sentences,
                const std::filesystem::path& path);
void write_stream(const std::vector<Sentence>& sentences, std::ostream& out);

// Scans the immediate subdirectories of root_dir for UD-style treebanks
// (files matching *-ud-{train,dev,test}.conllu). Splits are discovered but
// not parsed; use load_split / load_all_splits.
std::vector<Treebank> discover_treebanks(const std::filesystem::path& root_dir);
void load_split(Treebank& tb, const std::string& split,
                Strictness strictness = Strictness::lenient);
void load_all_splits(Treebank& tb, Strictness strictness = Strictness::lenient);

// "UD_Ancient_Greek-PROIEL" -> "Ancient Greek-PROIEL", for matching
// published treebank lists.
std::string normalized_treebank_name(const std::string& dir_name);

// Labeled attachment score: fraction of tokens whose head and deprel both
// match the gold annotation. `universal` compares the deprel part before
// the first ':'. Requires gold tokenization: equal sentence count and equal
// token count per sentence, else DataError naming the first mismatch.
double evaluate_las(const std::vector<Sentence>& gold,
                    const std::vector<Sentence>& predicted,
                    LabelGranularity granularity = LabelGranularity::universal);

// Canonical "a=x|b=y" feats string with keys sorted; "_" when empty.
std::string canonical_feats(const Token& t);

}  // namespace edvkit
