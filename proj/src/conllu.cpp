#include "edvkit/conllu.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iostream>
#include <sstream>

#include "edvkit/error.hpp"

namespace fs = std::filesystem;

namespace edvkit {

const std::vector<Sentence>& Treebank::split(const std::string& s) const {
    auto it = splits.find(s);
    if (it == splits.end())
        throw DataError("treebank '" + name + "' has no '" + s + "' split");
    return it->second;
}

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find('\t', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

bool parse_int(const std::string& s, int& out) {
    if (s.empty()) return false;
    int v = 0;
    for (char c : s) {
        if (c < '0' || c > '9') return false;
        v = v * 10 + (c - '0');
        if (v > 100000000) return false;
    }
    out = v;
    return true;
}

// MWT ranges look like "3-4", empty nodes like "3.1".
bool is_plain_word_id(const std::string& id) {
    return id.find('-') == std::string::npos && id.find('.') == std::string::npos;
}

std::vector<std::pair<std::string, std::string>> parse_feats(const std::string& col) {
    std::vector<std::pair<std::string, std::string>> out;
    if (col == "_" || col.empty()) return out;
    std::size_t start = 0;
    while (start <= col.size()) {
        std::size_t bar = col.find('|', start);
        std::string item = col.substr(start, bar == std::string::npos ? bar : bar - start);
        std::size_t eq = item.find('=');
        if (eq == std::string::npos)
            out.emplace_back(item, "");
        else
            out.emplace_back(item.substr(0, eq), item.substr(eq + 1));
        if (bar == std::string::npos) break;
        start = bar + 1;
    }
    return out;
}

std::string feats_to_column(const Token& t) {
    if (t.feats.empty()) return "_";
    std::string out;
    for (std::size_t i = 0; i < t.feats.size(); ++i) {
        if (i) out += '|';
        out += t.feats[i].first;
        if (!t.feats[i].second.empty()) {
            out += '=';
            out += t.feats[i].second;
        }
    }
    return out;
}

struct SentenceAccumulator {
    Sentence sent;
    std::string error;  // first structural problem seen while collecting

    void add_comment(const std::string& line) {
        sent.raw_comments.push_back(line);
        // "# sent_id = x"
        std::size_t i = 1;
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (line.compare(i, 7, "sent_id") == 0) {
            std::size_t eq = line.find('=', i);
            if (eq != std::string::npos) {
                std::size_t v = eq + 1;
                while (v < line.size() && std::isspace(static_cast<unsigned char>(line[v]))) ++v;
                std::size_t e = line.size();
                while (e > v && std::isspace(static_cast<unsigned char>(line[e - 1]))) --e;
                sent.sent_id = line.substr(v, e - v);
            }
        }
    }

    void add_token_line(const std::string& line, int lineno) {
        auto cols = split_tabs(line);
        if (cols.size() != 10) {
            note("line " + std::to_string(lineno) + ": expected 10 columns, got " +
                 std::to_string(cols.size()));
            return;
        }
        if (!is_plain_word_id(cols[0])) return;  // drop MWT ranges and empty nodes
        Token t;
        if (!parse_int(cols[0], t.id) || t.id < 1) {
            note("line " + std::to_string(lineno) + ": bad token id '" + cols[0] + "'");
            return;
        }
        t.form = cols[1];
        t.lemma = cols[2];
        t.upos = cols[3];
        t.xpos = cols[4];
        t.feats = parse_feats(cols[5]);
        if (!parse_int(cols[6], t.head)) {
            note("line " + std::to_string(lineno) + ": non-integer head '" + cols[6] + "'");
            return;
        }
        t.deprel = cols[7];
        t.deps = cols[8];
        t.misc = cols[9];
        sent.tokens.push_back(std::move(t));
    }

    void note(const std::string& msg) {
        if (error.empty()) error = msg;
    }
};

}  // namespace

std::string validate_sentence(const Sentence& s) {
    const auto& toks = s.tokens;
    if (toks.empty()) return "no tokens";
    int roots = 0;
    for (std::size_t i = 0; i < toks.size(); ++i) {
        const Token& t = toks[i];
        if (t.id != static_cast<int>(i) + 1)
            return "token ids not consecutive at position " + std::to_string(i + 1);
        if (t.head < 0 || t.head > static_cast<int>(toks.size()))
            return "head " + std::to_string(t.head) + " out of range for token " +
                   std::to_string(t.id);
        if (t.head == t.id) return "token " + std::to_string(t.id) + " is its own head";
        if (t.deprel.empty()) return "empty deprel on token " + std::to_string(t.id);
        if (t.head == 0) ++roots;
    }
    if (roots != 1) return "expected exactly one root, found " + std::to_string(roots);
    // Acyclicity: follow head pointers; must reach 0 within n steps.
    for (const Token& t : toks) {
        int cur = t.id;
        std::size_t steps = 0;
        while (cur != 0) {
            cur = toks[cur - 1].head;
            if (++steps > toks.size())
                return "cycle through token " + std::to_string(t.id);
        }
    }
    return "";
}

std::vector<Sentence> parse_stream(std::istream& in, Strictness strictness,
                                   const std::string& origin) {
    std::vector<Sentence> out;
    SentenceAccumulator acc;
    int lineno = 0;
    int sent_index = 0;
    std::size_t skipped = 0;

    auto flush = [&]() {
        if (acc.sent.tokens.empty() && acc.sent.raw_comments.empty() &&
            acc.error.empty()) {
            acc = {};
            return;
        }
        ++sent_index;
        std::string err = acc.error;
        if (err.empty())
            err = acc.sent.tokens.empty() ? "no token lines" : validate_sentence(acc.sent);
        if (!err.empty()) {
            std::string where = origin + ", sentence " + std::to_string(sent_index) +
                                (acc.sent.sent_id ? " (" + *acc.sent.sent_id + ")" : "");
            if (strictness == Strictness::strict)
                throw DataError(where + ": " + err);
            std::cerr << "warning: skipping " << where << ": " << err << "\n";
            ++skipped;
        } else {
            out.push_back(std::move(acc.sent));
        }
        acc = {};
    };

    std::string line;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) {
            flush();
        } else if (line[0] == '#') {
            acc.add_comment(line);
        } else {
            acc.add_token_line(line, lineno);
        }
    }
    flush();
    (void)skipped;
    return out;
}

std::vector<Sentence> parse_file(const fs::path& path, Strictness strictness) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    return parse_stream(in, strictness, path.filename().string());
}

void write_stream(const std::vector<Sentence>& sentences, std::ostream& out) {
    for (const Sentence& s : sentences) {
        for (const std::string& c : s.raw_comments) out << c << '\n';
        for (const Token& t : s.tokens) {
            out << t.id << '\t' << t.form << '\t' << t.lemma << '\t' << t.upos << '\t'
                << t.xpos << '\t' << feats_to_column(t) << '\t' << t.head << '\t'
                << t.deprel << '\t' << t.deps << '\t' << t.misc << '\n';
        }
        out << '\n';
    }
}

void write_file(const std::vector<Sentence>& sentences, const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open " + path.string() + " for writing");
    write_stream(sentences, out);
    if (!out) throw DataError("write failure on " + path.string());
}

std::vector<Treebank> discover_treebanks(const fs::path& root_dir) {
    if (!fs::is_directory(root_dir))
        throw DataError("not a directory: " + root_dir.string());
    std::vector<Treebank> out;
    std::vector<fs::path> dirs;
    for (const auto& e : fs::directory_iterator(root_dir))
        if (e.is_directory()) dirs.push_back(e.path());
    std::sort(dirs.begin(), dirs.end());
    for (const fs::path& dir : dirs) {
        Treebank tb;
        tb.name = dir.filename().string();
        for (const auto& f : fs::directory_iterator(dir)) {
            if (!f.is_regular_file()) continue;
            std::string fn = f.path().filename().string();
            for (const char* split : {"train", "dev", "test"}) {
                std::string suffix = std::string("-ud-") + split + ".conllu";
                if (fn.size() > suffix.size() &&
                    fn.compare(fn.size() - suffix.size(), suffix.size(), suffix) == 0)
                    tb.source_paths[split] = f.path();
            }
        }
        if (!tb.source_paths.empty()) out.push_back(std::move(tb));
    }
    return out;
}

void load_split(Treebank& tb, const std::string& split, Strictness strictness) {
    auto it = tb.source_paths.find(split);
    if (it == tb.source_paths.end())
        throw DataError("treebank '" + tb.name + "' has no '" + split + "' file");
    auto sentences = parse_file(it->second, strictness);
    if (sentences.empty())
        throw DataError("no sentences in " + it->second.string());
    tb.splits[split] = std::move(sentences);
}

void load_all_splits(Treebank& tb, Strictness strictness) {
    for (const auto& [split, path] : tb.source_paths) load_split(tb, split, strictness);
}

std::string normalized_treebank_name(const std::string& dir_name) {
    std::string s = dir_name;
    if (s.rfind("UD_", 0) == 0) s = s.substr(3);
    std::replace(s.begin(), s.end(), '_', ' ');
    return s;
}

namespace {
std::string universal_part(const std::string& deprel) {
    std::size_t colon = deprel.find(':');
    return colon == std::string::npos ? deprel : deprel.substr(0, colon);
}
}  // namespace

double evaluate_las(const std::vector<Sentence>& gold,
                    const std::vector<Sentence>& predicted,
                    LabelGranularity granularity) {
    if (gold.size() != predicted.size())
        throw DataError("sentence count mismatch: gold " + std::to_string(gold.size()) +
                        " vs predicted " + std::to_string(predicted.size()));
    std::uint64_t total = 0, correct = 0;
    for (std::size_t i = 0; i < gold.size(); ++i) {
        const auto& g = gold[i].tokens;
        const auto& p = predicted[i].tokens;
        if (g.size() != p.size())
            throw DataError("token count mismatch in sentence " + std::to_string(i + 1) +
                            (gold[i].sent_id ? " (" + *gold[i].sent_id + ")" : "") + ": gold " +
                            std::to_string(g.size()) + " vs predicted " +
                            std::to_string(p.size()));
        for (std::size_t j = 0; j < g.size(); ++j) {
            ++total;
            if (g[j].head != p[j].head) continue;
            bool label_ok = granularity == LabelGranularity::full
                                ? g[j].deprel == p[j].deprel
                                : universal_part(g[j].deprel) == universal_part(p[j].deprel);
            if (label_ok) ++correct;
        }
    }
    if (total == 0) throw DataError("no tokens to evaluate");
    return static_cast<double>(correct) / static_cast<double>(total);
}

std::string canonical_feats(const Token& t) {
    if (t.feats.empty()) return "_";
    auto sorted = t.feats;
    std::sort(sorted.begin(), sorted.end());
    std::string out;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (i) out += '|';
        out += sorted[i].first;
        if (!sorted[i].second.empty()) {
            out += '=';
            out += sorted[i].second;
        }
    }
    return out;
}

}  // namespace edvkit
