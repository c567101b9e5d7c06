// abl: command-line driver for alignment-based grammar learning.
//
// Exit status: 0 success, 1 usage, 2 unreadable or malformed input,
// 3 internal error.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "abl/alignment.hpp"
#include "abl/corpus.hpp"
#include "abl/error.hpp"
#include "abl/evaluation.hpp"
#include "abl/grammar.hpp"
#include "abl/hypothesis.hpp"
#include "abl/parallel.hpp"
#include "abl/pipeline.hpp"
#include "abl/selection.hpp"
#include "abl/treebank.hpp"

namespace {

using namespace abl;

// Unreadable input files.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw InputError("error reading '" + path + "'");
    return ss.str();
}

// Format errors get the file name prepended.
template <typename Fn>
auto load(const std::string& path, Fn&& parse) {
    const std::string text = read_file(path);
    try {
        return parse(text);
    } catch (const FormatError& e) {
        throw FormatError(0, path + ": " + e.what());
    }
}

Corpus load_corpus(const std::string& path) {
    return load(path, [](const std::string& t) { return parse_plain_corpus(t).sentences; });
}

Treebank load_treebank(const std::string& path) {
    return load(path, [](const std::string& t) { return parse_treebank(t); });
}

// Outputs are collected in memory and written only once the command has
// succeeded; if a write fails, files written so far are removed again.
class Outputs {
public:
    void add(const std::string& path, std::string content) { files_.emplace_back(path, std::move(content)); }

    void commit() {
        std::vector<std::string> written;
        for (const auto& [path, content] : files_) {
            if (path.empty() || path == "-") {
                std::cout << content << std::flush;
                continue;
            }
            std::ofstream out(path, std::ios::binary | std::ios::trunc);
            if (out) {
                written.push_back(path);
                out << content;
                out.close();
            }
            if (!out) {
                for (const auto& w : written) std::filesystem::remove(w);
                throw InputError("cannot write '" + path + "'");
            }
        }
    }

private:
    std::vector<std::pair<std::string, std::string>> files_;
};

struct Options {
    RunConfig config;
    std::string alignment = "default";
    std::string selection = "leaf";
    std::string grammar = "scfg";
    bool no_extended = false;

    std::string input;
    std::string output;
    std::string gold;
    std::vector<std::string> learned;
    std::string grammar_file;
    std::string scores;
    std::string grammar_out;
    std::size_t step = 0;
};

void add_alignment_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--alignment", o.alignment, "Alignment instance: default, biased or all")
        ->check(CLI::IsMember({"default", "biased", "all"}));
    cmd->add_flag("--fold-case", o.config.fold_case, "Compare words case-insensitively while aligning");
}

void add_selection_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--selection", o.selection, "Selection model: first, leaf or branch")
        ->check(CLI::IsMember({"first", "incr", "leaf", "branch"}));
    cmd->add_flag("--no-extended", o.no_extended, "Do not prefer larger sets among equally scored ones");
    cmd->add_option("--seed", o.config.seed, "Random seed");
}

void add_learning_flags(CLI::App* cmd, Options& o) {
    add_alignment_flags(cmd, o);
    add_selection_flags(cmd, o);
    cmd->add_flag("--reparse", o.config.reparse, "Reparse the corpus with the SCFG of the learned treebank");
}

void add_score_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--beta", o.config.score.beta, "Weight of recall in the F-score")->check(CLI::PositiveNumber);
    cmd->add_flag("--exclude-root", o.config.score.exclude_root, "Do not score spans covering the whole sentence");
    cmd->add_flag("--exclude-single", o.config.score.exclude_single, "Do not score one-word spans");
}

void finish_config(Options& o) {
    o.config.alignment = parse_alignment_instance(o.alignment);
    o.config.selection = parse_selection_model(o.selection);
    o.config.extended = !o.no_extended;
    o.config.grammar = parse_grammar_kind(o.grammar);
    o.config.threads = default_threads();
}

std::string grammar_text(const Treebank& tb, const RunConfig& c) {
    return c.grammar == GrammarKind::Stsg ? serialize_stsg(extract_stsg(tb, c.max_depth)) : serialize_scfg(extract_scfg(tb));
}

// Sentences without a parse get a flat tree under the most probable root label.
Tree flat_tree(const Sentence& s, const Scfg& g) {
    std::string label = "1";
    double best = -1;
    for (const auto& [l, p] : g.start_probabilities())
        if (p > best) {
            best = p;
            label = l;
        }
    return Tree{s, {{0, s.size(), label}}};
}

int run(int argc, char** argv) {
    CLI::App app{"Alignment-based learning of constituent structure from plain text"};
    app.require_subcommand(1);
    Options o;

    auto* align = app.add_subcommand("align", "Corpus to hypothesis space");
    align->add_option("-i,--input", o.input, "Plain corpus, one sentence per line")->required();
    align->add_option("-o,--output", o.output, "Hypothesis space (default stdout)");
    add_alignment_flags(align, o);

    auto* sel = app.add_subcommand("select", "Hypothesis space to treebank");
    sel->add_option("-i,--input", o.input, "Hypothesis space")->required();
    sel->add_option("-o,--output", o.output, "Treebank (default stdout)");
    add_selection_flags(sel, o);

    auto* extract = app.add_subcommand("extract-grammar", "Treebank to grammar");
    extract->add_option("-i,--input", o.input, "Treebank")->required();
    extract->add_option("-o,--output", o.output, "Grammar (default stdout)");
    extract->add_option("--grammar", o.grammar, "Grammar type: scfg or stsg")->check(CLI::IsMember({"scfg", "stsg"}));
    extract->add_option("--max-depth", o.config.max_depth, "Deepest elementary tree for stsg, 0 for no bound");

    auto* parse = app.add_subcommand("parse", "Parse a corpus with an SCFG");
    parse->add_option("-g,--grammar-file", o.grammar_file, "SCFG file from extract-grammar")->required();
    parse->add_option("-i,--input", o.input, "Plain corpus")->required();
    parse->add_option("-o,--output", o.output, "Treebank (default stdout)");

    auto* baseline = app.add_subcommand("baseline", "Random left/right branching treebank");
    baseline->add_option("-i,--input", o.input, "Plain corpus")->required();
    baseline->add_option("-o,--output", o.output, "Treebank (default stdout)");
    baseline->add_option("--seed", o.config.seed, "Random seed");

    auto* eval = app.add_subcommand("eval", "Score treebanks against a gold treebank");
    eval->add_option("--gold", o.gold, "Gold treebank")->required();
    eval->add_option("--learned", o.learned, "Learned treebank; repeat for several runs")->required();
    eval->add_option("-o,--output", o.output, "Scores CSV (default stdout)");
    add_score_flags(eval, o);

    auto* curve = app.add_subcommand("curve", "Learning curve over growing corpus prefixes");
    curve->add_option("--gold", o.gold, "Gold treebank; its yields form the corpus")->required();
    curve->add_option("--step", o.step, "Prefix size increment")->required()->check(CLI::PositiveNumber);
    curve->add_option("-o,--output", o.output, "Curve CSV (default stdout)");
    add_learning_flags(curve, o);
    add_score_flags(curve, o);

    auto* pipe = app.add_subcommand("pipeline", "Align, select, optionally extract and reparse, then score");
    pipe->add_option("-i,--input", o.input, "Plain corpus (default: yields of --gold)");
    pipe->add_option("--gold", o.gold, "Gold treebank to score against");
    pipe->add_option("-o,--output", o.output, "Learned treebank of the first run (default stdout)");
    pipe->add_option("--scores", o.scores, "Scores CSV, one row per run");
    pipe->add_option("--grammar-out", o.grammar_out, "Grammar extracted from the first run");
    pipe->add_option("--grammar", o.grammar, "Grammar type for --grammar-out: scfg or stsg")
        ->check(CLI::IsMember({"scfg", "stsg"}));
    pipe->add_option("--max-depth", o.config.max_depth, "Deepest elementary tree for stsg, 0 for no bound");
    pipe->add_option("--runs", o.config.runs, "Number of runs")->check(CLI::PositiveNumber);
    pipe->add_flag("--shuffle", o.config.shuffle, "Present the corpus in a different seeded order per run");
    add_learning_flags(pipe, o);
    add_score_flags(pipe, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    finish_config(o);
    RunConfig& c = o.config;
    Outputs out;

    if (*align) {
        const Corpus corpus = load_corpus(o.input);
        const HypothesisSpace space = alignment_learning(corpus, {c.alignment, c.fold_case, c.threads});
        out.add(o.output, config_header(c, "align") + serialize_space(space));
    } else if (*sel) {
        const HypothesisSpace space = load(o.input, [](const std::string& t) { return parse_space(t); });
        out.add(o.output, config_header(c, "select") + serialize_treebank(select(space, {c.selection, c.extended, c.seed, c.threads})));
    } else if (*extract) {
        const Treebank tb = load_treebank(o.input);
        out.add(o.output, config_header(c, "extract-grammar") + grammar_text(tb, c));
    } else if (*parse) {
        const Scfg g = load(o.grammar_file, [](const std::string& t) { return parse_scfg(t); });
        const Corpus corpus = load_corpus(o.input);
        const CkyParser parser(g);
        Treebank tb(corpus.size());
        std::size_t failed = 0;
        for (std::size_t k = 0; k < corpus.size(); ++k) {
            if (auto r = parser.parse(corpus[k])) {
                tb[k] = std::move(r->tree);
            } else {
                tb[k] = flat_tree(corpus[k], g);
                ++failed;
            }
        }
        if (failed) std::cerr << "abl: " << failed << " sentence(s) without a parse got a flat tree\n";
        out.add(o.output, config_header(c, "parse") + serialize_treebank(tb));
    } else if (*baseline) {
        const Corpus corpus = load_corpus(o.input);
        out.add(o.output, config_header(c, "baseline") + serialize_treebank(random_baseline(corpus, c.seed)));
    } else if (*eval) {
        const Treebank gold = load_treebank(o.gold);
        std::vector<BracketScore> scores;
        for (const auto& path : o.learned) {
            const BracketScore s = score_treebank(gold, load_treebank(path), c.score);
            if (s.no_learned) std::cerr << "abl: '" << path << "' has no scored constituents; precision set to 0\n";
            scores.push_back(s);
        }
        out.add(o.output, config_header(c, "eval") + runs_csv(scores));
    } else if (*curve) {
        const Treebank gold = load_treebank(o.gold);
        Corpus corpus;
        for (const auto& t : gold) corpus.push_back(t.sentence);
        const auto points = learning_curve(
            corpus, gold, o.step, [&](const Corpus& prefix) { return learn_treebank(prefix, c, c.seed); }, c.score);
        out.add(o.output, config_header(c, "curve") + curve_csv(points));
    } else if (*pipe) {
        if (o.input.empty() && o.gold.empty()) throw CLI::RequiredError("--input or --gold");
        Treebank gold;
        if (!o.gold.empty()) gold = load_treebank(o.gold);
        Corpus corpus;
        if (!o.input.empty()) {
            corpus = load_corpus(o.input);
        } else {
            for (const auto& t : gold) corpus.push_back(t.sentence);
        }
        const auto runs = run_pipeline(corpus, c, o.gold.empty() ? nullptr : &gold);
        const std::string header = config_header(c, "pipeline");
        out.add(o.output, header + serialize_treebank(runs.front().treebank));
        if (!o.grammar_out.empty()) out.add(o.grammar_out, header + grammar_text(runs.front().treebank, c));
        if (!o.scores.empty()) {
            if (o.gold.empty()) throw std::invalid_argument("--scores needs --gold");
            std::vector<BracketScore> scores;
            for (const auto& r : runs) scores.push_back(*r.score);
            out.add(o.scores, header + runs_csv(scores));
        }
    }
    out.commit();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const CLI::Error& e) {
        std::cerr << "abl: " << e.what() << "\n";
        return 1;
    } catch (const InputError& e) {
        std::cerr << "abl: " << e.what() << "\n";
        return 2;
    } catch (const FormatError& e) {
        std::cerr << "abl: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "abl: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "abl: internal error: " << e.what() << "\n";
        return 3;
    }
}
