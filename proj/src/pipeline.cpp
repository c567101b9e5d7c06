#include "abl/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <stdexcept>

#include "abl/grammar.hpp"
#include "abl/rng.hpp"

namespace abl {

std::string_view to_string(GrammarKind kind) {
    switch (kind) {
        case GrammarKind::None: return "none";
        case GrammarKind::Scfg: return "scfg";
        case GrammarKind::Stsg: return "stsg";
    }
    return "?";
}

GrammarKind parse_grammar_kind(std::string_view name) {
    if (name == "none") return GrammarKind::None;
    if (name == "scfg") return GrammarKind::Scfg;
    if (name == "stsg") return GrammarKind::Stsg;
    throw std::invalid_argument("unknown grammar kind '" + std::string(name) + "'");
}

std::string system_name(const RunConfig& config) {
    std::string name(to_string(config.alignment));
    name += ':';
    name += to_string(config.selection);
    if (config.selection != SelectionModel::First && config.extended) name += '+';
    return name;
}

std::string config_header(const RunConfig& c, const std::string& command) {
    std::string h = "# config: command=" + command;
    h += " system=" + system_name(c);
    h += " fold_case=" + std::to_string(c.fold_case ? 1 : 0);
    h += " grammar=" + std::string(to_string(c.grammar));
    h += " max_depth=" + std::to_string(c.max_depth);
    h += " reparse=" + std::to_string(c.reparse ? 1 : 0);
    h += " seed=" + std::to_string(c.seed);
    h += " runs=" + std::to_string(c.runs);
    h += " shuffle=" + std::to_string(c.shuffle ? 1 : 0);
    h += " exclude_root=" + std::to_string(c.score.exclude_root ? 1 : 0);
    h += " exclude_single=" + std::to_string(c.score.exclude_single ? 1 : 0);
    char beta[32];
    std::snprintf(beta, sizeof beta, "%g", c.score.beta);
    h += " beta=";
    h += beta;
    h += '\n';
    return h;
}

std::uint64_t run_seed(std::uint64_t seed, std::size_t run) { return run == 0 ? seed : splitmix64(seed + run); }

std::vector<std::size_t> run_order(const RunConfig& config, std::size_t size, std::size_t run) {
    std::vector<std::size_t> order(size);
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (!config.shuffle) return order;
    // Fisher-Yates with raw engine output, so orders match across platforms
    auto rng = stream_for(run_seed(config.seed, run), ~std::uint64_t{0});
    for (std::size_t i = size; i > 1; --i) std::swap(order[i - 1], order[rng() % i]);
    return order;
}

Treebank learn_treebank(const Corpus& corpus, const RunConfig& config, std::uint64_t seed) {
    const HypothesisSpace space = alignment_learning(corpus, {config.alignment, config.fold_case, config.threads});
    Treebank tb = select(space, {config.selection, config.extended, seed, config.threads});
    if (config.reparse) tb = reparse_corpus(tb, config.threads);
    return tb;
}

std::vector<PipelineRun> run_pipeline(const Corpus& corpus, const RunConfig& config, const Treebank* gold) {
    if (config.runs == 0) throw std::invalid_argument("at least one run is required");
    std::vector<PipelineRun> runs;
    for (std::size_t r = 0; r < config.runs; ++r) {
        const auto order = run_order(config, corpus.size(), r);
        Corpus presented;
        presented.reserve(corpus.size());
        for (std::size_t k : order) presented.push_back(corpus[k]);
        Treebank learned = learn_treebank(presented, config, run_seed(config.seed, r));
        PipelineRun run;
        run.treebank.resize(corpus.size());
        for (std::size_t k = 0; k < order.size(); ++k) run.treebank[order[k]] = std::move(learned[k]);
        if (gold) run.score = score_treebank(*gold, run.treebank, config.score);
        runs.push_back(std::move(run));
    }
    return runs;
}

}  // namespace abl
