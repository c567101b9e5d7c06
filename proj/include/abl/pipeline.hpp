#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "abl/alignment.hpp"
#include "abl/corpus.hpp"
#include "abl/evaluation.hpp"
#include "abl/selection.hpp"
#include "abl/treebank.hpp"

namespace abl {

enum class GrammarKind { None, Scfg, Stsg };

std::string_view to_string(GrammarKind kind);
GrammarKind parse_grammar_kind(std::string_view name);

struct RunConfig {
    AlignmentInstance alignment = AlignmentInstance::Default;
    SelectionModel selection = SelectionModel::Leaf;
    bool extended = true;
    bool fold_case = false;
    GrammarKind grammar = GrammarKind::None;
    std::size_t max_depth = 0;  // STSG fragment depth bound, 0 = none
    bool reparse = false;       // reparse the corpus with the extracted SCFG
    ScoreOptions score;
    std::uint64_t seed = 0;
    std::size_t runs = 1;
    bool shuffle = false;  // present the corpus in a seeded random order per run
    unsigned threads = 1;
};

// System name such as "default:leaf+" or "biased:first".
std::string system_name(const RunConfig& config);

// One-line "# config: ..." comment, newline-terminated, identifying every
// setting that affects an output.
std::string config_header(const RunConfig& config, const std::string& command);

// Seed used by run `run` (0-based) of a repeated experiment.
std::uint64_t run_seed(std::uint64_t seed, std::size_t run);

// Order in which run `run` presents the corpus: identity unless shuffling.
std::vector<std::size_t> run_order(const RunConfig& config, std::size_t size, std::size_t run);

// Alignment and selection learning (plus the optional reparse) on
// `corpus`, with the selection seeded by `seed`.
Treebank learn_treebank(const Corpus& corpus, const RunConfig& config, std::uint64_t seed);

struct PipelineRun {
    Treebank treebank;  // in the original corpus order
    std::optional<BracketScore> score;
};

// All configured runs. Scores are filled in when `gold` is given.
std::vector<PipelineRun> run_pipeline(const Corpus& corpus, const RunConfig& config, const Treebank* gold = nullptr);

}  // namespace abl
