#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "abl/corpus.hpp"
#include "abl/treebank.hpp"

namespace abl {

// Unlabeled bracketing score. Ratios are in [0,1]; multiply by 100 for
// the usual percentages.
struct BracketScore {
    std::size_t matched = 0;
    std::size_t gold = 0;
    std::size_t learned = 0;
    double recall = 0.0;
    double precision = 0.0;
    double f_score = 0.0;
    double beta = 1.0;
    bool no_learned = false;  // precision is undefined and reported as 0
};

struct ScoreOptions {
    bool exclude_root = false;    // ignore spans covering the whole sentence
    bool exclude_single = false;  // ignore one-word spans
    double beta = 1.0;
};

// F_beta; 0 when both inputs are 0.
double f_score(double recall, double precision, double beta = 1.0);

// Spans are compared as multisets per sentence and summed over the corpus
// before dividing. Throws std::invalid_argument naming the first index
// whose yields differ.
BracketScore score_treebank(const Treebank& gold, const Treebank& learned, const ScoreOptions& options = {});

// Per sentence a fair coin picks a left- or right-branching tree, labelled
// 1..n from the outermost constituent inwards.
Treebank random_baseline(const Corpus& corpus, std::uint64_t seed);
Tree left_branching(const Sentence& s);
Tree right_branching(const Sentence& s);

struct RecursionPair {
    std::size_t tree = 0;
    Constituent outer;
    Constituent inner;
};

// Pairs of distinct constituents sharing a label where the first span
// contains (or equals) the second.
std::vector<RecursionPair> detect_recursion(const Treebank& treebank);

struct CurvePoint {
    std::size_t prefix = 0;
    BracketScore score;
};

using Learner = std::function<Treebank(const Corpus&)>;

// Runs `learn` on prefixes of size step, 2*step, ... and scores each
// against the matching gold prefix.
std::vector<CurvePoint> learning_curve(const Corpus& corpus, const Treebank& gold, std::size_t step,
                                       const Learner& learn, const ScoreOptions& options = {});

struct MeanStd {
    double mean = 0.0;
    double std = 0.0;  // n-1 estimator; 0 for fewer than two values
};

MeanStd mean_std(std::span<const double> values);

// CSV with header "prefix,recall,precision,fscore"; values in percent.
std::string curve_csv(const std::vector<CurvePoint>& points);
// CSV with header "run,recall,precision,fscore", followed by "mean" and
// "std" rows when there is more than one run.
std::string runs_csv(const std::vector<BracketScore>& runs);

// Two decimals, the convention of the score tables.
std::string format_percent(double ratio);

}  // namespace abl
