#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "abl/hypothesis.hpp"
#include "abl/treebank.hpp"

namespace abl {

enum class SelectionModel { First, Leaf, Branch };

std::string_view to_string(SelectionModel model);
SelectionModel parse_selection_model(std::string_view name);

struct SelectionConfig {
    SelectionModel model = SelectionModel::Leaf;
    bool extended = true;  // prefer larger sets among equally probable ones
    std::uint64_t seed = 0;
    unsigned threads = 1;
};

// Pooled counts over every hypothesis of every fuzzy tree, with types
// resolved through the merge table.
class HypothesisUniverse {
public:
    explicit HypothesisUniverse(const HypothesisSpace& space);

    std::size_t total() const noexcept { return total_; }
    std::size_t yield_count(const std::string& yield) const;
    std::size_t yield_root_count(const std::string& yield, NonTerminal root) const;
    std::size_t root_count(NonTerminal root) const;

    const MergeTable& merge_table() const noexcept { return *table_; }

private:
    static std::string key(const std::string& yield, NonTerminal root);

    const MergeTable* table_;
    std::size_t total_ = 0;
    std::unordered_map<std::string, std::size_t> by_yield_;
    std::unordered_map<std::string, std::size_t> by_yield_root_;
    std::unordered_map<NonTerminal, std::size_t> by_root_;
};

// leaf: share of the universe with the same yield; branch: share of the
// hypotheses with the same type that also have the same yield.
double hypothesis_probability(const Hypothesis& h, const Sentence& s, const HypothesisUniverse& universe,
                              SelectionModel model);

// Mean of -log P over a set; lower is better.
struct CombinedScore {
    double mean_logprob = 0.0;
    std::size_t cardinality = 0;
};

CombinedScore combined_score(std::span<const double> logprobs);

// Relative tolerance used when comparing mean logprobs.
bool same_score(double x, double y);

// Strict preference of a over b. With `extended`, equal means are broken
// by the larger cardinality.
bool better(const CombinedScore& a, const CombinedScore& b, bool extended);

// Greedy, insertion-ordered filter: keep a hypothesis iff it overlaps no
// hypothesis kept before it. Returns indices into `hyps`.
std::vector<std::size_t> select_first_indices(std::span<const Hypothesis> hyps);

// Hypotheses overlapping nothing are kept. The rest fall into connected
// components of the overlap graph; from each, the kept subset is a
// pairwise non-overlapping set with the best combined score. Remaining
// ties are broken with `rng`. Returns ascending indices.
std::vector<std::size_t> select_probabilistic_indices(std::span<const Hypothesis> hyps, std::span<const double> logprobs,
                                                      bool extended, std::mt19937_64& rng);

// Converts kept hypotheses to a tree: zero-width ones are dropped and
// types become their canonical decimal ids.
Tree to_tree(const FuzzyTree& fuzzy, std::span<const std::size_t> kept, const MergeTable& table);

Treebank select_first(const HypothesisSpace& space);
Treebank select_probabilistic(const HypothesisSpace& space, const SelectionConfig& config);
Treebank select(const HypothesisSpace& space, const SelectionConfig& config);

}  // namespace abl
