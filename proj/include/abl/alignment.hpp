#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "abl/corpus.hpp"
#include "abl/hypothesis.hpp"

namespace abl {

using WordId = std::uint32_t;

enum class CostModel {
    Default,  // match 0, insert 1, delete 1, substitute 2
    Biased,   // match cost grows with the difference in relative offsets
};

struct CostFunction {
    CostModel model = CostModel::Default;
    bool fold_case = false;  // compare words ASCII-case-insensitively
};

// Dynamic-programming table D(i, j) for the cost of turning the first i
// words of A into the first j words of B. Costs are held as exact
// integers; `scale()` converts back to the real-valued cost.
//
// Biased costs are multiplied by 2|A||B| so that the match cost
// |i/|A| - j/|B|| * (|A|+|B|)/2 becomes |i|B| - j|A|| * (|A|+|B|).
class EditMatrix {
public:
    EditMatrix(std::size_t rows, std::size_t cols, std::int64_t scale)
        : rows_(rows), cols_(cols), scale_(scale), cells_(rows * cols, 0) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::int64_t scale() const noexcept { return scale_; }

    std::int64_t& raw(std::size_t i, std::size_t j) { return cells_[i * cols_ + j]; }
    std::int64_t raw(std::size_t i, std::size_t j) const { return cells_[i * cols_ + j]; }
    double at(std::size_t i, std::size_t j) const { return static_cast<double>(raw(i, j)) / static_cast<double>(scale_); }
    double distance() const { return at(rows_ - 1, cols_ - 1); }

private:
    std::size_t rows_;
    std::size_t cols_;
    std::int64_t scale_;
    std::vector<std::int64_t> cells_;
};

// Scaled integer costs for one sentence pair.
class ScaledCosts {
public:
    ScaledCosts(CostModel model, std::size_t len_a, std::size_t len_b);

    std::int64_t scale() const noexcept { return scale_; }
    std::int64_t deletion() const noexcept { return indel_; }
    std::int64_t insertion() const noexcept { return indel_; }
    std::int64_t substitution() const noexcept { return sub_; }
    // 0-based word positions.
    std::int64_t match(std::size_t i, std::size_t j) const;

private:
    CostModel model_;
    std::int64_t len_a_;
    std::int64_t len_b_;
    std::int64_t scale_;
    std::int64_t indel_;
    std::int64_t sub_;
};

// A pair of 0-based word indices with A[a] == B[b].
struct Link {
    std::size_t a = 0;
    std::size_t b = 0;
    friend auto operator<=>(const Link&, const Link&) = default;
};

// Links strictly increasing in both coordinates.
using Alignment = std::vector<Link>;

// Links cross or share an index.
constexpr bool links_conflict(const Link& x, const Link& y) noexcept {
    return (x.a <= y.a && x.b >= y.b) || (x.a >= y.a && x.b <= y.b);
}

// Equal runs A[a_begin, a_end) == B[b_begin, b_end).
struct WordCluster {
    std::size_t a_begin = 0;
    std::size_t a_end = 0;
    std::size_t b_begin = 0;
    std::size_t b_end = 0;
    friend bool operator==(const WordCluster&, const WordCluster&) = default;
};

// Paired gap spans; at most one side is empty.
struct SpanPair {
    std::size_t a_begin = 0;
    std::size_t a_end = 0;
    std::size_t b_begin = 0;
    std::size_t b_end = 0;
    friend auto operator<=>(const SpanPair&, const SpanPair&) = default;
};

// Maps words to dense ids; with fold_case, ASCII letters are lowered first.
class Vocabulary {
public:
    explicit Vocabulary(bool fold_case = false) : fold_case_(fold_case) {}
    WordId intern(std::string_view word);
    std::vector<WordId> encode(const Sentence& s);

private:
    bool fold_case_;
    std::unordered_map<std::string, WordId> ids_;
};

EditMatrix edit_matrix(std::span<const WordId> a, std::span<const WordId> b, CostModel model);
EditMatrix edit_matrix(const Sentence& a, const Sentence& b, const CostFunction& cost);

// Links of one minimum-cost transcript, ascending. Ties are resolved
// deletion first, then insertion, then the diagonal.
Alignment traceback_links(std::span<const WordId> a, std::span<const WordId> b, const EditMatrix& d, CostModel model);
Alignment traceback_links(const Sentence& a, const Sentence& b, const EditMatrix& d, const CostFunction& cost);

// Every maximal set of pairwise compatible links, sorted.
std::vector<Alignment> all_alignments(std::span<const WordId> a, std::span<const WordId> b);
std::vector<Alignment> all_alignments(const Sentence& a, const Sentence& b, bool fold_case = false);

// Maximal runs of links whose indices both advance by one.
std::vector<WordCluster> clusters_from_links(const Alignment& links);

// Gaps before, between and after the clusters, paired across the two
// sentences. Pairs where both gaps are empty are dropped.
std::vector<SpanPair> complement_spans(const std::vector<WordCluster>& clusters, std::size_t len_a, std::size_t len_b);

// Complement pairs whose two sides share no word.
std::vector<SpanPair> substitutable_pairs(std::span<const WordId> a, std::span<const WordId> b, const Alignment& links);

enum class AlignmentInstance { Default, Biased, All };

std::string_view to_string(AlignmentInstance instance);
AlignmentInstance parse_alignment_instance(std::string_view name);

// Substitutable pairs found by one instance for the ordered pair (a, b).
// For All, pairs from every alignment are merged without duplicates.
std::vector<SpanPair> find_substitutable(std::span<const WordId> a, std::span<const WordId> b, AlignmentInstance instance);

enum class InsertCase {
    BothNew,          // fresh type stored in both trees
    AdoptedExisting,  // one tree already had the span; the other adopts its type
    AlreadySameType,  // both had the span with one type
    MergedTypes,      // both had the span with different types, now merged
};

// Inserts the hypotheses of one substitutable pair into f and g.
InsertCase add_hypothesis_pair(MergeTable& table, FuzzyTree& f, FuzzyTree& g, const SpanPair& pair);

struct AlignmentOptions {
    AlignmentInstance instance = AlignmentInstance::Default;
    bool fold_case = false;
    unsigned threads = 1;
};

HypothesisSpace alignment_learning(const Corpus& corpus, const AlignmentOptions& options);

}  // namespace abl
