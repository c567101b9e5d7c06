#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "abl/corpus.hpp"

namespace abl {

// Non-terminals are natural numbers; 1 is the start symbol.
using NonTerminal = std::uint32_t;
inline constexpr NonTerminal kStartSymbol = 1;

// Union structure over non-terminals. The canonical id of a class is its
// smallest member; fresh ids are handed out in increasing order.
class MergeTable {
public:
    MergeTable() = default;

    NonTerminal fresh();
    NonTerminal canonical(NonTerminal n) const;
    // Returns the canonical id of the merged class.
    NonTerminal merge(NonTerminal a, NonTerminal b);
    // Makes every id below `n` known so that fresh() returns at least `n`.
    void reserve_through(NonTerminal n);

    NonTerminal next_fresh() const noexcept { return next_; }

private:
    // parent_[n] for n < next_; parent_[0] is unused.
    mutable std::vector<NonTerminal> parent_{0, 1};
    NonTerminal next_ = 2;
};

// A candidate constituent <begin, end, type>; begin == end is allowed.
struct Hypothesis {
    std::size_t begin = 0;
    std::size_t end = 0;
    NonTerminal type = kStartSymbol;

    std::size_t width() const noexcept { return end - begin; }
    bool equivalent(const Hypothesis& o) const noexcept { return begin == o.begin && end == o.end; }
    friend bool operator==(const Hypothesis&, const Hypothesis&) = default;
};

// Strict interleaving; nesting and touching spans do not overlap.
constexpr bool overlaps(const Hypothesis& a, const Hypothesis& b) noexcept {
    return (a.begin < b.begin && b.begin < a.end && a.end < b.end) ||
           (b.begin < a.begin && a.begin < b.end && b.end < a.end);
}

// A sentence with possibly overlapping hypotheses in insertion order.
struct FuzzyTree {
    Sentence sentence;
    std::vector<Hypothesis> hypotheses;

    explicit FuzzyTree(Sentence s);
    FuzzyTree(Sentence s, std::vector<Hypothesis> h) : sentence(std::move(s)), hypotheses(std::move(h)) {}

    const Hypothesis* find_equivalent(std::size_t begin, std::size_t end) const;
};

struct HypothesisSpace {
    std::vector<FuzzyTree> trees;
    MergeTable merge_table;

    std::size_t hypothesis_count() const;
};

// Record format: tokens, TAB, space-separated "b:e:n" triples with n
// resolved through the merge table. Lines starting with '#' are comments.
std::string serialize_space(const HypothesisSpace& space);
HypothesisSpace parse_space(std::string_view text);

}  // namespace abl
