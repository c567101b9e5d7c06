#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "abl/corpus.hpp"

namespace abl {

// A selected constituent <begin, end, label> over a half-open word span.
struct Constituent {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::string label;

    std::size_t width() const noexcept { return end - begin; }
    friend bool operator==(const Constituent&, const Constituent&) = default;
};

// A sentence with pairwise non-crossing constituents. Constituents are
// kept in bracket pre-order: a parent precedes the constituents it
// dominates, including unary chains over the same span.
struct Tree {
    Sentence sentence;
    std::vector<Constituent> constituents;

    friend bool operator==(const Tree&, const Tree&) = default;
};

using Treebank = std::vector<Tree>;

// Nested view of a Tree. Node 0 is the root; every node lists its
// daughters left to right, each either a word index or a node index.
struct Bracketing {
    struct Daughter {
        bool is_word = false;
        std::size_t index = 0;
    };
    struct Node {
        std::string label;
        std::size_t begin = 0;
        std::size_t end = 0;
        std::vector<Daughter> daughters;
    };

    std::vector<Node> nodes;
};

// Throws std::invalid_argument unless some constituent spans the whole
// sentence and all constituents nest. Zero-width constituents are ignored.
Bracketing bracket(const Tree& tree);

// Puts constituents in pre-order (begin ascending, end descending, stable
// for equal spans).
void sort_preorder(std::vector<Constituent>& constituents);

// Labelled bracketing: "(LABEL child ...)" per line. Blank lines and lines
// starting with '#' are skipped. Throws FormatError naming the line.
Treebank parse_treebank(std::string_view text);
Tree parse_tree(std::string_view line, std::size_t line_number = 0);

std::string serialize_tree(const Tree& tree);
// One tree per line, LF-terminated.
std::string serialize_treebank(const Treebank& treebank);

const Sentence& yield_of(const Tree& tree);

bool crosses(const Constituent& a, const Constituent& b);

}  // namespace abl
