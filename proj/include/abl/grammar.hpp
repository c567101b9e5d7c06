#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "abl/treebank.hpp"

namespace abl {

struct GrammarSymbol {
    std::string name;
    bool terminal = false;
    friend auto operator<=>(const GrammarSymbol&, const GrammarSymbol&) = default;
};

struct CfgRule {
    std::string lhs;
    std::vector<GrammarSymbol> rhs;
    friend auto operator<=>(const CfgRule&, const CfgRule&) = default;
};

struct WeightedRule {
    CfgRule rule;
    std::size_t count = 0;
    double probability = 0.0;
    double logprob = 0.0;  // natural log of probability
};

// Rules are kept sorted by (lhs, rhs); probabilities are relative
// frequencies per left-hand side.
class Scfg {
public:
    Scfg() = default;
    // Builds from raw counts; start counts weigh the root labels.
    Scfg(const std::map<CfgRule, std::size_t>& rule_counts, const std::map<std::string, std::size_t>& start_counts);
    // Builds from stored probabilities.
    Scfg(std::vector<WeightedRule> rules, std::map<std::string, double> start_probabilities);

    const std::vector<WeightedRule>& rules() const noexcept { return rules_; }
    const std::map<std::string, double>& start_probabilities() const noexcept { return start_; }
    bool empty() const noexcept { return rules_.empty(); }

    // nullptr when absent.
    const WeightedRule* find(const CfgRule& rule) const;
    // Sum of rule probabilities per left-hand side.
    std::map<std::string, double> lhs_mass() const;

private:
    std::vector<WeightedRule> rules_;
    std::map<std::string, double> start_;
};

// One rule per internal node: label -> daughters, where words not covered
// by any daughter constituent appear as terminals.
Scfg extract_scfg(const Treebank& treebank);

// "PROB<TAB>LHS<TAB>RHS" per rule, RHS symbols separated by spaces. A
// terminal that would read as a non-terminal (or starts with '\') is
// written with a leading '\'. Root labels are stored on
// "#start<TAB>PROB<TAB>LABEL" lines; other '#' lines are comments.
std::string serialize_scfg(const Scfg& grammar);
Scfg parse_scfg(std::string_view text);

// A connected fragment of a tree: a node, and for each included node all
// of its daughters. Daughter nodes are either expanded or left as
// frontier non-terminals, written with a trailing '*'.
struct ElementaryTree {
    std::string root;
    std::string bracketed;  // e.g. "(S (NP Bert) VP*)"
    std::size_t depth = 0;  // edges from root to the deepest leaf
    friend auto operator<=>(const ElementaryTree&, const ElementaryTree&) = default;
};

// Every elementary tree of `tree` with depth <= max_depth (0 = no bound),
// grouped by source node in pre-order.
std::vector<ElementaryTree> enumerate_elementary_trees(const Tree& tree, std::size_t max_depth);

struct WeightedFragment {
    ElementaryTree fragment;
    std::size_t count = 0;
    double probability = 0.0;
};

struct Stsg {
    std::vector<WeightedFragment> fragments;  // sorted by (root, bracketed)
    std::map<std::string, double> root_mass() const;
};

Stsg extract_stsg(const Treebank& treebank, std::size_t max_depth);

// "PROB<TAB>ROOT<TAB>FRAGMENT" per line.
std::string serialize_stsg(const Stsg& grammar);

struct ParseResult {
    Tree tree;
    double logprob = 0.0;
};

// Most probable parse under the grammar (product of rule probabilities
// and the root label probability), or nullopt if the sentence contains an
// unknown word or has no derivation.
std::optional<ParseResult> cky_parse(const Scfg& grammar, const Sentence& sentence);

// Parses many sentences with one chart-ready copy of the grammar.
class CkyParser {
public:
    explicit CkyParser(const Scfg& grammar);
    ~CkyParser();
    CkyParser(CkyParser&&) noexcept;
    CkyParser& operator=(CkyParser&&) noexcept;

    std::optional<ParseResult> parse(const Sentence& sentence) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

struct ReparseStats {
    std::size_t parsed = 0;
    std::size_t fallback = 0;
};

// Extracts an SCFG from the treebank and reparses every yield with it;
// sentences without a parse keep their input tree.
Treebank reparse_corpus(const Treebank& treebank, unsigned threads = 1, ReparseStats* stats = nullptr);

}  // namespace abl
