#include "abl/hypothesis.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

#include "abl/error.hpp"

namespace abl {

NonTerminal MergeTable::fresh() {
    parent_.push_back(next_);
    return next_++;
}

NonTerminal MergeTable::canonical(NonTerminal n) const {
    if (n == 0 || n >= next_) throw std::out_of_range("unknown non-terminal " + std::to_string(n));
    NonTerminal root = n;
    while (parent_[root] != root) root = parent_[root];
    while (parent_[n] != root) {
        const NonTerminal up = parent_[n];
        parent_[n] = root;
        n = up;
    }
    return root;
}

NonTerminal MergeTable::merge(NonTerminal a, NonTerminal b) {
    const NonTerminal ra = canonical(a);
    const NonTerminal rb = canonical(b);
    const NonTerminal lo = std::min(ra, rb);
    parent_[std::max(ra, rb)] = lo;
    return lo;
}

void MergeTable::reserve_through(NonTerminal n) {
    while (next_ <= n) fresh();
}

FuzzyTree::FuzzyTree(Sentence s) : sentence(std::move(s)) {
    hypotheses.push_back({0, sentence.size(), kStartSymbol});
}

const Hypothesis* FuzzyTree::find_equivalent(std::size_t begin, std::size_t end) const {
    for (const auto& h : hypotheses)
        if (h.begin == begin && h.end == end) return &h;
    return nullptr;
}

std::size_t HypothesisSpace::hypothesis_count() const {
    std::size_t n = 0;
    for (const auto& t : trees) n += t.hypotheses.size();
    return n;
}

std::string serialize_space(const HypothesisSpace& space) {
    std::string out;
    for (const auto& tree : space.trees) {
        out += tree.sentence.text();
        out += '\t';
        bool first = true;
        for (const auto& h : tree.hypotheses) {
            if (!first) out += ' ';
            first = false;
            out += std::to_string(h.begin);
            out += ':';
            out += std::to_string(h.end);
            out += ':';
            out += std::to_string(space.merge_table.canonical(h.type));
        }
        out += '\n';
    }
    return out;
}

namespace {

std::size_t parse_number(std::string_view s, std::size_t line) {
    std::size_t v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || s.empty())
        throw FormatError(line, "bad number '" + std::string(s) + "'");
    return v;
}

}  // namespace

HypothesisSpace parse_space(std::string_view text) {
    HypothesisSpace space;
    NonTerminal max_type = kStartSymbol;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        const std::string_view line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;
        if (line.empty() || line.front() == '#') continue;
        const std::size_t tab = line.find('\t');
        if (tab == std::string_view::npos) throw FormatError(line_no, "missing TAB between sentence and hypotheses");
        auto words = split_words(line.substr(0, tab));
        if (words.empty()) throw FormatError(line_no, "empty sentence");
        FuzzyTree tree(Sentence{std::move(words)}, {});
        const std::size_t n = tree.sentence.size();
        for (const auto& triple : split_words(line.substr(tab + 1))) {
            const std::size_t c1 = triple.find(':');
            const std::size_t c2 = c1 == std::string::npos ? c1 : triple.find(':', c1 + 1);
            if (c2 == std::string::npos) throw FormatError(line_no, "bad hypothesis '" + triple + "'");
            const std::string_view t(triple);
            Hypothesis h;
            h.begin = parse_number(t.substr(0, c1), line_no);
            h.end = parse_number(t.substr(c1 + 1, c2 - c1 - 1), line_no);
            const std::size_t type = parse_number(t.substr(c2 + 1), line_no);
            if (h.begin > h.end || h.end > n) throw FormatError(line_no, "span out of range in '" + triple + "'");
            if (type == 0 || type > 0xFFFFFFF0u) throw FormatError(line_no, "bad non-terminal in '" + triple + "'");
            h.type = static_cast<NonTerminal>(type);
            if (tree.find_equivalent(h.begin, h.end))
                throw FormatError(line_no, "duplicate span in '" + triple + "'");
            max_type = std::max(max_type, h.type);
            tree.hypotheses.push_back(h);
        }
        space.trees.push_back(std::move(tree));
    }
    space.merge_table.reserve_through(max_type);
    return space;
}

}  // namespace abl
