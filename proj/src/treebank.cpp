#include "abl/treebank.hpp"

#include <algorithm>
#include <stdexcept>

#include "abl/error.hpp"

namespace abl {

bool crosses(const Constituent& a, const Constituent& b) {
    return (a.begin < b.begin && b.begin < a.end && a.end < b.end) ||
           (b.begin < a.begin && a.begin < b.end && b.end < a.end);
}

void sort_preorder(std::vector<Constituent>& constituents) {
    std::stable_sort(constituents.begin(), constituents.end(), [](const Constituent& x, const Constituent& y) {
        if (x.begin != y.begin) return x.begin < y.begin;
        return x.end > y.end;
    });
}

Bracketing bracket(const Tree& tree) {
    const std::size_t n = tree.sentence.size();
    std::vector<Constituent> cs;
    cs.reserve(tree.constituents.size());
    for (const auto& c : tree.constituents)
        if (c.begin < c.end) cs.push_back(c);
    sort_preorder(cs);
    if (cs.empty() || cs.front().begin != 0 || cs.front().end != n)
        throw std::invalid_argument("tree has no constituent spanning the whole sentence");

    Bracketing out;
    out.nodes.reserve(cs.size());
    std::vector<std::vector<std::size_t>> kids(cs.size());
    std::vector<std::size_t> stack;
    for (std::size_t k = 0; k < cs.size(); ++k) {
        const auto& c = cs[k];
        if (c.end > n) throw std::invalid_argument("constituent extends past the sentence");
        while (!stack.empty()) {
            const auto& top = out.nodes[stack.back()];
            if (top.begin <= c.begin && c.end <= top.end) break;
            if (c.begin < top.end) throw std::invalid_argument("crossing constituents");
            stack.pop_back();
        }
        if (k > 0 && stack.empty()) throw std::invalid_argument("constituent outside the root");
        out.nodes.push_back({c.label, c.begin, c.end, {}});
        if (!stack.empty()) kids[stack.back()].push_back(k);
        stack.push_back(k);
    }

    for (std::size_t k = 0; k < out.nodes.size(); ++k) {
        auto& node = out.nodes[k];
        std::size_t pos = node.begin;
        std::size_t next_kid = 0;
        const auto& ks = kids[k];
        while (pos < node.end || next_kid < ks.size()) {
            if (next_kid < ks.size() && out.nodes[ks[next_kid]].begin == pos) {
                node.daughters.push_back({false, ks[next_kid]});
                // unary chains: a child with the same span consumes nothing extra
                pos = out.nodes[ks[next_kid]].end;
                ++next_kid;
            } else {
                node.daughters.push_back({true, pos});
                ++pos;
            }
        }
    }
    return out;
}

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

}  // namespace

Tree parse_tree(std::string_view line, std::size_t line_number) {
    struct Open {
        std::size_t constituent;
        std::size_t daughters = 0;
    };
    Tree tree;
    std::vector<Open> stack;
    bool closed_top = false;
    std::size_t i = 0;
    auto fail = [&](const std::string& msg) -> FormatError { return FormatError(line_number, msg); };
    auto read_atom = [&]() {
        std::size_t j = i;
        while (j < line.size() && !is_space(line[j]) && line[j] != '(' && line[j] != ')') ++j;
        std::string atom(line.substr(i, j - i));
        i = j;
        return atom;
    };

    while (i < line.size()) {
        const char c = line[i];
        if (is_space(c)) {
            ++i;
            continue;
        }
        if (closed_top) throw fail("text after the end of the tree");
        if (c == '(') {
            ++i;
            while (i < line.size() && is_space(line[i])) ++i;
            if (i >= line.size()) throw fail("unbalanced parentheses");
            if (line[i] == ')') throw fail("empty bracket");
            if (line[i] == '(') throw fail("bracket without a label");
            std::string label = read_atom();
            if (!stack.empty()) ++stack.back().daughters;
            stack.push_back({tree.constituents.size()});
            tree.constituents.push_back({tree.sentence.size(), tree.sentence.size(), std::move(label)});
        } else if (c == ')') {
            ++i;
            if (stack.empty()) throw fail("unbalanced parentheses");
            const Open open = stack.back();
            stack.pop_back();
            if (open.daughters == 0) throw fail("empty bracket");
            tree.constituents[open.constituent].end = tree.sentence.size();
            if (stack.empty()) closed_top = true;
        } else {
            if (stack.empty()) throw fail("word outside of a bracket");
            ++stack.back().daughters;
            tree.sentence.tokens.push_back(read_atom());
        }
    }
    if (!stack.empty()) throw fail("unbalanced parentheses");
    if (!closed_top) throw fail("no tree on line");
    return tree;
}

Treebank parse_treebank(std::string_view text) {
    Treebank out;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;
        std::size_t first = 0;
        while (first < line.size() && is_space(line[first])) ++first;
        if (first == line.size() || line[first] == '#') continue;
        out.push_back(parse_tree(line, line_no));
    }
    return out;
}

namespace {

void write_node(const Tree& tree, const Bracketing& b, std::size_t k, std::string& out) {
    const auto& node = b.nodes[k];
    out += '(';
    out += node.label;
    for (const auto& d : node.daughters) {
        out += ' ';
        if (d.is_word)
            out += tree.sentence[d.index];
        else
            write_node(tree, b, d.index, out);
    }
    out += ')';
}

}  // namespace

std::string serialize_tree(const Tree& tree) {
    const Bracketing b = bracket(tree);
    std::string out;
    write_node(tree, b, 0, out);
    return out;
}

std::string serialize_treebank(const Treebank& treebank) {
    std::string out;
    for (const auto& t : treebank) {
        out += serialize_tree(t);
        out += '\n';
    }
    return out;
}

const Sentence& yield_of(const Tree& tree) { return tree.sentence; }

}  // namespace abl
