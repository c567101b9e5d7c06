#include "abl/grammar.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <stdexcept>

#include "abl/error.hpp"
#include "abl/parallel.hpp"

namespace abl {

Scfg::Scfg(const std::map<CfgRule, std::size_t>& rule_counts, const std::map<std::string, std::size_t>& start_counts) {
    std::map<std::string, std::size_t> lhs_totals;
    for (const auto& [rule, n] : rule_counts) lhs_totals[rule.lhs] += n;
    rules_.reserve(rule_counts.size());
    for (const auto& [rule, n] : rule_counts) {
        const double p = static_cast<double>(n) / static_cast<double>(lhs_totals[rule.lhs]);
        rules_.push_back({rule, n, p, std::log(p)});
    }
    std::size_t roots = 0;
    for (const auto& [label, n] : start_counts) roots += n;
    for (const auto& [label, n] : start_counts)
        start_[label] = static_cast<double>(n) / static_cast<double>(roots);
}

Scfg::Scfg(std::vector<WeightedRule> rules, std::map<std::string, double> start_probabilities)
    : rules_(std::move(rules)), start_(std::move(start_probabilities)) {
    std::sort(rules_.begin(), rules_.end(), [](const WeightedRule& a, const WeightedRule& b) { return a.rule < b.rule; });
    for (auto& r : rules_) r.logprob = std::log(r.probability);
}

const WeightedRule* Scfg::find(const CfgRule& rule) const {
    const auto it = std::lower_bound(rules_.begin(), rules_.end(), rule,
                                     [](const WeightedRule& w, const CfgRule& r) { return w.rule < r; });
    return it != rules_.end() && it->rule == rule ? &*it : nullptr;
}

std::map<std::string, double> Scfg::lhs_mass() const {
    std::map<std::string, double> mass;
    for (const auto& r : rules_) mass[r.rule.lhs] += r.probability;
    return mass;
}

Scfg extract_scfg(const Treebank& treebank) {
    std::map<CfgRule, std::size_t> counts;
    std::map<std::string, std::size_t> starts;
    for (const auto& tree : treebank) {
        const Bracketing b = bracket(tree);
        ++starts[b.nodes.front().label];
        for (const auto& node : b.nodes) {
            CfgRule rule{node.label, {}};
            for (const auto& d : node.daughters) {
                if (d.is_word)
                    rule.rhs.push_back({tree.sentence[d.index], true});
                else
                    rule.rhs.push_back({b.nodes[d.index].label, false});
            }
            ++counts[rule];
        }
    }
    return Scfg(counts, starts);
}

namespace {

std::string format_probability(double p) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", p);
    return buf;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    for (;;) {
        const std::size_t t = line.find('\t', pos);
        out.push_back(line.substr(pos, t == std::string_view::npos ? std::string_view::npos : t - pos));
        if (t == std::string_view::npos) break;
        pos = t + 1;
    }
    return out;
}

double parse_probability(std::string_view s, std::size_t line) {
    double v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || !(v > 0.0) || v > 1.0)
        throw FormatError(line, "bad probability '" + std::string(s) + "'");
    return v;
}

}  // namespace

std::string serialize_scfg(const Scfg& grammar) {
    std::set<std::string> nonterminals;
    for (const auto& r : grammar.rules()) nonterminals.insert(r.rule.lhs);
    std::string out;
    for (const auto& [label, p] : grammar.start_probabilities()) {
        out += "#start\t" + format_probability(p) + "\t" + label + "\n";
    }
    for (const auto& r : grammar.rules()) {
        out += format_probability(r.probability);
        out += '\t';
        out += r.rule.lhs;
        out += '\t';
        bool first = true;
        for (const auto& s : r.rule.rhs) {
            if (!first) out += ' ';
            first = false;
            if (s.terminal && (nonterminals.count(s.name) || s.name.starts_with('\\'))) out += '\\';
            out += s.name;
        }
        out += '\n';
    }
    return out;
}

Scfg parse_scfg(std::string_view text) {
    struct Raw {
        double p;
        std::string lhs;
        std::vector<std::string> rhs;
        std::size_t line;
    };
    std::vector<Raw> raws;
    std::map<std::string, double> starts;
    std::set<std::string> nonterminals;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        const std::string_view line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;
        if (line.empty()) continue;
        const auto fields = split_tabs(line);
        if (line.front() == '#') {
            if (fields.size() == 3 && fields[0] == "#start")
                starts[std::string(fields[2])] = parse_probability(fields[1], line_no);
            continue;
        }
        if (fields.size() != 3) throw FormatError(line_no, "expected PROB<TAB>LHS<TAB>RHS");
        if (fields[1].empty()) throw FormatError(line_no, "empty left-hand side");
        Raw raw{parse_probability(fields[0], line_no), std::string(fields[1]), split_words(fields[2]), line_no};
        if (raw.rhs.empty()) throw FormatError(line_no, "empty right-hand side");
        nonterminals.insert(raw.lhs);
        raws.push_back(std::move(raw));
    }
    std::vector<WeightedRule> rules;
    rules.reserve(raws.size());
    for (auto& raw : raws) {
        WeightedRule w;
        w.rule.lhs = raw.lhs;
        for (auto& s : raw.rhs) {
            if (s.starts_with('\\'))
                w.rule.rhs.push_back({s.substr(1), true});
            else
                w.rule.rhs.push_back({s, nonterminals.count(s) == 0});
        }
        w.probability = raw.p;
        rules.push_back(std::move(w));
    }
    return Scfg(std::move(rules), std::move(starts));
}

namespace {

struct Fragment {
    std::string text;
    std::size_t depth;
};

std::vector<Fragment> fragments_at(const Tree& tree, const Bracketing& b, std::size_t k, std::size_t budget) {
    if (budget == 0) return {};
    const auto& node = b.nodes[k];
    std::vector<std::vector<Fragment>> options;
    options.reserve(node.daughters.size());
    for (const auto& d : node.daughters) {
        std::vector<Fragment> opts;
        if (d.is_word) {
            opts.push_back({tree.sentence[d.index], 1});
        } else {
            opts.push_back({b.nodes[d.index].label + "*", 1});
            for (auto& f : fragments_at(tree, b, d.index, budget - 1)) opts.push_back({std::move(f.text), f.depth + 1});
        }
        options.push_back(std::move(opts));
    }
    // cartesian product over daughters, first daughter varying slowest
    std::vector<Fragment> out{{"", 0}};
    for (const auto& opts : options) {
        std::vector<Fragment> next;
        next.reserve(out.size() * opts.size());
        for (const auto& prefix : out)
            for (const auto& o : opts) next.push_back({prefix.text + " " + o.text, std::max(prefix.depth, o.depth)});
        out = std::move(next);
    }
    for (auto& f : out) f.text = "(" + node.label + f.text + ")";
    return out;
}

}  // namespace

std::vector<ElementaryTree> enumerate_elementary_trees(const Tree& tree, std::size_t max_depth) {
    const Bracketing b = bracket(tree);
    const std::size_t budget = max_depth == 0 ? std::numeric_limits<std::size_t>::max() : max_depth;
    std::vector<ElementaryTree> out;
    for (std::size_t k = 0; k < b.nodes.size(); ++k)
        for (auto& f : fragments_at(tree, b, k, budget)) out.push_back({b.nodes[k].label, std::move(f.text), f.depth});
    return out;
}

std::map<std::string, double> Stsg::root_mass() const {
    std::map<std::string, double> mass;
    for (const auto& f : fragments) mass[f.fragment.root] += f.probability;
    return mass;
}

Stsg extract_stsg(const Treebank& treebank, std::size_t max_depth) {
    std::map<ElementaryTree, std::size_t> counts;
    std::map<std::string, std::size_t> roots;
    for (const auto& tree : treebank) {
        for (auto& f : enumerate_elementary_trees(tree, max_depth)) {
            ++roots[f.root];
            ++counts[std::move(f)];
        }
    }
    Stsg g;
    g.fragments.reserve(counts.size());
    for (const auto& [f, n] : counts)
        g.fragments.push_back({f, n, static_cast<double>(n) / static_cast<double>(roots[f.root])});
    return g;
}

std::string serialize_stsg(const Stsg& grammar) {
    std::string out;
    for (const auto& f : grammar.fragments) {
        out += format_probability(f.probability);
        out += '\t';
        out += f.fragment.root;
        out += '\t';
        out += f.fragment.bracketed;
        out += '\n';
    }
    return out;
}

// Chart parser over a binarized copy of the grammar. Right-hand sides are
// folded left to right into intermediate symbols shared between rules with
// a common prefix; those symbols carry no probability and never appear in
// the output tree.
struct CkyParser::Impl {
    enum class Kind { NonTerminal, Terminal, Intermediate };
    struct Unary {
        int parent;
        double lp;
    };
    struct Binary {
        int right;
        int parent;
        double lp;
    };
    struct Entry {
        double lp;
        int left = -1;   // child symbol, -1 for a word
        int right = -1;  // second child for binary steps
        std::size_t split = 0;
    };
    using Cell = std::map<int, Entry>;

    std::vector<Kind> kinds;
    std::vector<std::string> names;
    std::map<std::string, int> nonterminal_ids;
    std::map<std::string, int> terminal_ids;
    std::map<std::vector<int>, int> prefix_ids;
    std::vector<std::vector<Unary>> unary_by_child;
    std::vector<std::vector<Binary>> binary_by_left;
    std::vector<std::pair<int, double>> starts;

    int add_symbol(Kind kind, std::string name) {
        kinds.push_back(kind);
        names.push_back(std::move(name));
        unary_by_child.emplace_back();
        binary_by_left.emplace_back();
        return static_cast<int>(kinds.size() - 1);
    }

    int symbol(const GrammarSymbol& s) {
        auto& ids = s.terminal ? terminal_ids : nonterminal_ids;
        const auto it = ids.find(s.name);
        if (it != ids.end()) return it->second;
        const int id = add_symbol(s.terminal ? Kind::Terminal : Kind::NonTerminal, s.name);
        ids.emplace(s.name, id);
        return id;
    }

    explicit Impl(const Scfg& g) {
        for (const auto& w : g.rules()) {
            const int lhs = symbol({w.rule.lhs, false});
            std::vector<int> rhs;
            for (const auto& s : w.rule.rhs) rhs.push_back(symbol(s));
            if (rhs.size() == 1) {
                unary_by_child[rhs[0]].push_back({lhs, w.logprob});
                continue;
            }
            int prev = rhs[0];
            std::vector<int> prefix{rhs[0]};
            for (std::size_t m = 1; m + 1 < rhs.size(); ++m) {
                prefix.push_back(rhs[m]);
                const auto it = prefix_ids.find(prefix);
                if (it != prefix_ids.end()) {
                    prev = it->second;
                    continue;
                }
                const int inter = add_symbol(Kind::Intermediate, "");
                prefix_ids.emplace(prefix, inter);
                binary_by_left[prev].push_back({rhs[m], inter, 0.0});
                prev = inter;
            }
            binary_by_left[prev].push_back({rhs.back(), lhs, w.logprob});
        }
        for (const auto& [label, p] : g.start_probabilities()) {
            const auto it = nonterminal_ids.find(label);
            if (it != nonterminal_ids.end()) starts.emplace_back(it->second, std::log(p));
        }
    }

    static bool relax(Cell& cell, int sym, const Entry& e) {
        const auto it = cell.find(sym);
        if (it != cell.end() && !(e.lp > it->second.lp)) return false;
        cell[sym] = e;
        return true;
    }

    void close_unary(Cell& cell) const {
        for (std::size_t round = 0; round <= kinds.size(); ++round) {
            bool changed = false;
            std::vector<std::pair<int, double>> snapshot;
            snapshot.reserve(cell.size());
            for (const auto& [sym, e] : cell) snapshot.emplace_back(sym, e.lp);
            for (const auto& [sym, lp] : snapshot)
                for (const auto& u : unary_by_child[sym]) changed |= relax(cell, u.parent, {lp + u.lp, sym, -1, 0});
            if (!changed) return;
        }
    }

    void emit(const std::vector<Cell>& chart, std::size_t n, std::size_t i, std::size_t k, int sym,
              std::vector<Constituent>& out, std::size_t guard) const {
        if (guard == 0) throw std::logic_error("cyclic back-pointers in chart");
        const Entry& e = chart[i * (n + 1) + k].at(sym);
        if (kinds[sym] == Kind::NonTerminal) out.push_back({i, k, names[sym]});
        if (e.left < 0) return;
        if (e.right < 0) {
            emit(chart, n, i, k, e.left, out, guard - 1);
        } else {
            emit(chart, n, i, e.split, e.left, out, guard - 1);
            emit(chart, n, e.split, k, e.right, out, guard - 1);
        }
    }

    std::optional<ParseResult> parse(const Sentence& s) const {
        const std::size_t n = s.size();
        if (n == 0) return std::nullopt;
        std::vector<Cell> chart((n + 1) * (n + 1));
        auto cell = [&](std::size_t i, std::size_t k) -> Cell& { return chart[i * (n + 1) + k]; };
        for (std::size_t i = 0; i < n; ++i) {
            const auto it = terminal_ids.find(s[i]);
            if (it == terminal_ids.end()) return std::nullopt;
            cell(i, i + 1)[it->second] = Entry{0.0};
            close_unary(cell(i, i + 1));
        }
        for (std::size_t len = 2; len <= n; ++len) {
            for (std::size_t i = 0; i + len <= n; ++i) {
                const std::size_t k = i + len;
                Cell& target = cell(i, k);
                for (std::size_t j = i + 1; j < k; ++j) {
                    const Cell& left = cell(i, j);
                    const Cell& right = cell(j, k);
                    if (left.empty() || right.empty()) continue;
                    for (const auto& [x, ex] : left) {
                        for (const auto& b : binary_by_left[x]) {
                            const auto ry = right.find(b.right);
                            if (ry == right.end()) continue;
                            relax(target, b.parent, {ex.lp + ry->second.lp + b.lp, x, b.right, j});
                        }
                    }
                }
                close_unary(target);
            }
        }
        const Cell& top = cell(0, n);
        int best = -1;
        double best_lp = -std::numeric_limits<double>::infinity();
        for (const auto& [sym, start_lp] : starts) {
            const auto it = top.find(sym);
            if (it == top.end()) continue;
            const double lp = it->second.lp + start_lp;
            if (best < 0 || lp > best_lp) {
                best = sym;
                best_lp = lp;
            }
        }
        if (best < 0) return std::nullopt;
        ParseResult result{Tree{s, {}}, best_lp};
        emit(chart, n, 0, n, best, result.tree.constituents, 4 * n * (kinds.size() + 1) + 16);
        return result;
    }
};

CkyParser::CkyParser(const Scfg& grammar) : impl_(std::make_unique<Impl>(grammar)) {}
CkyParser::~CkyParser() = default;
CkyParser::CkyParser(CkyParser&&) noexcept = default;
CkyParser& CkyParser::operator=(CkyParser&&) noexcept = default;

std::optional<ParseResult> CkyParser::parse(const Sentence& sentence) const { return impl_->parse(sentence); }

std::optional<ParseResult> cky_parse(const Scfg& grammar, const Sentence& sentence) {
    return CkyParser(grammar).parse(sentence);
}

Treebank reparse_corpus(const Treebank& treebank, unsigned threads, ReparseStats* stats) {
    const CkyParser parser(extract_scfg(treebank));
    Treebank out(treebank.size());
    std::vector<char> parsed(treebank.size(), 0);
    parallel_for(treebank.size(), threads, [&](std::size_t k) {
        if (auto r = parser.parse(treebank[k].sentence)) {
            out[k] = std::move(r->tree);
            parsed[k] = 1;
        } else {
            out[k] = treebank[k];
        }
    });
    if (stats) {
        stats->parsed = static_cast<std::size_t>(std::count(parsed.begin(), parsed.end(), 1));
        stats->fallback = treebank.size() - stats->parsed;
    }
    return out;
}

}  // namespace abl
