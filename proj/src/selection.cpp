#include "abl/selection.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "abl/parallel.hpp"
#include "abl/rng.hpp"

namespace abl {

std::string_view to_string(SelectionModel model) {
    switch (model) {
        case SelectionModel::First: return "first";
        case SelectionModel::Leaf: return "leaf";
        case SelectionModel::Branch: return "branch";
    }
    return "?";
}

SelectionModel parse_selection_model(std::string_view name) {
    if (name == "first" || name == "incr") return SelectionModel::First;
    if (name == "leaf") return SelectionModel::Leaf;
    if (name == "branch") return SelectionModel::Branch;
    throw std::invalid_argument("unknown selection model '" + std::string(name) + "'");
}

HypothesisUniverse::HypothesisUniverse(const HypothesisSpace& space) : table_(&space.merge_table) {
    for (const auto& tree : space.trees) {
        for (const auto& h : tree.hypotheses) {
            const std::string y = tree.sentence.text(h.begin, h.end);
            const NonTerminal root = table_->canonical(h.type);
            ++total_;
            ++by_yield_[y];
            ++by_yield_root_[key(y, root)];
            ++by_root_[root];
        }
    }
}

std::string HypothesisUniverse::key(const std::string& yield, NonTerminal root) {
    std::string k = std::to_string(root);
    k += '\t';
    k += yield;
    return k;
}

std::size_t HypothesisUniverse::yield_count(const std::string& yield) const {
    const auto it = by_yield_.find(yield);
    return it == by_yield_.end() ? 0 : it->second;
}

std::size_t HypothesisUniverse::yield_root_count(const std::string& yield, NonTerminal root) const {
    const auto it = by_yield_root_.find(key(yield, table_->canonical(root)));
    return it == by_yield_root_.end() ? 0 : it->second;
}

std::size_t HypothesisUniverse::root_count(NonTerminal root) const {
    const auto it = by_root_.find(table_->canonical(root));
    return it == by_root_.end() ? 0 : it->second;
}

double hypothesis_probability(const Hypothesis& h, const Sentence& s, const HypothesisUniverse& universe,
                              SelectionModel model) {
    const std::string y = s.text(h.begin, h.end);
    double num = 0;
    double den = 0;
    if (model == SelectionModel::Branch) {
        num = static_cast<double>(universe.yield_root_count(y, h.type));
        den = static_cast<double>(universe.root_count(h.type));
    } else {
        num = static_cast<double>(universe.yield_count(y));
        den = static_cast<double>(universe.total());
    }
    if (num <= 0 || den <= 0) throw std::logic_error("hypothesis is not part of the universe");
    return num / den;
}

CombinedScore combined_score(std::span<const double> logprobs) {
    assert(!logprobs.empty());
    double sum = 0;
    for (double lp : logprobs) sum += lp;
    return {sum / static_cast<double>(logprobs.size()), logprobs.size()};
}

bool same_score(double x, double y) {
    return std::abs(x - y) <= 1e-12 * std::max({1.0, std::abs(x), std::abs(y)});
}

bool better(const CombinedScore& a, const CombinedScore& b, bool extended) {
    if (!same_score(a.mean_logprob, b.mean_logprob)) return a.mean_logprob < b.mean_logprob;
    return extended && a.cardinality > b.cardinality;
}

std::vector<std::size_t> select_first_indices(std::span<const Hypothesis> hyps) {
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < hyps.size(); ++i) {
        const bool clash = std::any_of(kept.begin(), kept.end(), [&](std::size_t k) { return overlaps(hyps[k], hyps[i]); });
        if (!clash) kept.push_back(i);
    }
    return kept;
}

namespace {

// Lexicographic weight used by the interval search.
using Weight = std::pair<std::int64_t, std::int64_t>;

Weight operator+(const Weight& x, const Weight& y) { return {x.first + y.first, x.second + y.second}; }

// Maximum-weight family of pairwise non-crossing spans, drawn from a set
// of distinct non-empty spans. A family may nest spans but never let two
// of them interleave; its weight is the sum of its members' weights.
class LaminarSearch {
public:
    LaminarSearch(std::vector<Hypothesis> spans, std::vector<Weight> weights)
        : spans_(std::move(spans)), weights_(std::move(weights)), value_(spans_.size()), members_(spans_.size()) {
        std::vector<std::size_t> order(spans_.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t x, std::size_t y) { return spans_[x].width() < spans_[y].width(); });
        for (std::size_t x : order) {
            auto inner = best_within(spans_[x].begin, spans_[x].end, x);
            value_[x] = weights_[x] + inner.first;
            members_[x] = std::move(inner.second);
            members_[x].push_back(x);
        }
    }

    // Best family inside [lo, hi); `skip` excludes one span (the enclosing one).
    std::pair<Weight, std::vector<std::size_t>> best_within(std::size_t lo, std::size_t hi,
                                                            std::size_t skip = static_cast<std::size_t>(-1)) const {
        const std::size_t len = hi - lo;
        std::vector<Weight> best(len + 1, Weight{0, 0});
        std::vector<std::size_t> pick(len + 1, static_cast<std::size_t>(-1));
        for (std::size_t p = lo + 1; p <= hi; ++p) {
            best[p - lo] = best[p - lo - 1];
            for (std::size_t y = 0; y < spans_.size(); ++y) {
                if (y == skip || spans_[y].end != p || spans_[y].begin < lo) continue;
                const Weight cand = best[spans_[y].begin - lo] + value_[y];
                if (cand > best[p - lo]) {
                    best[p - lo] = cand;
                    pick[p - lo] = y;
                }
            }
        }
        std::vector<std::size_t> chosen;
        std::size_t p = hi;
        while (p > lo) {
            const std::size_t y = pick[p - lo];
            if (y == static_cast<std::size_t>(-1)) {
                --p;
                continue;
            }
            chosen.insert(chosen.end(), members_[y].begin(), members_[y].end());
            p = spans_[y].begin;
        }
        return {best[len], chosen};
    }

private:
    std::vector<Hypothesis> spans_;
    std::vector<Weight> weights_;
    std::vector<Weight> value_;
    std::vector<std::vector<std::size_t>> members_;
};

}  // namespace

std::vector<std::size_t> select_probabilistic_indices(std::span<const Hypothesis> hyps, std::span<const double> logprobs,
                                                      bool extended, std::mt19937_64& rng) {
    const std::size_t n = hyps.size();
    std::vector<bool> involved(n, false);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (overlaps(hyps[i], hyps[j])) involved[i] = involved[j] = true;

    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < n; ++i)
        if (!involved[i]) kept.push_back(i);
    if (kept.size() == n) return kept;

    // Connected components of the overlap graph are decided independently.
    std::vector<std::size_t> component(n, n);
    std::size_t components = 0;
    for (std::size_t start = 0; start < n; ++start) {
        if (!involved[start] || component[start] != n) continue;
        std::vector<std::size_t> stack{start};
        component[start] = components;
        while (!stack.empty()) {
            const std::size_t i = stack.back();
            stack.pop_back();
            for (std::size_t j = 0; j < n; ++j)
                if (component[j] == n && overlaps(hyps[i], hyps[j])) {
                    component[j] = components;
                    stack.push_back(j);
                }
        }
        ++components;
    }

    for (std::size_t c = 0; c < components; ++c) {
        double best_lp = INFINITY;
        for (std::size_t i = 0; i < n; ++i)
            if (component[i] == c) best_lp = std::min(best_lp, logprobs[i]);

        // A mean never falls below its smallest member, so every optimal set
        // consists solely of hypotheses with the minimal logprob. What is left
        // is choosing a non-overlapping family among those.
        std::vector<std::size_t> candidates;
        std::vector<Hypothesis> spans;
        std::vector<Weight> weights;
        std::size_t max_end = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (component[i] != c || !same_score(logprobs[i], best_lp)) continue;
            const auto prio = static_cast<std::int64_t>(rng() >> 32);
            candidates.push_back(i);
            spans.push_back(hyps[i]);
            max_end = std::max(max_end, hyps[i].end);
            // extended: most members first, random priority second;
            // otherwise a random signed weight picks some optimal set
            weights.push_back(extended ? Weight{1, prio} : Weight{prio - (std::int64_t{1} << 31), 0});
        }

        const LaminarSearch search(spans, weights);
        auto [value, chosen] = search.best_within(0, max_end);
        if (chosen.empty()) {
            std::size_t top = 0;
            for (std::size_t k = 1; k < weights.size(); ++k)
                if (weights[k] > weights[top]) top = k;
            chosen.push_back(top);
        }
        for (std::size_t k : chosen) kept.push_back(candidates[k]);
    }
    std::sort(kept.begin(), kept.end());
    return kept;
}

Tree to_tree(const FuzzyTree& fuzzy, std::span<const std::size_t> kept, const MergeTable& table) {
    Tree tree{fuzzy.sentence, {}};
    for (std::size_t k : kept) {
        const auto& h = fuzzy.hypotheses[k];
        if (h.begin == h.end) continue;
        tree.constituents.push_back({h.begin, h.end, std::to_string(table.canonical(h.type))});
    }
    sort_preorder(tree.constituents);
    return tree;
}

Treebank select_first(const HypothesisSpace& space) {
    Treebank out;
    out.reserve(space.trees.size());
    for (const auto& t : space.trees) out.push_back(to_tree(t, select_first_indices(t.hypotheses), space.merge_table));
    return out;
}

Treebank select_probabilistic(const HypothesisSpace& space, const SelectionConfig& config) {
    if (config.model == SelectionModel::First) throw std::invalid_argument("first selection is not probabilistic");
    const HypothesisUniverse universe(space);
    Treebank out(space.trees.size());
    parallel_for(space.trees.size(), config.threads, [&](std::size_t k) {
        const auto& t = space.trees[k];
        std::vector<double> lp(t.hypotheses.size());
        for (std::size_t i = 0; i < lp.size(); ++i)
            lp[i] = -std::log(hypothesis_probability(t.hypotheses[i], t.sentence, universe, config.model));
        auto rng = stream_for(config.seed, k);
        out[k] = to_tree(t, select_probabilistic_indices(t.hypotheses, lp, config.extended, rng), space.merge_table);
    });
    return out;
}

Treebank select(const HypothesisSpace& space, const SelectionConfig& config) {
    if (config.model == SelectionModel::First) return select_first(space);
    return select_probabilistic(space, config);
}

}  // namespace abl
