#include "abl/alignment.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <stdexcept>

#include "abl/parallel.hpp"

namespace abl {

ScaledCosts::ScaledCosts(CostModel model, std::size_t len_a, std::size_t len_b)
    : model_(model), len_a_(static_cast<std::int64_t>(len_a)), len_b_(static_cast<std::int64_t>(len_b)) {
    if (model_ == CostModel::Default) {
        scale_ = 1;
    } else {
        scale_ = 2 * std::max<std::int64_t>(1, len_a_) * std::max<std::int64_t>(1, len_b_);
    }
    indel_ = scale_;
    sub_ = 2 * scale_;
}

std::int64_t ScaledCosts::match(std::size_t i, std::size_t j) const {
    if (model_ == CostModel::Default) return 0;
    const std::int64_t diff = static_cast<std::int64_t>(i) * len_b_ - static_cast<std::int64_t>(j) * len_a_;
    return (diff < 0 ? -diff : diff) * (len_a_ + len_b_);
}

WordId Vocabulary::intern(std::string_view word) {
    std::string key(word);
    if (fold_case_)
        for (auto& c : key) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    const auto [it, inserted] = ids_.try_emplace(std::move(key), static_cast<WordId>(ids_.size()));
    return it->second;
}

std::vector<WordId> Vocabulary::encode(const Sentence& s) {
    std::vector<WordId> out;
    out.reserve(s.size());
    for (const auto& w : s.tokens) out.push_back(intern(w));
    return out;
}

EditMatrix edit_matrix(std::span<const WordId> a, std::span<const WordId> b, CostModel model) {
    const ScaledCosts cost(model, a.size(), b.size());
    EditMatrix d(a.size() + 1, b.size() + 1, cost.scale());
    for (std::size_t i = 1; i <= a.size(); ++i) d.raw(i, 0) = d.raw(i - 1, 0) + cost.deletion();
    for (std::size_t j = 1; j <= b.size(); ++j) d.raw(0, j) = d.raw(0, j - 1) + cost.insertion();
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::int64_t diag = a[i - 1] == b[j - 1] ? cost.match(i - 1, j - 1) : cost.substitution();
            const std::int64_t m_sub = d.raw(i - 1, j - 1) + diag;
            const std::int64_t m_del = d.raw(i - 1, j) + cost.deletion();
            const std::int64_t m_ins = d.raw(i, j - 1) + cost.insertion();
            d.raw(i, j) = std::min({m_sub, m_del, m_ins});
        }
    }
    return d;
}

EditMatrix edit_matrix(const Sentence& a, const Sentence& b, const CostFunction& cost) {
    Vocabulary vocab(cost.fold_case);
    const auto ea = vocab.encode(a);
    const auto eb = vocab.encode(b);
    return edit_matrix(ea, eb, cost.model);
}

Alignment traceback_links(std::span<const WordId> a, std::span<const WordId> b, const EditMatrix& d, CostModel model) {
    const ScaledCosts cost(model, a.size(), b.size());
    Alignment links;
    std::size_t i = a.size();
    std::size_t j = b.size();
    while (i != 0 && j != 0) {
        if (d.raw(i, j) == d.raw(i - 1, j) + cost.deletion()) {
            --i;
        } else if (d.raw(i, j) == d.raw(i, j - 1) + cost.insertion()) {
            --j;
        } else {
            if (a[i - 1] == b[j - 1]) links.push_back({i - 1, j - 1});
            --i;
            --j;
        }
    }
    std::reverse(links.begin(), links.end());
    return links;
}

Alignment traceback_links(const Sentence& a, const Sentence& b, const EditMatrix& d, const CostFunction& cost) {
    Vocabulary vocab(cost.fold_case);
    const auto ea = vocab.encode(a);
    const auto eb = vocab.encode(b);
    return traceback_links(ea, eb, d, cost.model);
}

std::vector<Alignment> all_alignments(std::span<const WordId> a, std::span<const WordId> b) {
    std::vector<Link> matching;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            if (a[i] == b[j]) matching.push_back({i, j});

    // Incrementally place each matching pair into every partial alignment;
    // a conflicting pair forks the alignment into "without" and "with it,
    // minus what it conflicts with".
    std::set<Alignment> partial{Alignment{}};
    for (const Link& link : matching) {
        std::set<Alignment> next;
        for (const Alignment& al : partial) {
            Alignment kept;
            kept.reserve(al.size() + 1);
            bool conflict = false;
            for (const Link& e : al) {
                if (links_conflict(e, link))
                    conflict = true;
                else
                    kept.push_back(e);
            }
            kept.insert(std::upper_bound(kept.begin(), kept.end(), link), link);
            if (conflict) next.insert(al);
            next.insert(std::move(kept));
        }
        partial = std::move(next);
    }

    // Keep only maximal alignments: no matching pair outside the alignment
    // is compatible with all of its links.
    std::vector<Alignment> out;
    for (const Alignment& al : partial) {
        bool maximal = true;
        for (const Link& m : matching) {
            if (std::binary_search(al.begin(), al.end(), m)) continue;
            if (std::none_of(al.begin(), al.end(), [&](const Link& e) { return links_conflict(e, m); })) {
                maximal = false;
                break;
            }
        }
        if (maximal) out.push_back(al);
    }
    return out;
}

std::vector<Alignment> all_alignments(const Sentence& a, const Sentence& b, bool fold_case) {
    Vocabulary vocab(fold_case);
    const auto ea = vocab.encode(a);
    const auto eb = vocab.encode(b);
    return all_alignments(ea, eb);
}

std::vector<WordCluster> clusters_from_links(const Alignment& links) {
    std::vector<WordCluster> out;
    for (const Link& l : links) {
        if (!out.empty() && out.back().a_end == l.a && out.back().b_end == l.b) {
            ++out.back().a_end;
            ++out.back().b_end;
        } else {
            out.push_back({l.a, l.a + 1, l.b, l.b + 1});
        }
    }
    return out;
}

std::vector<SpanPair> complement_spans(const std::vector<WordCluster>& clusters, std::size_t len_a, std::size_t len_b) {
    std::vector<SpanPair> out;
    std::size_t a = 0;
    std::size_t b = 0;
    auto emit = [&](std::size_t a_end, std::size_t b_end) {
        if (a_end > a || b_end > b) out.push_back({a, a_end, b, b_end});
    };
    for (const auto& c : clusters) {
        emit(c.a_begin, c.b_begin);
        a = c.a_end;
        b = c.b_end;
    }
    emit(len_a, len_b);
    return out;
}

std::vector<SpanPair> substitutable_pairs(std::span<const WordId> a, std::span<const WordId> b, const Alignment& links) {
    auto pairs = complement_spans(clusters_from_links(links), a.size(), b.size());
    std::erase_if(pairs, [&](const SpanPair& p) {
        for (std::size_t i = p.a_begin; i < p.a_end; ++i)
            for (std::size_t j = p.b_begin; j < p.b_end; ++j)
                if (a[i] == b[j]) return true;
        return false;
    });
    return pairs;
}

std::string_view to_string(AlignmentInstance instance) {
    switch (instance) {
        case AlignmentInstance::Default: return "default";
        case AlignmentInstance::Biased: return "biased";
        case AlignmentInstance::All: return "all";
    }
    return "?";
}

AlignmentInstance parse_alignment_instance(std::string_view name) {
    if (name == "default") return AlignmentInstance::Default;
    if (name == "biased") return AlignmentInstance::Biased;
    if (name == "all") return AlignmentInstance::All;
    throw std::invalid_argument("unknown alignment instance '" + std::string(name) + "'");
}

std::vector<SpanPair> find_substitutable(std::span<const WordId> a, std::span<const WordId> b, AlignmentInstance instance) {
    if (instance == AlignmentInstance::All) {
        std::vector<SpanPair> out;
        std::set<SpanPair> seen;
        for (const auto& al : all_alignments(a, b))
            for (const auto& p : substitutable_pairs(a, b, al))
                if (seen.insert(p).second) out.push_back(p);
        return out;
    }
    const CostModel model = instance == AlignmentInstance::Biased ? CostModel::Biased : CostModel::Default;
    const EditMatrix d = edit_matrix(a, b, model);
    return substitutable_pairs(a, b, traceback_links(a, b, d, model));
}

InsertCase add_hypothesis_pair(MergeTable& table, FuzzyTree& f, FuzzyTree& g, const SpanPair& pair) {
    const Hypothesis* in_f = f.find_equivalent(pair.a_begin, pair.a_end);
    const Hypothesis* in_g = g.find_equivalent(pair.b_begin, pair.b_end);
    if (!in_f && !in_g) {
        const NonTerminal n = table.fresh();
        f.hypotheses.push_back({pair.a_begin, pair.a_end, n});
        g.hypotheses.push_back({pair.b_begin, pair.b_end, n});
        return InsertCase::BothNew;
    }
    if (in_f && !in_g) {
        const NonTerminal n = table.canonical(in_f->type);
        g.hypotheses.push_back({pair.b_begin, pair.b_end, n});
        return InsertCase::AdoptedExisting;
    }
    if (!in_f && in_g) {
        const NonTerminal n = table.canonical(in_g->type);
        f.hypotheses.push_back({pair.a_begin, pair.a_end, n});
        return InsertCase::AdoptedExisting;
    }
    if (table.canonical(in_f->type) == table.canonical(in_g->type)) return InsertCase::AlreadySameType;
    table.merge(in_f->type, in_g->type);
    return InsertCase::MergedTypes;
}

HypothesisSpace alignment_learning(const Corpus& corpus, const AlignmentOptions& options) {
    Vocabulary vocab(options.fold_case);
    std::vector<std::vector<WordId>> encoded;
    encoded.reserve(corpus.size());
    for (const auto& s : corpus) encoded.push_back(vocab.encode(s));

    HypothesisSpace space;
    space.trees.reserve(corpus.size());
    std::vector<std::vector<SpanPair>> found;
    for (std::size_t k = 0; k < corpus.size(); ++k) {
        FuzzyTree f(corpus[k]);
        // Pair discovery only reads plain sentences; insertion is sequential.
        found.assign(k, {});
        parallel_for(k, options.threads, [&](std::size_t g) {
            found[g] = find_substitutable(encoded[k], encoded[g], options.instance);
        });
        for (std::size_t g = 0; g < k; ++g)
            for (const auto& p : found[g]) add_hypothesis_pair(space.merge_table, f, space.trees[g], p);
        space.trees.push_back(std::move(f));
    }
    return space;
}

}  // namespace abl
