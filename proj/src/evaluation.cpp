#include "abl/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <utility>

#include "abl/rng.hpp"

namespace abl {

double f_score(double recall, double precision, double beta) {
    const double b2 = beta * beta;
    const double den = b2 * precision + recall;
    return den > 0 ? (b2 + 1) * precision * recall / den : 0.0;
}

namespace {

std::vector<std::pair<std::size_t, std::size_t>> scored_spans(const Tree& t, const ScoreOptions& o) {
    std::vector<std::pair<std::size_t, std::size_t>> spans;
    for (const auto& c : t.constituents) {
        if (c.begin >= c.end) continue;
        if (o.exclude_root && c.begin == 0 && c.end == t.sentence.size()) continue;
        if (o.exclude_single && c.width() == 1) continue;
        spans.emplace_back(c.begin, c.end);
    }
    std::sort(spans.begin(), spans.end());
    return spans;
}

}  // namespace

BracketScore score_treebank(const Treebank& gold, const Treebank& learned, const ScoreOptions& options) {
    if (gold.size() != learned.size())
        throw std::invalid_argument("treebanks differ in size: " + std::to_string(gold.size()) + " gold vs " +
                                    std::to_string(learned.size()) + " learned");
    BracketScore s;
    s.beta = options.beta;
    for (std::size_t k = 0; k < gold.size(); ++k) {
        if (!(gold[k].sentence == learned[k].sentence))
            throw std::invalid_argument("yield mismatch at sentence " + std::to_string(k));
        const auto g = scored_spans(gold[k], options);
        const auto l = scored_spans(learned[k], options);
        std::vector<std::pair<std::size_t, std::size_t>> common;
        std::set_intersection(g.begin(), g.end(), l.begin(), l.end(), std::back_inserter(common));
        s.matched += common.size();
        s.gold += g.size();
        s.learned += l.size();
    }
    s.recall = s.gold ? static_cast<double>(s.matched) / static_cast<double>(s.gold) : 0.0;
    s.no_learned = s.learned == 0;
    s.precision = s.no_learned ? 0.0 : static_cast<double>(s.matched) / static_cast<double>(s.learned);
    s.f_score = f_score(s.recall, s.precision, options.beta);
    return s;
}

Tree left_branching(const Sentence& s) {
    Tree t{s, {}};
    const std::size_t n = s.size();
    for (std::size_t k = 0; k < n; ++k) t.constituents.push_back({0, n - k, std::to_string(k + 1)});
    return t;
}

Tree right_branching(const Sentence& s) {
    Tree t{s, {}};
    const std::size_t n = s.size();
    for (std::size_t k = 0; k < n; ++k) t.constituents.push_back({k, n, std::to_string(k + 1)});
    return t;
}

Treebank random_baseline(const Corpus& corpus, std::uint64_t seed) {
    Treebank out;
    out.reserve(corpus.size());
    for (std::size_t k = 0; k < corpus.size(); ++k) {
        auto rng = stream_for(seed, k);
        out.push_back(coin(rng) ? left_branching(corpus[k]) : right_branching(corpus[k]));
    }
    return out;
}

std::vector<RecursionPair> detect_recursion(const Treebank& treebank) {
    std::vector<RecursionPair> out;
    for (std::size_t t = 0; t < treebank.size(); ++t) {
        const auto& cs = treebank[t].constituents;
        for (std::size_t i = 0; i < cs.size(); ++i) {
            for (std::size_t j = 0; j < cs.size(); ++j) {
                if (i == j || cs[i].label != cs[j].label) continue;
                if (cs[i].begin > cs[j].begin || cs[i].end < cs[j].end) continue;
                // equal spans are reported once, outer first in storage order
                if (cs[i].begin == cs[j].begin && cs[i].end == cs[j].end && j < i) continue;
                out.push_back({t, cs[i], cs[j]});
            }
        }
    }
    return out;
}

std::vector<CurvePoint> learning_curve(const Corpus& corpus, const Treebank& gold, std::size_t step,
                                       const Learner& learn, const ScoreOptions& options) {
    if (step == 0) throw std::invalid_argument("step must be positive");
    if (gold.size() != corpus.size()) throw std::invalid_argument("gold treebank and corpus differ in size");
    if (step > corpus.size()) throw std::invalid_argument("step exceeds corpus size");
    std::vector<CurvePoint> points;
    for (std::size_t n = step; n <= corpus.size(); n += step) {
        const Corpus prefix(corpus.begin(), corpus.begin() + static_cast<std::ptrdiff_t>(n));
        const Treebank gold_prefix(gold.begin(), gold.begin() + static_cast<std::ptrdiff_t>(n));
        points.push_back({n, score_treebank(gold_prefix, learn(prefix), options)});
    }
    return points;
}

MeanStd mean_std(std::span<const double> values) {
    MeanStd r;
    if (values.empty()) return r;
    double sum = 0;
    for (double v : values) sum += v;
    r.mean = sum / static_cast<double>(values.size());
    if (values.size() < 2) return r;
    double sq = 0;
    for (double v : values) sq += (v - r.mean) * (v - r.mean);
    r.std = std::sqrt(sq / static_cast<double>(values.size() - 1));
    return r;
}

std::string format_percent(double ratio) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", ratio * 100.0);
    return buf;
}

namespace {

std::string row(const std::string& key, double r, double p, double f) {
    return key + "," + format_percent(r) + "," + format_percent(p) + "," + format_percent(f) + "\n";
}

}  // namespace

std::string curve_csv(const std::vector<CurvePoint>& points) {
    std::string out = "prefix,recall,precision,fscore\n";
    for (const auto& pt : points)
        out += row(std::to_string(pt.prefix), pt.score.recall, pt.score.precision, pt.score.f_score);
    return out;
}

std::string runs_csv(const std::vector<BracketScore>& runs) {
    std::string out = "run,recall,precision,fscore\n";
    std::vector<double> r, p, f;
    for (std::size_t k = 0; k < runs.size(); ++k) {
        out += row(std::to_string(k + 1), runs[k].recall, runs[k].precision, runs[k].f_score);
        r.push_back(runs[k].recall);
        p.push_back(runs[k].precision);
        f.push_back(runs[k].f_score);
    }
    if (runs.size() > 1) {
        const auto mr = mean_std(r), mp = mean_std(p), mf = mean_std(f);
        out += row("mean", mr.mean, mp.mean, mf.mean);
        out += row("std", mr.std, mp.std, mf.std);
    }
    return out;
}

}  // namespace abl
