// Acceptance checks: one PASS/FAIL line per criterion. Exit status is
// non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "abl/alignment.hpp"
#include "abl/evaluation.hpp"
#include "abl/grammar.hpp"
#include "abl/pipeline.hpp"
#include "abl/selection.hpp"
#include "oracles.hpp"

using namespace abl;
using oracle::words;
using Clock = std::chrono::steady_clock;

namespace {

struct Failure {
    std::string why;
};

void expect(bool ok, const std::string& why) {
    if (!ok) throw Failure{why};
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

std::vector<std::pair<std::size_t, std::size_t>> link_pairs(const Alignment& al) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (const auto& l : al) out.emplace_back(l.a, l.b);
    return out;
}

// 1 ------------------------------------------------------------------------
std::string figure_edit_distance() {
    const Sentence a = words("monsters like tuna fish sandwiches");
    const Sentence b = words("all monsters like to fish");
    Vocabulary v(true);
    const auto ea = v.encode(a);
    const auto eb = v.encode(b);
    double best = 1e9;
    EditMatrix d(1, 1, 1);
    Alignment links;
    for (int rep = 0; rep < 25; ++rep) {
        const auto t0 = Clock::now();
        d = edit_matrix(ea, eb, CostModel::Default);
        links = traceback_links(ea, eb, d, CostModel::Default);
        best = std::min(best, seconds_since(t0));
    }
    expect(d.distance() == 4.0, "distance " + fmt("%g", d.distance()));
    const std::vector<std::pair<std::size_t, std::size_t>> want{{0, 1}, {1, 2}, {3, 4}};
    expect(link_pairs(links) == want, "links differ");
    expect(best < 1e-3, "took " + fmt("%.3g", best * 1e3) + " ms");
    return "distance 4, links (1,2) (2,3) (4,5), " + fmt("%.1f", best * 1e6) + " us";
}

// 2 ------------------------------------------------------------------------
enum class Op { Mat, Sub, Del, Ins };

double transcript_cost(const Sentence& a, const Sentence& b, const std::vector<Op>& ops) {
    const ScaledCosts c(CostModel::Biased, a.size(), b.size());
    std::int64_t total = 0;
    std::size_t i = 0, j = 0;
    for (Op op : ops) {
        switch (op) {
            case Op::Mat:
                expect(a[i] == b[j], "MAT on unequal words");
                total += c.match(i++, j++);
                break;
            case Op::Sub:
                total += c.substitution();
                ++i, ++j;
                break;
            case Op::Del:
                total += c.deletion();
                ++i;
                break;
            case Op::Ins:
                total += c.insertion();
                ++j;
                break;
        }
    }
    expect(i == a.size() && j == b.size(), "transcript does not cover both sentences");
    return static_cast<double>(total) / static_cast<double>(c.scale());
}

std::string biased_costs() {
    const Sentence a = words("from Sesame Street to England");
    const Sentence b = words("from England to Sesame Street");
    using enum Op;
    const double street = transcript_cost(a, b, {Mat, Ins, Ins, Mat, Mat, Del, Del});
    const double england = transcript_cost(a, b, {Mat, Del, Del, Del, Mat, Ins, Ins, Ins});
    const double to = transcript_cost(a, b, {Mat, Sub, Del, Mat, Sub, Ins});
    expect(street == 8 && england == 9 && to == 7,
           "costs " + fmt("%g", street) + "/" + fmt("%g", england) + "/" + fmt("%g", to));
    const CostFunction biased{CostModel::Biased, false};
    const EditMatrix d = edit_matrix(a, b, biased);
    expect(d.distance() == 7.0, "biased distance " + fmt("%g", d.distance()));
    const Alignment links = traceback_links(a, b, d, biased);
    expect(link_pairs(links) == std::vector<std::pair<std::size_t, std::size_t>>{{0, 0}, {3, 2}},
           "winning alignment does not link 'from' and 'to'");
    return "transcripts cost 8, 9, 7; alignment links 'from' and 'to'";
}

// 3 ------------------------------------------------------------------------
std::string figure_scfg() {
    const Treebank tb{parse_tree("(S (NP Bert) (VP (V sees) (NP Ernie)))"), parse_tree("(S (NP Ernie) (VP (V walks)))")};
    const Scfg g = extract_scfg(tb);
    expect(g.rules().size() == 7, std::to_string(g.rules().size()) + " rules");
    const std::vector<std::pair<CfgRule, double>> want{
        {{"S", {{"NP", false}, {"VP", false}}}, 1.0},  {{"VP", {{"V", false}, {"NP", false}}}, 0.5},
        {{"VP", {{"V", false}}}, 0.5},                 {{"NP", {{"Bert", true}}}, 1.0 / 3},
        {{"NP", {{"Ernie", true}}}, 2.0 / 3},          {{"V", {{"sees", true}}}, 0.5},
        {{"V", {{"walks", true}}}, 0.5}};
    for (const auto& [rule, p] : want) {
        const WeightedRule* r = g.find(rule);
        expect(r != nullptr, "missing rule for " + rule.lhs);
        expect(std::abs(r->probability - p) <= 1e-9, "probability of a " + rule.lhs + " rule");
    }
    return "7 rules, probabilities 1, .5, .5, 1/3, 2/3, .5, .5";
}

// 4 ------------------------------------------------------------------------
std::string f_arithmetic() {
    const double f = f_score(0.2582, 0.5473, 1.0) * 100;
    expect(std::abs(f - 35.09) <= 0.01, "F = " + fmt("%.4f", f));
    return "F(25.82, 54.73) = " + fmt("%.2f", f);
}

// 5 ------------------------------------------------------------------------
std::string alignment_oracles() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(5);
    const char* vocab[] = {"a", "b", "c", "d", "e"};
    for (int round = 0; round < 200; ++round) {
        std::vector<std::string> a(oracle::pick(rng, 8)), b(oracle::pick(rng, 8));
        for (auto& w : a) w = vocab[oracle::pick(rng, 5)];
        for (auto& w : b) w = vocab[oracle::pick(rng, 5)];
        const Sentence sa{a}, sb{b};
        const std::string pair = "'" + sa.text() + "' / '" + sb.text() + "'";
        expect(edit_matrix(sa, sb, {}).distance() == oracle::brute_edit_distance(a, b, false), "distance for " + pair);
        std::vector<std::vector<std::pair<std::size_t, std::size_t>>> got;
        for (const auto& al : all_alignments(sa, sb)) got.push_back(link_pairs(al));
        std::sort(got.begin(), got.end());
        expect(got == oracle::brute_maximal_alignments(a, b), "alignments for " + pair);
    }
    const double s = seconds_since(t0);
    expect(s < 10.0, "took " + fmt("%.1f", s) + " s");
    return "200 pairs agree, " + fmt("%.2f", s) + " s";
}

// 6 ------------------------------------------------------------------------
std::string selection_oracle() {
    std::mt19937_64 rng(6);
    std::size_t checked[2] = {0, 0};
    while (checked[0] < 100 || checked[1] < 100) {
        HypothesisSpace s;
        s.merge_table.reserve_through(6);
        const std::size_t ntrees = 2 + oracle::pick(rng, 3);
        for (std::size_t t = 0; t < ntrees; ++t) {
            const std::size_t len = 3 + oracle::pick(rng, 6);
            std::vector<std::string> w(len);
            for (auto& x : w) x = std::string(1, static_cast<char>('a' + oracle::pick(rng, 3)));
            std::vector<Hypothesis> hyps{{0, len, 1}};
            std::set<std::pair<std::size_t, std::size_t>> used{{0, len}};
            const std::size_t want = oracle::pick(rng, 14);
            for (std::size_t k = 0; k < want; ++k) {
                const std::size_t b = oracle::pick(rng, len);
                const std::size_t e = b + 1 + oracle::pick(rng, len - b);
                if (used.insert({b, e}).second) hyps.push_back({b, e, static_cast<NonTerminal>(2 + oracle::pick(rng, 5))});
            }
            s.trees.emplace_back(Sentence{w}, hyps);
        }
        std::map<std::string, double> by_yield;
        std::map<std::pair<NonTerminal, std::string>, double> by_type_yield;
        std::map<NonTerminal, double> by_type;
        double total = 0;
        for (const auto& t : s.trees)
            for (const auto& h : t.hypotheses) {
                const std::string y = t.sentence.text(h.begin, h.end);
                by_yield[y] += 1;
                by_type_yield[{h.type, y}] += 1;
                by_type[h.type] += 1;
                total += 1;
            }
        for (int branch = 0; branch < 2; ++branch) {
            const Treebank out =
                select(s, {branch ? SelectionModel::Branch : SelectionModel::Leaf, true, rng(), 1});
            for (std::size_t t = 0; t < s.trees.size(); ++t) {
                const auto& hyps = s.trees[t].hypotheses;
                std::vector<double> lp;
                for (const auto& h : hyps) {
                    const std::string y = s.trees[t].sentence.text(h.begin, h.end);
                    lp.push_back(branch ? -std::log(by_type_yield[{h.type, y}] / by_type[h.type])
                                        : -std::log(by_yield[y] / total));
                }
                const auto ref = oracle::brute_select(hyps, lp, true);
                const std::size_t involved = hyps.size() - ref.free.size();
                if (involved == 0 || involved > 12) continue;
                std::set<std::vector<std::pair<std::size_t, std::size_t>>> acceptable;
                for (const auto& opt : ref.optimal) {
                    std::vector<std::pair<std::size_t, std::size_t>> sp;
                    for (auto i : ref.free) sp.emplace_back(hyps[i].begin, hyps[i].end);
                    for (auto i : opt) sp.emplace_back(hyps[i].begin, hyps[i].end);
                    std::sort(sp.begin(), sp.end());
                    acceptable.insert(sp);
                }
                std::vector<std::pair<std::size_t, std::size_t>> got;
                for (const auto& c : out[t].constituents) got.emplace_back(c.begin, c.end);
                std::sort(got.begin(), got.end());
                expect(acceptable.count(got) == 1, std::string(branch ? "branch+" : "leaf+") +
                                                       " differs on '" + s.trees[t].sentence.text() + "'");
                ++checked[branch];
            }
        }
    }
    return std::to_string(checked[0]) + " leaf+ and " + std::to_string(checked[1]) +
           " branch+ fuzzy trees with overlaps agree";
}

// 7 ------------------------------------------------------------------------
std::string elementary_oracle() {
    std::mt19937_64 rng(7);
    for (int round = 0; round < 50; ++round) {
        const std::string text = oracle::random_tree(rng, 8);
        std::vector<oracle::Fragment> got;
        for (const auto& f : enumerate_elementary_trees(parse_tree(text), 0)) got.push_back({f.root, f.bracketed, f.depth});
        std::sort(got.begin(), got.end());
        expect(got == oracle::brute_fragments(text, 0), "fragments of " + text);
    }
    const std::multiset<std::string> figure{
        "(S (NP Bert) (VP (V sees) (NP Ernie)))", "(S (NP Bert) (VP V* (NP Ernie)))", "(S (NP Bert) (VP (V sees) NP*))",
        "(S (NP Bert) (VP V* NP*))",              "(S (NP Bert) VP*)",                "(S NP* (VP (V sees) (NP Ernie)))",
        "(S NP* (VP V* (NP Ernie)))",             "(S NP* (VP (V sees) NP*))",        "(S NP* (VP V* NP*))",
        "(S NP* VP*)",                            "(VP (V sees) (NP Ernie))",         "(VP V* (NP Ernie))",
        "(VP (V sees) NP*)",                      "(VP V* NP*)",                      "(NP Bert)",
        "(V sees)",                               "(NP Ernie)"};
    std::multiset<std::string> got;
    for (const auto& f : enumerate_elementary_trees(parse_tree("(S (NP Bert) (VP (V sees) (NP Ernie)))"), 0))
        got.insert(f.bracketed);
    expect(got == figure, "figure tree gives " + std::to_string(got.size()) + " fragments");
    return "50 random trees agree; figure tree gives its 17 fragments";
}

// 8 ------------------------------------------------------------------------
std::string structural_invariants() {
    const auto t0 = Clock::now();
    const Treebank gold = oracle::generate(oracle::flat_grammar(), 200, 8);
    const Corpus corpus = oracle::yields(gold);
    int combos = 0;
    for (auto inst : {AlignmentInstance::Default, AlignmentInstance::Biased, AlignmentInstance::All}) {
        RunConfig cfg;
        cfg.alignment = inst;
        const HypothesisSpace space = alignment_learning(corpus, {inst, false, 1});
        for (auto sel : {SelectionModel::First, SelectionModel::Leaf, SelectionModel::Branch}) {
            cfg.selection = sel;
            const std::string name = system_name(cfg);
            const Treebank tb = select(space, {sel, true, 8, 1});
            expect(tb.size() == corpus.size(), name + ": treebank size");
            for (std::size_t k = 0; k < tb.size(); ++k) {
                expect(tb[k].sentence == corpus[k], name + ": yield of sentence " + std::to_string(k));
                const auto& cs = tb[k].constituents;
                for (std::size_t i = 0; i < cs.size(); ++i)
                    for (std::size_t j = i + 1; j < cs.size(); ++j)
                        expect(!crosses(cs[i], cs[j]), name + ": overlap in sentence " + std::to_string(k));
            }
            for (const auto& [lhs, mass] : extract_scfg(tb).lhs_mass())
                expect(std::abs(mass - 1.0) <= 1e-9, name + ": rules of " + lhs + " sum to " + fmt("%.12f", mass));
            for (const auto& [root, mass] : extract_stsg(tb, 2).root_mass())
                expect(std::abs(mass - 1.0) <= 1e-9, name + ": fragments of " + root + " sum to " + fmt("%.12f", mass));
            ++combos;
        }
    }
    return std::to_string(combos) + " systems on 200 sentences, " + fmt("%.1f", seconds_since(t0)) + " s";
}

// 9 ------------------------------------------------------------------------
std::string beats_baseline() {
    const auto t0 = Clock::now();
    const Treebank gold = oracle::generate(oracle::flat_grammar(), 200, 8);
    const Corpus corpus = oracle::yields(gold);
    RunConfig cfg;
    cfg.seed = 1;
    const double abl_f = score_treebank(gold, learn_treebank(corpus, cfg, cfg.seed)).f_score;
    std::vector<double> base;
    for (std::uint64_t seed = 0; seed < 10; ++seed) base.push_back(score_treebank(gold, random_baseline(corpus, seed)).f_score);
    const MeanStd b = mean_std(base);
    const double s = seconds_since(t0);
    const std::string detail = "default:leaf+ F " + format_percent(abl_f) + " vs baseline " + format_percent(b.mean) +
                               " (" + format_percent(b.std) + "), " + fmt("%.1f", s) + " s";
    expect(abl_f > b.mean, detail);
    expect(s < 60.0, detail);
    return detail;
}

// 10 -----------------------------------------------------------------------
std::string recursion_found() {
    const Treebank gold = oracle::generate(oracle::recursive_grammar(), 200, 10, 6);
    expect(!detect_recursion(gold).empty(), "generated treebank has no recursion");
    RunConfig cfg;
    const Treebank learned = learn_treebank(oracle::yields(gold), cfg, 0);
    const auto rec = detect_recursion(learned);
    expect(!rec.empty(), "no recursion in the learned treebank");
    std::set<std::size_t> trees;
    for (const auto& r : rec) trees.insert(r.tree);
    return std::to_string(rec.size()) + " recursive pairs in " + std::to_string(trees.size()) +
           " learned trees, e.g. '" + learned[rec[0].tree].sentence.text(rec[0].outer.begin, rec[0].outer.end) +
           "' / '" + learned[rec[0].tree].sentence.text(rec[0].inner.begin, rec[0].inner.end) + "' (type " +
           rec[0].outer.label + ")";
}

// 11 -----------------------------------------------------------------------
std::string reparse_fixed_point() {
    const Treebank fig{parse_tree("(S (NP Bert) (VP (V sees) (NP Ernie)))"), parse_tree("(S (NP Ernie) (VP (V walks)))")};
    expect(reparse_corpus(fig) == fig, "figure treebank changed");
    std::size_t sentences = 0;
    for (const auto& g : {oracle::flat_grammar(), oracle::recursive_grammar()}) {
        const Treebank gold = oracle::generate(g, 200, 11);
        RunConfig cfg;
        for (const Treebank& tb : {gold, learn_treebank(oracle::yields(gold), cfg, 0)}) {
            const CkyParser parser(extract_scfg(tb));
            for (const auto& t : tb) {
                expect(parser.parse(t.sentence).has_value(), "no parse for '" + t.sentence.text() + "'");
                ++sentences;
            }
        }
    }
    return "figure treebank unchanged; " + std::to_string(sentences) + " training sentences parse";
}

// 12 -----------------------------------------------------------------------
std::string licensed_corpora() {
    const char* path = std::getenv("ABL_ATIS_GOLD");
    if (!path || !*path)
        return "declared non-reproducible (licensed corpora); set ABL_ATIS_GOLD to score a local copy, "
               "reference default:leaf+ R 25.82 P 54.73 (approximate, +-2)";
    std::ifstream in(path, std::ios::binary);
    expect(static_cast<bool>(in), std::string("cannot open ") + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    const Treebank gold = parse_treebank(ss.str());
    RunConfig cfg;
    const BracketScore s = score_treebank(gold, learn_treebank(oracle::yields(gold), cfg, 0));
    return "default:leaf+ on " + std::string(path) + ": R " + format_percent(s.recall) + " P " +
           format_percent(s.precision) + " F " + format_percent(s.f_score) + " (reference R 25.82 P 54.73, approximate)";
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<std::string()>>> criteria{
        {"figure edit distance", figure_edit_distance},
        {"biased costs", biased_costs},
        {"figure SCFG", figure_scfg},
        {"F-score arithmetic", f_arithmetic},
        {"alignment oracles", alignment_oracles},
        {"selection oracle", selection_oracle},
        {"elementary tree oracle", elementary_oracle},
        {"end-to-end invariants", structural_invariants},
        {"better than random baseline", beats_baseline},
        {"recursion", recursion_found},
        {"reparse fixed point", reparse_fixed_point},
        {"licensed corpus scores", licensed_corpora},
    };
    int failed = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        std::string status = "PASS", detail;
        try {
            detail = criteria[k].second();
        } catch (const Failure& f) {
            status = "FAIL";
            detail = f.why;
        } catch (const std::exception& e) {
            status = "FAIL";
            detail = std::string("exception: ") + e.what();
        }
        if (status == "FAIL") ++failed;
        std::cout << status << "  " << (k + 1) << ". " << criteria[k].first << ": " << detail << std::endl;
    }
    std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria passed"
              << std::endl;
    return failed == 0 ? 0 : 1;
}
