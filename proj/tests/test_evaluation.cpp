#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "abl/evaluation.hpp"
#include "abl/pipeline.hpp"
#include "oracles.hpp"

using namespace abl;
using oracle::words;

TEST_CASE("f-score arithmetic") {
    CHECK(f_score(0.2582, 0.5473) * 100 == doctest::Approx(35.09).epsilon(1e-4));
    CHECK(f_score(0.5, 0.5) == doctest::Approx(0.5));
    CHECK(f_score(0.0, 0.0) == 0.0);
    CHECK(f_score(0.4, 0.8, 2.0) == doctest::Approx(5 * 0.4 * 0.8 / (4 * 0.8 + 0.4)));
    CHECK(format_percent(f_score(0.2582, 0.5473)) == "35.09");
}

TEST_CASE("scoring") {
    const Treebank gold{parse_tree("(S (NP a) (VP b c))")};
    SUBCASE("identity") {
        const auto s = score_treebank(gold, gold);
        CHECK(s.recall == 1.0);
        CHECK(s.precision == 1.0);
        CHECK(s.f_score == 1.0);
    }
    SUBCASE("unlabeled span matching") {
        const auto s = score_treebank(gold, {parse_tree("(1 (2 a) b c)")});
        CHECK(s.matched == 2);
        CHECK(s.gold == 3);
        CHECK(s.learned == 2);
        CHECK(s.recall == doctest::Approx(2.0 / 3));
        CHECK(s.precision == 1.0);
    }
    SUBCASE("exclusions") {
        const Treebank learned{parse_tree("(1 (2 a) b c)")};
        const auto s = score_treebank(gold, learned, {true, false, 1.0});
        CHECK(s.gold == 2);
        CHECK(s.learned == 1);
        const auto t = score_treebank(gold, learned, {true, true, 1.0});
        CHECK(t.gold == 1);
        CHECK(t.learned == 0);
        CHECK(t.no_learned);
        CHECK(t.precision == 0.0);
    }
    SUBCASE("multiset counting of unary chains") {
        const Treebank g{parse_tree("(S (NP (N a)) b)")};
        const auto s = score_treebank(g, {parse_tree("(1 (2 a) b)")});
        CHECK(s.matched == 2);
        CHECK(s.gold == 3);
    }
    SUBCASE("micro average") {
        const Treebank g{parse_tree("(S a (X b c))"), parse_tree("(S d)")};
        const Treebank l{parse_tree("(1 (2 a b) c)"), parse_tree("(1 d)")};
        const auto s = score_treebank(g, l);
        CHECK(s.matched == 2);
        CHECK(s.gold == 3);
        CHECK(s.learned == 3);
    }
    SUBCASE("yield mismatch names the index") {
        try {
            score_treebank({parse_tree("(1 a)"), parse_tree("(1 b)")}, {parse_tree("(1 a)"), parse_tree("(1 c)")});
            FAIL("expected an error");
        } catch (const std::invalid_argument& e) {
            CHECK(std::string(e.what()).find("sentence 1") != std::string::npos);
        }
    }
}

TEST_CASE("score properties") {
    const Treebank gold{parse_tree("(S (NP a b) (VP c (NP d e)))")};
    const auto base = score_treebank(gold, {parse_tree("(1 (2 a b) c d e)")});
    const auto more = score_treebank(gold, {parse_tree("(1 (2 a b) (3 c d e))")});
    const auto wrong = score_treebank(gold, {parse_tree("(1 (2 a b) c (3 d e))")});
    const auto bad = score_treebank(gold, {parse_tree("(1 (2 a b c) d e)")});
    CHECK(more.recall >= base.recall);
    CHECK(wrong.recall >= base.recall);
    CHECK(bad.precision <= 1.0);
    for (const auto& s : {base, more, wrong, bad}) {
        CHECK(s.f_score >= std::min(s.recall, s.precision) - 1e-12);
        CHECK(s.f_score <= std::max(s.recall, s.precision) + 1e-12);
    }
}

TEST_CASE("branching baselines") {
    const Sentence s = words("Oscar sees Big Bird");
    CHECK(serialize_tree(left_branching(s)) == "(1 (2 (3 (4 Oscar) sees) Big) Bird)");
    CHECK(serialize_tree(right_branching(s)) == "(1 Oscar (2 sees (3 Big (4 Bird))))");
    CHECK(left_branching(words("x")).constituents == std::vector<Constituent>{{0, 1, "1"}});
    CHECK(right_branching(words("x")).constituents == std::vector<Constituent>{{0, 1, "1"}});
}

TEST_CASE("random baseline") {
    const Treebank gold = oracle::generate(oracle::flat_grammar(), 60, 1);
    const Corpus c = oracle::yields(gold);
    const Treebank a = random_baseline(c, 4);
    CHECK(a == random_baseline(c, 4));
    int left = 0;
    for (std::size_t k = 0; k < c.size(); ++k) {
        CHECK(a[k].sentence == c[k]);
        CHECK_NOTHROW(bracket(a[k]));
        if (a[k] == left_branching(c[k])) ++left;
        else CHECK(a[k] == right_branching(c[k]));
    }
    CHECK(left > 10);
    CHECK(left < 50);
    CHECK(detect_recursion(a).empty());
}

TEST_CASE("recursion") {
    const Treebank tb{parse_tree("(0 Fares less than one (32 hundred fifty one (32 dollars)))")};
    const auto r = detect_recursion(tb);
    REQUIRE(r.size() == 1);
    CHECK(r[0].outer.label == "32");
    CHECK(r[0].outer == Constituent{4, 8, "32"});
    CHECK(r[0].inner == Constituent{7, 8, "32"});
    CHECK(detect_recursion({parse_tree("(1 (2 a) (3 b))")}).empty());
    CHECK(detect_recursion({parse_tree("(1 (2 (2 a)) b)")}).size() == 1);
}

TEST_CASE("mean and standard deviation") {
    const double v[] = {1.0, 2.0, 3.0, 4.0};
    const auto m = mean_std(v);
    CHECK(m.mean == 2.5);
    CHECK(m.std == doctest::Approx(std::sqrt(5.0 / 3.0)));
    const double one[] = {7.0};
    CHECK(mean_std(one).std == 0.0);
}

TEST_CASE("csv output") {
    BracketScore s;
    s.recall = 0.5;
    s.precision = 0.25;
    s.f_score = f_score(0.5, 0.25);
    CHECK(runs_csv({s}) == "run,recall,precision,fscore\n1,50.00,25.00,33.33\n");
    const std::string two = runs_csv({s, s});
    CHECK(two.find("mean,50.00,25.00,33.33\n") != std::string::npos);
    CHECK(two.find("std,0.00,0.00,0.00\n") != std::string::npos);
    CHECK(curve_csv({{10, s}}) == "prefix,recall,precision,fscore\n10,50.00,25.00,33.33\n");
}

TEST_CASE("learning curve") {
    const Treebank gold = oracle::generate(oracle::flat_grammar(), 40, 2);
    const Corpus c = oracle::yields(gold);
    RunConfig cfg;
    const Learner learn = [&](const Corpus& prefix) { return learn_treebank(prefix, cfg, 0); };
    const auto pts = learning_curve(c, gold, 15, learn);
    REQUIRE(pts.size() == 2);
    CHECK(pts[0].prefix == 15);
    CHECK(pts[1].prefix == 30);
    const auto whole = learning_curve(c, gold, c.size(), learn);
    REQUIRE(whole.size() == 1);
    const auto full = score_treebank(gold, learn(c));
    CHECK(whole[0].score.f_score == full.f_score);
    CHECK_THROWS_AS(learning_curve(c, gold, 0, learn), std::invalid_argument);
    CHECK_THROWS_AS(learning_curve(c, gold, 41, learn), std::invalid_argument);
}
