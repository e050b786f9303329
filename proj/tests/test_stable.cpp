#include <catch_amalgamated.hpp>

#include <lpmln/selftest.hpp>

#include "oracle.hpp"
#include "util.hpp"

using namespace lpmln;

namespace {
Formula atom(AtomId a) { return Formula::make_atom(a); }
Formula neg(Formula f) { return Formula::negate(std::move(f)); }

std::vector<oracle::Mask> masks(const std::vector<Interpretation>& xs) {
    std::vector<oracle::Mask> out;
    for (const auto& I : xs) { out.push_back(oracle::mask_of(I)); }
    return out;
}

std::vector<oracle::Mask> models_of(const std::vector<Formula>& fs, std::size_t n) {
    std::vector<oracle::Mask> out;
    for (oracle::Mask I = 0; I < (oracle::Mask{1} << n); ++I) {
        if (std::all_of(fs.begin(), fs.end(), [&](const Formula& f) { return oracle::eval(f, I); })) {
            out.push_back(I);
        }
    }
    return out;
}
} // namespace

TEST_CASE("reducts drop rules whose negative part fails", "[stable]") {
    // a <- not b.   b <- not a.   c <- a, not not c.
    std::vector<Rule> rules{{{0}, {}, neg(atom(1))}, {{1}, {}, neg(atom(0))}, choice_rule(2, {0})};
    Interpretation    I(3);
    I.insert(0);
    auto red = reduct(rules, I);
    REQUIRE(red.size() == 1);
    REQUIRE(red[0].head == std::vector<AtomId>{0});
    REQUIRE(red[0].neg.op == Connective::True);
    I.insert(2);
    REQUIRE(reduct(rules, I).size() == 2);
}

TEST_CASE("small programs", "[stable]") {
    SECTION("disjunction is minimal") {
        std::vector<Rule> rules{{{0, 1}, {}, Formula::truth()}};
        auto              sm = enumerate_stable_models(rules, 2);
        REQUIRE(masks(sm) == std::vector<oracle::Mask>{1, 2});
    }
    SECTION("choice") {
        std::vector<Rule> rules{choice_rule(0)};
        REQUIRE(masks(enumerate_stable_models(rules, 1)) == std::vector<oracle::Mask>{0, 1});
    }
    SECTION("positive loop is unfounded") {
        std::vector<Rule> rules{{{0}, {1}, Formula::truth()}, {{1}, {0}, Formula::truth()}};
        REQUIRE(masks(enumerate_stable_models(rules, 2)) == std::vector<oracle::Mask>{0});
    }
    SECTION("constraint kills the only candidate") {
        std::vector<Rule> rules{{{0}, {}, Formula::truth()}, {{}, {0}, Formula::truth()}};
        REQUIRE(enumerate_stable_models(rules, 1).empty());
    }
    SECTION("even negative cycle") {
        std::vector<Rule> rules{{{0}, {}, neg(atom(1))}, {{1}, {}, neg(atom(0))}};
        REQUIRE(masks(enumerate_stable_models(rules, 2)) == std::vector<oracle::Mask>{1, 2});
    }
}

TEST_CASE("stable models agree with the definition", "[stable][property]") {
    gen::Rng rng(GENERATE(1, 2, 3, 4));
    for (int i = 0; i != 150; ++i) {
        auto n     = 1 + rng() % 7;
        auto rules = gen::rules(rng, n, 1 + rng() % 9);
        auto want  = oracle::stable_models(rules, n);
        REQUIRE(masks(enumerate_stable_models(rules, n)) == want);
        for (oracle::Mask I = 0; I < (oracle::Mask{1} << n); ++I) {
            Interpretation J(n);
            for (AtomId a = 0; a != n; ++a) { J.assign(a, (I >> a) & 1u); }
            REQUIRE(is_stable_model(rules, J) == oracle::is_stable(rules, n, I));
        }
    }
}

TEST_CASE("parallel enumeration matches sequential", "[stable]") {
    gen::Rng rng(99);
    Limits   par;
    par.jobs = 4;
    for (int i = 0; i != 60; ++i) {
        auto g = gen::asp_program(rng, 10, 12);
        REQUIRE(enumerate_stable_models(g, par) == enumerate_stable_models(g));
    }
}

TEST_CASE("search with hard rules only returns the stable models of the program", "[stable]") {
    gen::Rng rng(5);
    for (int i = 0; i != 100; ++i) {
        auto          g = gen::lpmln_program(rng, 7, 9);
        SearchOptions opts;
        opts.all_hard       = true;
        opts.max_violations = 0;
        std::vector<oracle::Mask> got;
        for (const auto& m : search_models(g, opts)) { got.push_back(oracle::mask_of(m.I)); }
        REQUIRE(got == oracle::stable_models(g.unweighted(), g.atoms.size()));
    }
}

TEST_CASE("tightness", "[stable]") {
    REQUIRE(is_tight(testutil::ground_corpus("birds.lpmln").unweighted(), 3));
    auto f = testutil::ground_corpus("friends.lpmln");
    REQUIRE_FALSE(is_tight(f.unweighted(), f.atoms.size()));
    // p <- not not p is tight
    std::vector<Rule> choice{choice_rule(0)};
    REQUIRE(is_tight(choice, 1));
    std::vector<Rule> self{{{0}, {0}, Formula::truth()}};
    REQUIRE_FALSE(is_tight(self, 1));
}

TEST_CASE("strongly connected components", "[stable]") {
    std::vector<std::vector<AtomId>> succ{{1}, {0}, {0, 3}, {}};
    auto                             sccs = strongly_connected_components(succ);
    REQUIRE(sccs.size() == 3);
    std::vector<AtomId> first = sccs[0];
    std::sort(first.begin(), first.end());
    // sinks first
    REQUIRE(((first == std::vector<AtomId>{3}) || (first == std::vector<AtomId>{0, 1})));
    REQUIRE(sccs.back() == std::vector<AtomId>{2});
}

TEST_CASE("loops agree with the definition", "[stable][property]") {
    gen::Rng rng(17);
    for (int i = 0; i != 200; ++i) {
        auto n     = 1 + rng() % 6;
        auto rules = gen::rules(rng, n, 1 + rng() % 10);
        auto want  = oracle::loops(rules, n);
        REQUIRE(loops(rules, n) == want);
        REQUIRE(loops(rules, n, {}, true) == want);
    }
}

TEST_CASE("loop limits", "[stable]") {
    std::vector<Rule> rules;
    for (AtomId a = 0; a != 8; ++a) {
        for (AtomId b = 0; b != 8; ++b) {
            if (a != b) { rules.push_back({{a}, {b}, Formula::truth()}); }
        }
    }
    REQUIRE(loops(rules, 8).size() == 255);
    Limits small;
    small.max_loops = 100;
    REQUIRE_THROWS_AS(loops(rules, 8, small), Error);
}

TEST_CASE("stable models are the models of the rules and their loop formulas", "[stable][property]") {
    gen::Rng rng(23);
    for (int i = 0; i != 200; ++i) {
        auto                 n     = 1 + rng() % 6;
        auto                 rules = gen::rules(rng, n, 1 + rng() % 8);
        std::vector<Formula> fs;
        for (const auto& r : rules) { fs.push_back(r.as_formula()); }
        for (const auto& L : loops(rules, n)) { fs.push_back(loop_formula(rules, L)); }
        REQUIRE(models_of(fs, n) == oracle::stable_models(rules, n));
    }
}

TEST_CASE("tight programs: stable models are the models of the completion", "[stable][property]") {
    gen::Rng rng(29);
    for (int i = 0; i != 200; ++i) {
        auto g     = gen::tight_program(rng);
        auto rules = g.unweighted();
        auto n     = g.atoms.size();
        REQUIRE(is_tight(rules, n));
        std::vector<Formula> fs;
        for (const auto& r : rules) { fs.push_back(r.as_formula()); }
        for (auto& f : completion_formulas(rules, n)) { fs.push_back(std::move(f)); }
        REQUIRE(models_of(fs, n) == oracle::stable_models(rules, n));
    }
}

TEST_CASE("external support of a loop", "[stable]") {
    // p <- q.  q <- p.  p <- not r.
    std::vector<Rule> rules{{{0}, {1}, Formula::truth()}, {{1}, {0}, Formula::truth()}, {{0}, {}, neg(atom(2))}};
    Loop              L{0, 1};
    REQUIRE(external_support(rules, L) == neg(atom(2)));
    auto lf = loop_formula(rules, L);
    REQUIRE(oracle::eval(lf, 0b000));
    REQUIRE_FALSE(oracle::eval(lf, 0b111));
    REQUIRE(oracle::eval(lf, 0b011));
}

TEST_CASE("resource limits", "[stable]") {
    std::vector<Rule> rules;
    for (AtomId a = 0; a != 30; ++a) { rules.push_back(choice_rule(a)); }
    Limits small;
    small.max_atoms = 20;
    REQUIRE_THROWS_AS(enumerate_stable_models(rules, 30, small), Error);
    try {
        enumerate_stable_models(rules, 30, small);
    }
    catch (const Error& e) {
        REQUIRE(e.code() == Errc::UniverseExplosion);
    }
}
