#include <catch_amalgamated.hpp>

#include <lpmln/selftest.hpp>
#include <lpmln/textio.hpp>

#include "oracle.hpp"
#include "util.hpp"

#include <cmath>

using namespace lpmln;
using Catch::Matchers::WithinAbs;

namespace {
Interpretation random_interpretation(gen::Rng& rng, std::size_t n) { return gen::interpretation(rng, n); }

WeakProgram random_weak(gen::Rng& rng) {
    auto        n = 1 + rng() % 6;
    WeakProgram w;
    w.atoms = gen::atoms(n);
    w.rules = gen::rules(rng, n, 1 + rng() % 6);
    for (auto k = rng() % 4; k-- > 0;) {
        WeakConstraint c;
        c.pos.push_back(static_cast<AtomId>(rng() % n));
        if (rng() % 2) { c.neg = Formula::negate(Formula::make_atom(static_cast<AtomId>(rng() % n))); }
        c.weight = static_cast<long long>(rng() % 5) - 1;
        w.weak.push_back(std::move(c));
    }
    return w;
}
} // namespace

TEST_CASE("choice rules are satisfied by every interpretation", "[property]") {
    gen::Rng rng(1);
    for (int i = 0; i != 200; ++i) {
        auto n = 1 + rng() % 6;
        auto a = static_cast<AtomId>(rng() % n);
        auto r = choice_rule(a, {static_cast<AtomId>(rng() % n)}, Formula::negate(Formula::make_atom(0)));
        REQUIRE(satisfies(random_interpretation(rng, n), r));
    }
}

TEST_CASE("negative formulas are closed under connectives", "[property]") {
    gen::Rng rng(2);
    for (int i = 0; i != 200; ++i) {
        auto f = Formula::negate(gen::formula(rng, 4, 3));
        auto g = Formula::negate(gen::formula(rng, 4, 2));
        REQUIRE(is_negative(f));
        REQUIRE(is_negative(Formula::conj({f, g})));
        REQUIRE(is_negative(Formula::disj({f, g})));
        REQUIRE(is_negative(Formula::negate(gen::formula(rng, 4, 3))));
    }
}

TEST_CASE("stable models of a subprogram that satisfy the program are stable models of it", "[property]") {
    gen::Rng    rng(3);
    std::size_t relevant = 0;
    for (int i = 0; i != 2000; ++i) {
        auto n     = 1 + rng() % 10;
        auto rules = gen::rules(rng, n, 1 + rng() % 12);
        std::vector<Rule> sub;
        for (const auto& r : rules) {
            if (rng() % 2) { sub.push_back(r); }
        }
        auto I = random_interpretation(rng, n);
        if (!is_stable_model(sub, I)) { continue; }
        if (!std::all_of(rules.begin(), rules.end(), [&](const Rule& r) { return satisfies(I, r); })) { continue; }
        ++relevant;
        REQUIRE(is_stable_model(rules, I));
    }
    REQUIRE(relevant > 20);
}

TEST_CASE("soft-only semantics coincides with the full semantics when hard rules are satisfiable",
          "[property]") {
    gen::Rng rng(4);
    for (int i = 0; i != 200; ++i) {
        auto g = gen::lpmln_program(rng);
        if (!has_hard_consistent_model(g)) { continue; }
        auto d = distribution(g);
        REQUIRE(d.max_tier == g.num_hard());
        REQUIRE(same_distribution(soft_only_distribution(g), d, 1e-9));
    }
}

TEST_CASE("raising the weight of the friendship rule raises influence", "[property]") {
    auto text  = testutil::read_corpus("friends.lpmln");
    auto g1    = ground_program(parse_lpmln(text));
    auto pos   = text.find("1 : influence");
    auto text2 = text;
    text2.replace(pos, 1, "2");
    auto g2 = ground_program(parse_lpmln(text2));
    auto d1 = distribution(g1), d2 = distribution(g2);
    for (auto q : {"influence(a,b)", "influence(b,c)", "influence(a,c)"}) {
        auto p1 = prob_query(d1, parse_query(q, g1.signature, g1.atoms));
        auto p2 = prob_query(d2, parse_query(q, g2.signature, g2.atoms));
        REQUIRE(p2 > p1);
    }
}

TEST_CASE("shifting the weight of a rule satisfied across the support changes nothing", "[property]") {
    gen::Rng rng(5);
    std::size_t shifted = 0;
    for (int i = 0; i != 300; ++i) {
        auto g = gen::lpmln_program(rng);
        auto d = distribution(g);
        if (d.entries.empty()) { continue; }
        for (std::size_t k = 0; k != g.rules.size(); ++k) {
            if (g.rules[k].weight.hard) { continue; }
            bool everywhere = std::all_of(d.entries.begin(), d.entries.end(),
                                          [&](const DistEntry& e) { return satisfies(e.I, g.rules[k].rule); });
            if (!everywhere) { continue; }
            auto h = g;
            h.rules[k].weight.soft += 2.5;
            REQUIRE(same_distribution(distribution(h), d, 1e-9));
            ++shifted;
            break;
        }
    }
    REQUIRE(shifted > 20);
}

TEST_CASE("optimal stable models minimize the penalty", "[property]") {
    gen::Rng rng(6);
    for (int i = 0; i != 300; ++i) {
        auto w  = random_weak(rng);
        auto sm = oracle::stable_models(w.rules, w.atoms.size());
        if (sm.empty()) {
            REQUIRE_THROWS_AS(optimal_stable_models(w), Error);
            continue;
        }
        auto cost = [&](oracle::Mask I) {
            long long c = 0;
            for (const auto& wc : w.weak) {
                if (oracle::eval(wc.body(), I)) { c += wc.weight; }
            }
            return c;
        };
        long long best = cost(sm.front());
        for (auto I : sm) { best = std::min(best, cost(I)); }
        std::vector<oracle::Mask> want;
        for (auto I : sm) {
            if (cost(I) == best) { want.push_back(I); }
        }
        std::vector<oracle::Mask> got;
        for (const auto& I : optimal_stable_models(w)) {
            got.push_back(oracle::mask_of(I));
            REQUIRE(penalty(w, I) == best);
        }
        REQUIRE(got == want);
    }
}

TEST_CASE("probabilistic facts keep their marginals", "[property]") {
    gen::Rng rng(7);
    for (int i = 0; i != 150; ++i) {
        auto p = gen::problog(rng);
        auto d = distribution(problog_to_lpmln(p));
        for (const auto& f : p.facts) {
            REQUIRE_THAT(prob_query(d, Formula::make_atom(f.atom)), WithinAbs(f.prob, 1e-9));
        }
    }
}

TEST_CASE("the choice weight of the MLN embedding does not matter", "[property]") {
    gen::Rng rng(8);
    for (int i = 0; i != 100; ++i) {
        auto L = gen::mln(rng);
        auto d = distribution(mln_to_lpmln(L));
        for (double w : {1.7, -2.0}) { REQUIRE(same_distribution(distribution(mln_to_lpmln(L, w)), d, 1e-9)); }
    }
}

TEST_CASE("selftest properties pass", "[property][selftest]") {
    SelftestOptions opts;
    opts.seed       = 2024;
    opts.iterations = 60;
    auto reports    = run_selftest(opts);
    REQUIRE(reports.size() == selftest_properties().size());
    for (const auto& r : reports) {
        CAPTURE(r.name, r.counterexample.value_or(""));
        REQUIRE(r.ok());
        REQUIRE(r.cases == opts.iterations);
    }
}

TEST_CASE("selftest is deterministic for a fixed seed", "[property][selftest]") {
    SelftestOptions opts;
    opts.seed       = 9;
    opts.iterations = 20;
    opts.only       = {"asp-uniform", "sm-subset"};
    auto a          = run_selftest(opts);
    auto b          = run_selftest(opts);
    REQUIRE(a.size() == 2);
    for (std::size_t i = 0; i != a.size(); ++i) {
        REQUIRE(a[i].name == b[i].name);
        REQUIRE(a[i].cases == b[i].cases);
        REQUIRE(a[i].skipped == b[i].skipped);
    }
}
