#include <catch_amalgamated.hpp>

#include <lpmln/selftest.hpp>
#include <lpmln/textio.hpp>

#include "oracle.hpp"
#include "util.hpp"

#include <cmath>

using namespace lpmln;
using Catch::Matchers::WithinAbs;

namespace {
struct Row {
    std::vector<std::string> I;
    std::vector<std::size_t> satisfied; // 1-based
    SymbolicWeight           weight;
    double                   prob;
};

std::vector<std::string> sorted(std::vector<std::string> xs) {
    std::sort(xs.begin(), xs.end());
    return xs;
}

void check_table(const GroundProgram& g, const std::vector<Row>& want) {
    auto rows = full_table(g);
    REQUIRE(rows.size() == want.size());
    for (const auto& w : want) {
        auto I  = testutil::interp(g.atoms, {});
        for (const auto& n : w.I) { I.insert(testutil::id(g.atoms, n)); }
        auto it = std::find_if(rows.begin(), rows.end(), [&](const TableRow& r) { return r.I == I; });
        REQUIRE(it != rows.end());
        std::vector<std::size_t> sat;
        for (auto i : it->satisfied) { sat.push_back(i + 1); }
        CAPTURE(I.str(g.atoms));
        REQUIRE(sat == w.satisfied);
        REQUIRE(it->weight.is_zero() == w.weight.is_zero());
        if (!w.weight.is_zero()) {
            REQUIRE(it->weight.hard_count() == w.weight.hard_count());
            REQUIRE_THAT(it->weight.soft_sum(), WithinAbs(w.weight.soft_sum(), 1e-12));
        }
        REQUIRE_THAT(it->prob, WithinAbs(w.prob, 1e-9));
    }
}
} // namespace

TEST_CASE("birds: full table", "[infer]") {
    auto        g = testutil::ground_corpus("birds.lpmln");
    std::string B = "bird(jo)", R = "residentBird(jo)", M = "migratoryBird(jo)";
    check_table(g, {
                       {{}, {1, 2, 3}, SymbolicWeight(3, 0), 0},
                       {{R}, {2, 3, 4}, SymbolicWeight(3, 0), 0},
                       {{M}, {1, 3, 5}, SymbolicWeight(3, 0), 0},
                       {{B}, {1, 2, 3}, SymbolicWeight::zero(), 0},
                       {{R, B}, {1, 2, 3, 4}, SymbolicWeight(4, 0), 1.0 / 3},
                       {{M, B}, {1, 2, 3, 5}, SymbolicWeight(4, 0), 1.0 / 3},
                       {{R, M}, {4, 5}, SymbolicWeight(2, 0), 0},
                       {{R, M, B}, {1, 2, 4, 5}, SymbolicWeight(4, 0), 1.0 / 3},
                   });
    auto d = distribution(g);
    REQUIRE(d.max_tier == 4);
    auto q = [&](const char* text) { return parse_query(text, g.signature, g.atoms); };
    REQUIRE_THAT(prob_query(d, q("bird(jo)")), WithinAbs(1.0, 1e-12));
    REQUIRE_THAT(cond_prob(d, q("bird(jo)"), q("residentBird(jo)")), WithinAbs(1.0, 1e-12));
    REQUIRE_THAT(cond_prob(d, q("residentBird(jo)"), q("bird(jo)")), WithinAbs(2.0 / 3, 1e-12));
}

TEST_CASE("birds with soft facts: full table", "[infer]") {
    auto        g = testutil::ground_corpus("birds_weighted.lpmln");
    std::string B = "bird(jo)", R = "residentBird(jo)", M = "migratoryBird(jo)";
    double      e = std::exp(1.0), z = e * e + e + 1;
    check_table(g, {
                       {{}, {1, 2, 3}, SymbolicWeight(3, 0), 1 / z},
                       {{R}, {2, 3, 4}, SymbolicWeight(2, 2), 0},
                       {{M}, {1, 3, 5}, SymbolicWeight(2, 1), 0},
                       {{B}, {1, 2, 3}, SymbolicWeight::zero(), 0},
                       {{R, B}, {1, 2, 3, 4}, SymbolicWeight(3, 2), e * e / z},
                       {{M, B}, {1, 2, 3, 5}, SymbolicWeight(3, 1), e / z},
                       {{R, M}, {4, 5}, SymbolicWeight(0, 3), 0},
                       {{R, M, B}, {1, 2, 4, 5}, SymbolicWeight(2, 3), 0},
                   });
    auto I = testutil::interp(g.atoms, {R, B});
    REQUIRE(unnormalized_weight(g, I) == SymbolicWeight(3, 2));
    auto d = distribution(g);
    REQUIRE(d.entries.size() == 3);
    REQUIRE(d.entries.front().I.count() == 0);
    REQUIRE_THAT(prob_query(d, parse_query("bird(jo)", g.signature, g.atoms)), WithinAbs(0.9100, 1e-4));
}

TEST_CASE("conditioning on an impossible event", "[infer]") {
    auto g = testutil::ground_corpus("birds.lpmln");
    auto d = distribution(g);
    auto q = parse_query("bird(jo)", g.signature, g.atoms);
    auto c = parse_query("not bird(jo)", g.signature, g.atoms);
    REQUIRE_THROWS_AS(cond_prob(d, q, c), Error);
}

TEST_CASE("soft-only semantics needs a hard-consistent stable model", "[infer]") {
    auto g = testutil::ground_corpus("birds.lpmln");
    try {
        soft_only_distribution(g);
        FAIL("expected NoHardConsistentModel");
    }
    catch (const Error& e) {
        REQUIRE(e.code() == Errc::NoHardConsistentModel);
    }
    auto h = testutil::ground_corpus("bird_choice.lpmln");
    REQUIRE(same_distribution(soft_only_distribution(h), distribution(h), 1e-12));
}

TEST_CASE("distribution agrees with the definition", "[infer][property]") {
    gen::Rng rng(GENERATE(1, 2, 3));
    for (int i = 0; i != 150; ++i) {
        auto g    = gen::lpmln_program(rng, 6, 8);
        auto want = oracle::distribution(g);
        auto d    = distribution(g);
        CAPTURE(print(g));
        REQUIRE(oracle::max_diff(d.by_name(), want) < 1e-9);
        double total = 0.0;
        for (const auto& e : d.entries) {
            total += e.prob;
            REQUIRE(e.prob > 0.0);
            REQUIRE(unnormalized_weight(g, e.I).hard_count() == d.max_tier);
        }
        if (!d.entries.empty()) { REQUIRE_THAT(total, WithinAbs(1.0, 1e-9)); }

        auto soft = oracle::soft_only(g);
        if (soft.empty()) { REQUIRE_THROWS_AS(soft_only_distribution(g), Error); }
        else { REQUIRE(oracle::max_diff(soft_only_distribution(g).by_name(), soft) < 1e-9); }
    }
}

TEST_CASE("full table agrees with the definition", "[infer][property]") {
    gen::Rng rng(8);
    for (int i = 0; i != 100; ++i) {
        auto g    = gen::lpmln_program(rng, 5, 7);
        auto want = oracle::distribution(g);
        auto rows = full_table(g);
        REQUIRE(rows.size() == (std::size_t{1} << g.atoms.size()));
        for (const auto& r : rows) {
            auto m = oracle::mask_of(r.I);
            for (std::size_t k = 0; k != g.rules.size(); ++k) {
                bool in = std::find(r.satisfied.begin(), r.satisfied.end(), k) != r.satisfied.end();
                REQUIRE(in == oracle::rule_holds(g.rules[k].rule, m));
            }
            auto it = want.find(oracle::names(g.atoms, m));
            REQUIRE_THAT(r.prob, WithinAbs(it == want.end() ? 0.0 : it->second, 1e-9));
        }
    }
}

TEST_CASE("parallel search gives the same distribution", "[infer]") {
    gen::Rng rng(31);
    Limits   par;
    par.jobs = 3;
    for (int i = 0; i != 50; ++i) {
        auto g = gen::lpmln_program(rng, 9, 10);
        REQUIRE(same_distribution(distribution(g, par), distribution(g), 1e-12));
    }
}

TEST_CASE("MLN distribution agrees with the definition", "[infer][property]") {
    gen::Rng rng(41);
    for (int i = 0; i != 150; ++i) {
        auto L = gen::mln(rng);
        REQUIRE(oracle::max_diff(mln_distribution(L).by_name(), oracle::mln(L)) < 1e-9);
    }
    auto L = testutil::load<MlnProgram>(Dialect::Mln, "smokers.mln");
    REQUIRE(oracle::max_diff(mln_distribution(L).by_name(), oracle::mln(L)) < 1e-9);
}

TEST_CASE("large soft weights do not overflow", "[infer]") {
    auto g = ground_program(parse_lpmln("900 : a.\n1000 : b.\n{a}.\n{b}."));
    auto d = distribution(g);
    REQUIRE(oracle::max_diff(d.by_name(), oracle::distribution(g)) < 1e-9);
    REQUIRE_THAT(d.prob(testutil::interp(g.atoms, {"a", "b"})), WithinAbs(1.0, 1e-9));
}

TEST_CASE("friends", "[infer]") {
    auto g = testutil::ground_corpus("friends.lpmln");
    auto d = distribution(g);
    auto p = [&](const char* q) { return prob_query(d, parse_query(q, g.signature, g.atoms)); };
    double s = 1.0 / (1.0 + std::exp(-1.0));
    REQUIRE_THAT(p("influence(a,b)"), WithinAbs(s, 1e-9));
    REQUIRE_THAT(p("influence(b,c)"), WithinAbs(s, 1e-9));
    REQUIRE_THAT(p("influence(a,c)"), WithinAbs(s * s, 1e-9));
}
