#include <catch_amalgamated.hpp>

#include <lpmln/selftest.hpp>
#include <lpmln/textio.hpp>

#include "oracle.hpp"
#include "util.hpp"

#include <cmath>

using namespace lpmln;
using Catch::Matchers::WithinAbs;

namespace {
template <class F>
Errc error_of(F&& f) {
    try {
        f();
    }
    catch (const Error& e) {
        return e.code();
    }
    return Errc::PropertyViolation;
}

double query(const Distribution& d, const Signature& sig, const char* text) {
    return prob_query(d, parse_query(text, sig, d.atoms));
}

PlogProgram plog(const std::string& text) { return parse_plog(text, "plog"); }

const char* const dice_head = "#domain die = {d1, d2}.\n#domain score = 1..6.\n#domain person = {mike, john}.\n"
                              "#var D : die.\n#var Y : score.\n"
                              "#const owner(die) : person.\n#const roll(die) : score.\n#const even(die) : bool.\n"
                              "owner(d1)=mike.\nowner(d2)=john.\n"
                              "even(D) :- roll(D)=Y, Y mod 2 = 0.\neven(D)=f :- not even(D).\n"
                              "[r(D)] random(roll(D)).\npr(roll(D)=6 | owner(D)=mike) = 1/4.\n";

double plog_query(const PlogProgram& p, const char* text) {
    auto m = plog_measure(p);
    return plog_prob(m, parse_query(text, p.signature, m.atoms));
}
} // namespace

TEST_CASE("weak constraints", "[frontends]") {
    auto w    = testutil::load<WeakProgram>(Dialect::AspWeak, "weak.asp");
    auto best = optimal_stable_models(w);
    REQUIRE(best.size() == 1);
    REQUIRE(best[0].str(w.atoms) == "{a}");
    REQUIRE(penalty(w, testutil::interp(w.atoms, {"b", "c"})) == 2);
    auto d = distribution(weak_to_lpmln(w));
    REQUIRE(d.entries.size() == 2);
    REQUIRE_THAT(d.prob(widen(best[0], d.atoms.size())), WithinAbs(1.0 / (1.0 + std::exp(-1.0)), 1e-9));

    auto v = parse_weak("a ; b.\n:~ a. [2]");
    REQUIRE(optimal_stable_models(v).at(0).str(v.atoms) == "{b}");
    REQUIRE(error_of([] { optimal_stable_models(parse_weak("a.\n:- a.")); }) == Errc::NoStableModel);
}

TEST_CASE("ASP programs: uniform over the stable models", "[frontends][property]") {
    gen::Rng rng(3);
    std::size_t checked = 0;
    for (int i = 0; i != 300; ++i) {
        auto g  = gen::asp_program(rng);
        auto sm = oracle::stable_models(g.unweighted(), g.atoms.size());
        if (sm.empty()) { continue; }
        ++checked;
        auto d = distribution(asp_to_lpmln(g.signature, g.atoms, g.unweighted()));
        REQUIRE(d.entries.size() == sm.size());
        for (std::size_t k = 0; k != sm.size(); ++k) {
            REQUIRE(oracle::mask_of(d.entries[k].I) == sm[k]);
            REQUIRE_THAT(d.entries[k].prob, WithinAbs(1.0 / static_cast<double>(sm.size()), 1e-12));
        }
    }
    REQUIRE(checked > 100);
}

TEST_CASE("MLNs embed into LP^MLN", "[frontends][property]") {
    gen::Rng rng(4);
    for (int i = 0; i != 150; ++i) {
        auto L = gen::mln(rng);
        REQUIRE(oracle::max_diff(distribution(mln_to_lpmln(L)).by_name(), oracle::mln(L)) < 1e-9);
    }
}

TEST_CASE("completion of tight programs", "[frontends][property]") {
    auto friends = testutil::ground_corpus("friends.lpmln");
    REQUIRE(error_of([&] { completion(friends); }) == Errc::NotTight);
    REQUIRE_NOTHROW(completion(friends, true));

    gen::Rng    rng(5);
    std::size_t checked = 0;
    for (int i = 0; i != 300; ++i) {
        auto g    = gen::tight_program(rng);
        auto want = oracle::soft_only(g);
        REQUIRE(has_hard_consistent_model(g) == !want.empty());
        if (want.empty()) { continue; }
        ++checked;
        REQUIRE(oracle::max_diff(mln_distribution(completion(g)).by_name(), want) < 1e-9);
        REQUIRE(oracle::max_diff(distribution(g).by_name(), want) < 1e-9);
    }
    REQUIRE(checked > 100);
}

TEST_CASE("loop formulas for arbitrary programs", "[frontends][property]") {
    gen::Rng    rng(6);
    std::size_t checked = 0;
    for (int i = 0; i != 300; ++i) {
        auto g    = gen::lpmln_program(rng);
        auto want = oracle::soft_only(g);
        if (want.empty()) { continue; }
        ++checked;
        REQUIRE(oracle::max_diff(mln_distribution(loop_augmented_mln(g)).by_name(), want) < 1e-9);
    }
    REQUIRE(checked > 100);
    auto friends = testutil::ground_corpus("friends.lpmln");
    REQUIRE(same_distribution(mln_distribution(loop_augmented_mln(friends)), distribution(friends), 1e-9));
}

TEST_CASE("ProbLog", "[frontends]") {
    auto p = testutil::load<ProbLogProgram>(Dialect::ProbLog, "coin.problog");
    REQUIRE_THAT(query(problog_distribution(p), p.signature, "r"), WithinAbs(0.72, 1e-9));
    REQUIRE_THAT(query(distribution(problog_to_lpmln(p)), p.signature, "r"), WithinAbs(0.72, 1e-9));

    auto certain = parse_problog("1::a.\n0::b.\n0.5::c.\nd :- a, not b.");
    auto d       = problog_distribution(certain);
    REQUIRE(oracle::max_diff(d.by_name(), oracle::problog(certain)) < 1e-12);
    REQUIRE(oracle::max_diff(distribution(problog_to_lpmln(certain)).by_name(), d.by_name()) < 1e-12);
    REQUIRE_THAT(query(d, certain.signature, "d"), WithinAbs(1.0, 1e-12));

    auto loop = parse_problog("0.5::a.\nb :- not c.\nc :- not b.");
    REQUIRE(error_of([&] { problog_distribution(loop); }) == Errc::NotWellDefined);
    auto none = parse_problog("0.5::a.\nb :- not b, a.");
    REQUIRE(error_of([&] { problog_distribution(none); }) == Errc::NotWellDefined);
}

TEST_CASE("ProbLog programs agree with the sum over total choices", "[frontends][property]") {
    gen::Rng rng(7);
    for (int i = 0; i != 200; ++i) {
        auto p    = gen::problog(rng);
        auto want = oracle::problog(p);
        REQUIRE(oracle::max_diff(problog_distribution(p).by_name(), want) < 1e-9);
        REQUIRE(oracle::max_diff(distribution(problog_to_lpmln(p)).by_name(), want) < 1e-9);
    }
}

TEST_CASE("multi-valued probabilistic programs", "[frontends]") {
    auto m = testutil::load<MvppProgram>(Dialect::Mvpp, "outcome.mvpp");
    REQUIRE_THAT(query(mvpp_direct_distribution(m), m.signature, "win"), WithinAbs(0.25, 1e-12));
    REQUIRE_THAT(query(distribution(mvpp_to_lpmln(m)), m.signature, "win"), WithinAbs(0.25, 1e-9));

    // P(c=x | not both x) by hand: worlds (x,y),(y,x),(y,y) with 0.3·0.8, 0.7·0.2, 0.7·0.8
    auto two = parse_mvpp("#domain v = {x, y}.\n#const c : v.\n#const e : v.\n"
                          "0.3 : c=x | 0.7 : c=y.\n0.2 : e=x | 0.8 : e=y.\n:- c=x, e=x.");
    auto d   = mvpp_direct_distribution(two);
    double z = 0.3 * 0.8 + 0.7 * 0.2 + 0.7 * 0.8;
    REQUIRE(d.entries.size() == 3);
    REQUIRE_THAT(query(d, two.signature, "c=x"), WithinAbs(0.3 * 0.8 / z, 1e-12));
    REQUIRE(same_distribution(distribution(mvpp_to_lpmln(two)), d, 1e-9));

    REQUIRE(error_of([] { mvpp_direct_distribution(parse_mvpp("0 : c=x | 1 : c=y.")); }) ==
            Errc::ZeroProbabilityDeclared);
    REQUIRE(error_of([] { mvpp_direct_distribution(parse_mvpp("0.5 : c=x | 0.5 : c=y.\n:- c=x.\n:- c=y.")); }) ==
            Errc::EmptySmDoublePrime);
}

TEST_CASE("MVPPs agree with their translation", "[frontends][property]") {
    gen::Rng    rng(8);
    std::size_t checked = 0;
    for (int i = 0; i != 150; ++i) {
        auto m = gen::mvpp(rng);
        Distribution direct;
        try {
            direct = mvpp_direct_distribution(m);
        }
        catch (const Error& e) {
            REQUIRE(e.code() == Errc::EmptySmDoublePrime);
            continue;
        }
        ++checked;
        REQUIRE(same_distribution(distribution(mvpp_to_lpmln(m)), direct, 1e-9));
    }
    REQUIRE(checked > 50);
}

TEST_CASE("P-log dice", "[frontends][plog]") {
    auto p = testutil::load<PlogProgram>(Dialect::Plog, "dice.plog");
    REQUIRE(plog_validate(p).empty());
    auto m = plog_measure(p);
    REQUIRE(m.worlds.size() == 36);
    auto W  = testutil::interp(m.atoms, {"owner(d1)=mike", "owner(d2)=john", "roll(d1)=6", "roll(d2)=3",
                                         "even(d1)=t", "even(d2)=f"});
    auto it = std::find_if(m.worlds.begin(), m.worlds.end(), [&](const WorldMeasure& w) { return w.W == W; });
    REQUIRE(it != m.worlds.end());
    REQUIRE_THAT(it->mu_hat, WithinAbs(1.0 / 24, 1e-12));
    REQUIRE_THAT(it->mu, WithinAbs(1.0 / 24, 1e-12));
    auto roll = *p.constant_of(testutil::id(p.atoms, "roll(d1)=6"));
    REQUIRE_THAT(*plog_causal_probability(p, W, roll), WithinAbs(0.25, 1e-12));

    REQUIRE_THAT(plog_query(p, "roll(d1)=6"), WithinAbs(0.25, 1e-12));
    REQUIRE_THAT(plog_query(p, "roll(d1)=1"), WithinAbs(0.15, 1e-12));
    REQUIRE_THAT(plog_query(p, "roll(d2)=6"), WithinAbs(1.0 / 6, 1e-12));
    REQUIRE_THAT(plog_query(p, "even(d1)"), WithinAbs(0.55, 1e-12));
}

TEST_CASE("P-log observations and interventions", "[frontends][plog]") {
    auto observed = plog(std::string(dice_head) + "obs(even(d1)).\n");
    REQUIRE_THAT(plog_query(observed, "roll(d1)=6"), WithinAbs(0.25 / 0.55, 1e-12));
    auto notsix = plog(std::string(dice_head) + "obs(roll(d2)=6).\n");
    REQUIRE_THAT(plog_query(notsix, "even(d2)"), WithinAbs(1.0, 1e-12));

    auto acted = plog(std::string(dice_head) + "do(roll(d1)=3).\n");
    REQUIRE_THAT(plog_query(acted, "roll(d1)=3"), WithinAbs(1.0, 1e-12));
    REQUIRE_THAT(plog_query(acted, "even(d1)"), WithinAbs(0.0, 1e-12));
    REQUIRE_THAT(plog_query(acted, "roll(d2)=4"), WithinAbs(1.0 / 6, 1e-12));

    // PR is empty for an intervened constant, so roll(d1)=3 keeps the default 1/6
    auto m = plog_measure(acted);
    REQUIRE(m.worlds.size() == 6);
    for (const auto& w : m.worlds) {
        REQUIRE_THAT(w.mu_hat, WithinAbs(1.0 / 36, 1e-12));
        REQUIRE_THAT(w.mu, WithinAbs(1.0 / 6, 1e-12));
    }
}

TEST_CASE("P-log validation", "[frontends][plog]") {
    auto over = plog("#domain d = {x, y}.\n#const c : d.\nrandom(c).\npr(c=x) = 0.7.\npr(c=y) = 0.7.");
    auto diag = plog_validate(over);
    REQUIRE_FALSE(diag.empty());
    REQUIRE(diag[0].kind == "ProbabilitySumExceeded");
    REQUIRE(error_of([&] { plog_measure(over); }) == Errc::ValidationError);

    auto undefined = plog("#domain d = {x, y}.\n#const c : d.\nrandom(c).\npr(c=x) = 0.5.\npr(c=y) = 0.4.");
    REQUIRE(error_of([&] { plog_measure(undefined); }) == Errc::DefaultProbabilityUndefined);

    auto twice = plog("#domain d = {x, y}.\n#const c : d.\n[a] random(c).\n[b] random(c).");
    REQUIRE(error_of([&] { plog_measure(twice); }) == Errc::ValidationError);
    bool found = false;
    for (const auto& x : plog_validate(twice)) { found |= x.kind == "UniqueSelectionViolation"; }
    REQUIRE(found);

    auto conditions = plog("#domain d = {x, y}.\n#const c : d.\n#const e : d.\nrandom(c).\n"
                           "pr(c=x | e=x) = 0.5.\npr(c=y | not e=y) = 0.5.\ne=x.");
    REQUIRE(error_of([&] { plog_measure(conditions); }) == Errc::ValidationError);
    found = false;
    for (const auto& x : plog_validate(conditions)) { found |= x.kind == "UniqueAssignmentViolation"; }
    REQUIRE(found);

    auto inconsistent = plog("#domain d = {x, y}.\n#const c : d.\nrandom(c).\nobs(c=x).\nobs(c=y).");
    REQUIRE(error_of([&] { plog_measure(inconsistent); }) == Errc::Inconsistent);

    auto zero = plog("#domain d = {x, y}.\n#const c : d.\nrandom(c).\npr(c=x) = 1.\nobs(c=y).");
    REQUIRE(error_of([&] { plog_measure(zero); }) == Errc::AllZeroMeasure);
}

TEST_CASE("P-log default probabilities split the remainder", "[frontends][plog]") {
    auto p = plog("#domain d = {x, y, z}.\n#const c : d.\nrandom(c).\npr(c=x) = 0.4.\n");
    REQUIRE_THAT(plog_query(p, "c=y"), WithinAbs(0.3, 1e-12));
    REQUIRE_THAT(plog_query(p, "c=z"), WithinAbs(0.3, 1e-12));
    auto plain = plog("#domain d = {x, y}.\n#const c : d.\nrandom(c).\nhigh :- c=x.\n");
    REQUIRE_THAT(plog_query(plain, "high"), WithinAbs(0.5, 1e-12));
}

TEST_CASE("P-log translations", "[frontends][plog]") {
    auto p   = testutil::load<PlogProgram>(Dialect::Plog, "dice.plog");
    auto tau = plog_tau(p);
    REQUIRE(tau.num_hard() == tau.rules.size());
    REQUIRE(tau.atoms.find({plog_intervene_symbol("roll"), {"d1"}, std::nullopt}));
    REQUIRE(tau.atoms.find({plog_do_symbol("roll"), {"d1", "6"}, std::nullopt}));
    REQUIRE(tau.atoms.find({plog_obs_symbol("even"), {"d2", "t"}, std::nullopt}));

    auto mv = plog_to_mvpp(p);
    auto m  = plog_measure(p);
    auto d  = distribution(mvpp_to_lpmln(mv));
    for (const auto& w : m.worlds) {
        auto fw = fw_formula(p, mv, w.W);
        REQUIRE_THAT(prob_query(d, fw), WithinAbs(w.mu, 1e-9));
    }
    auto q = parse_query("even(d1)", p.signature, d.atoms);
    REQUIRE_THAT(prob_query(d, q), WithinAbs(0.55, 1e-9));

    // the printed translation reads back as the same program
    auto text = print(mv);
    auto back = parse_mvpp(text, "printed");
    REQUIRE(same_distribution(mvpp_direct_distribution(back), mvpp_direct_distribution(mv), 1e-9));
}
