#include <catch_amalgamated.hpp>

#include <lpmln/ground.hpp>
#include <lpmln/textio.hpp>

#include "util.hpp"

#include <set>

using namespace lpmln;

namespace {
std::set<std::string> rule_texts(const GroundProgram& g) {
    std::set<std::string> out;
    for (const auto& wr : g.rules) {
        std::string s;
        for (auto h : wr.rule.head) { s += g.atoms.name(h) + ";"; }
        s += "<-";
        for (auto b : wr.rule.pos) { s += g.atoms.name(b) + ","; }
        s += to_string(wr.rule.neg, g.atoms);
        out.insert(s);
    }
    return out;
}
} // namespace

TEST_CASE("friends grounds to every instance of its variables", "[ground]") {
    auto g = testutil::ground_corpus("friends.lpmln");
    // 2 facts, 9 instances of the soft rule, 27 of transitivity
    REQUIRE(g.rules.size() == 2 + 9 + 27);
    REQUIRE(g.num_hard() == 2 + 27);
    REQUIRE(g.provenance.size() == g.rules.size());
    REQUIRE(g.provenance[2] == 2);
    REQUIRE(g.provenance.back() == 3);
    auto texts = rule_texts(g);
    REQUIRE(texts.count("influence(a,c);<-influence(a,b),influence(b,c),true"));
    REQUIRE(texts.count("influence(c,c);<-friend(c,c),true"));
}

TEST_CASE("builtins filter instances", "[ground]") {
    auto p = parse_lpmln("#domain n = 1..4.\n#var X, Y : n.\n"
                         "lt(X, Y) :- X < Y.\n"
                         "ne(X, Y) :- X != Y, Y <= 2.\n"
                         "gt(X, Y) :- X > Y, X >= 3.\n"
                         "ev(X) :- X mod 2 = 0.\n");
    auto g = ground_program(p);
    std::size_t lt = 0, ne = 0, gt = 0, ev = 0;
    for (int x = 1; x <= 4; ++x) {
        ev += x % 2 == 0;
        for (int y = 1; y <= 4; ++y) {
            lt += x < y;
            ne += x != y && y <= 2;
            gt += x > y && x >= 3;
        }
    }
    REQUIRE(g.rules.size() == lt + ne + gt + ev);
    auto texts = rule_texts(g);
    REQUIRE(texts.count("lt(1,4);<-true"));
    REQUIRE_FALSE(texts.count("lt(4,1);<-true"));
    REQUIRE(texts.count("gt(3,1);<-true"));
    REQUIRE_FALSE(texts.count("gt(2,1);<-true"));
    REQUIRE(texts.count("ev(4);<-true"));
    REQUIRE_FALSE(texts.count("ev(3);<-true"));
}

TEST_CASE("ranges and declared constants", "[ground]") {
    auto p = testutil::load<PlogProgram>(Dialect::Plog, "dice.plog");
    std::set<std::string> names;
    for (const auto& a : p.atoms.atoms()) { names.insert(a.str()); }
    for (int s = 1; s <= 6; ++s) {
        REQUIRE(names.count("roll(d1)=" + std::to_string(s)));
        REQUIRE(names.count("roll(d2)=" + std::to_string(s)));
    }
    REQUIRE(names.count("even(d1)=t"));
    REQUIRE(names.count("even(d2)=f"));
    REQUIRE(names.count("owner(d2)=mike"));
}

TEST_CASE("instantiation errors", "[ground]") {
    auto code = [](const std::string& text, const GroundLimits& limits = {}) {
        try {
            ground_program(parse_lpmln(text), limits);
        }
        catch (const Error& e) {
            return e.code();
        }
        return Errc::PropertyViolation;
    };
    REQUIRE(code("#domain d = {}.\n#var X : d.\np(X).") == Errc::EmptyDomain);
    GroundLimits small;
    small.max_instances = 50;
    REQUIRE(code("#domain d = 1..10.\n#var X, Y : d.\np(X, Y).", small) == Errc::GroundingExplosion);
    REQUIRE(code("#domain d = 1..5.\n#var X, Y : d.\np(X, Y).", small) == Errc::PropertyViolation);
    REQUIRE(code("#domain d = {x}.\n#const c : d.\np :- c.") == Errc::SignatureError);
    REQUIRE(code("#domain d = {x}.\n#const c : d.\np :- c=y.") == Errc::SignatureError);
}

TEST_CASE("lifting a ground program keeps it", "[ground]") {
    auto g = testutil::ground_corpus("bird_choice.lpmln");
    auto h = ground_program(lift(g));
    REQUIRE(h.rules == g.rules);
    REQUIRE(h.atoms.atoms() == g.atoms.atoms());
}

TEST_CASE("ground atoms of a program", "[ground]") {
    auto atoms = ground_atoms(parse_lpmln(testutil::read_corpus("friends.lpmln")));
    std::set<std::string> names;
    for (const auto& a : atoms) { names.insert(a.str()); }
    REQUIRE(names.size() == 18);
    REQUIRE(names.count("friend(c,a)"));
}
