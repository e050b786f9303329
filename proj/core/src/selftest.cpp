#include <lpmln/selftest.hpp>
#include <lpmln/textio.hpp>

#include <algorithm>
#include <cmath>
#include <set>

namespace lpmln {

/////////////////////////////////////////////////////////////////////////////////////////
// Generators
/////////////////////////////////////////////////////////////////////////////////////////
namespace gen {
namespace {
std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}
bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }
AtomId any_atom(Rng& rng, std::size_t n) { return static_cast<AtomId>(pick(rng, 0, n - 1)); }

Formula neg_literal(Rng& rng, AtomId a) {
    auto f = Formula::negate(Formula::make_atom(a));
    return coin(rng, 0.2) ? Formula::negate(std::move(f)) : f;
}

Formula neg_part(Rng& rng, std::size_t count, const std::function<AtomId()>& atom) {
    Formula neg = Formula::truth();
    for (std::size_t i = 0; i != count; ++i) { neg = conjoin(std::move(neg), neg_literal(rng, atom())); }
    return neg;
}

Weight random_weight(Rng& rng, double hardShare) {
    if (coin(rng, hardShare)) { return Weight::alpha(); }
    return Weight::of(std::round(std::uniform_real_distribution<double>(-3.0, 3.0)(rng) * 10.0) / 10.0);
}

double random_prob(Rng& rng) {
    if (coin(rng, 0.05)) { return coin(rng, 0.5) ? 0.0 : 1.0; }
    return static_cast<double>(pick(rng, 1, 9)) / 10.0;
}

GroundProgram weighted(AtomTable atoms, const std::vector<Rule>& rules, Rng& rng, double hardShare) {
    std::vector<WeightedRule> out;
    for (const auto& r : rules) { out.push_back({random_weight(rng, hardShare), r}); }
    return make_ground_program(std::move(atoms), std::move(out));
}
} // namespace

AtomTable atoms(std::size_t n, const std::string& prefix) {
    AtomTable t;
    for (std::size_t i = 0; i != n; ++i) { t.intern({prefix + std::to_string(i + 1), {}, {}}); }
    return t;
}

std::vector<Rule> rules(Rng& rng, std::size_t numAtoms, std::size_t numRules) {
    std::vector<Rule> out;
    auto              atom = [&] { return any_atom(rng, numAtoms); };
    for (std::size_t i = 0; i != numRules; ++i) {
        std::size_t         heads = coin(rng, 0.15) ? 0 : coin(rng, 0.2) ? 2 : 1;
        std::vector<AtomId> pos;
        for (std::size_t k = pick(rng, 0, 2); k-- > 0;) { pos.push_back(atom()); }
        Formula neg = neg_part(rng, pick(rng, 0, 2), atom);
        if (heads == 1 && coin(rng, 0.15)) {
            out.push_back(choice_rule(atom(), std::move(pos), std::move(neg)));
            continue;
        }
        Rule r;
        for (std::size_t k = 0; k != heads; ++k) {
            auto a = atom();
            if (std::find(r.head.begin(), r.head.end(), a) == r.head.end()) { r.head.push_back(a); }
        }
        r.pos = std::move(pos);
        r.neg = std::move(neg);
        out.push_back(std::move(r));
    }
    return out;
}

GroundProgram asp_program(Rng& rng, std::size_t maxAtoms, std::size_t maxRules) {
    auto n = pick(rng, 1, maxAtoms);
    return weighted(atoms(n), rules(rng, n, pick(rng, 1, maxRules)), rng, 1.0);
}

GroundProgram lpmln_program(Rng& rng, std::size_t maxAtoms, std::size_t maxRules) {
    auto n = pick(rng, 1, maxAtoms);
    return weighted(atoms(n), rules(rng, n, pick(rng, 1, maxRules)), rng, 0.3);
}

GroundProgram tight_program(Rng& rng, std::size_t maxAtoms, std::size_t maxRules) {
    auto              n = pick(rng, 1, maxAtoms);
    std::vector<Rule> out;
    for (std::size_t i = pick(rng, 1, maxRules); i-- > 0;) {
        Rule r;
        bool constraint = coin(rng, 0.15);
        auto low        = n;
        if (!constraint) {
            for (std::size_t k = coin(rng, 0.2) ? 2 : 1; k-- > 0;) {
                auto a = any_atom(rng, n);
                if (std::find(r.head.begin(), r.head.end(), a) == r.head.end()) { r.head.push_back(a); }
                low = std::min<std::size_t>(low, a);
            }
        }
        if (low > 0) {
            for (std::size_t k = pick(rng, 0, 2); k-- > 0;) { r.pos.push_back(any_atom(rng, low)); }
        }
        r.neg = neg_part(rng, pick(rng, 0, 2), [&] { return any_atom(rng, n); });
        if (r.head.size() == 1 && coin(rng, 0.15)) { r = choice_rule(r.head.front(), r.pos, r.neg); }
        out.push_back(std::move(r));
    }
    return weighted(atoms(n), out, rng, 0.3);
}

Formula formula(Rng& rng, std::size_t numAtoms, int depth) {
    if (depth == 0 || coin(rng, 0.3)) {
        if (coin(rng, 0.03)) { return coin(rng, 0.5) ? Formula::truth() : Formula::falsity(); }
        return Formula::make_atom(any_atom(rng, numAtoms));
    }
    switch (pick(rng, 0, 3)) {
        case 0 : return Formula::negate(formula(rng, numAtoms, depth - 1));
        case 1 : return Formula::conj({formula(rng, numAtoms, depth - 1), formula(rng, numAtoms, depth - 1)});
        case 2 : return Formula::disj({formula(rng, numAtoms, depth - 1), formula(rng, numAtoms, depth - 1)});
        default: return Formula::implies(formula(rng, numAtoms, depth - 1), formula(rng, numAtoms, depth - 1));
    }
}

MlnProgram mln(Rng& rng, std::size_t maxAtoms, std::size_t maxFormulas) {
    MlnProgram L;
    auto       n = pick(rng, 1, maxAtoms);
    L.atoms      = atoms(n);
    for (std::size_t i = pick(rng, 1, maxFormulas); i-- > 0;) {
        L.formulas.push_back({random_weight(rng, 0.25), formula(rng, n, 2)});
    }
    return L;
}

ProbLogProgram problog(Rng& rng, std::size_t maxFacts, std::size_t maxDerived) {
    ProbLogProgram p;
    auto           k = pick(rng, 1, maxFacts);
    auto           d = pick(rng, 1, maxDerived);
    for (std::size_t i = 0; i != k; ++i) {
        p.facts.push_back({p.atoms.intern({"f" + std::to_string(i + 1), {}, {}}), random_prob(rng)});
    }
    for (std::size_t i = 0; i != d; ++i) {
        auto head  = p.atoms.intern({"d" + std::to_string(i + 1), {}, {}});
        auto lower = [&] { return any_atom(rng, k + i); }; // facts and lower derived atoms
        for (std::size_t r = pick(rng, 1, 2); r-- > 0;) {
            Rule rule;
            rule.head = {head};
            for (std::size_t m = pick(rng, 0, 2); m-- > 0;) { rule.pos.push_back(lower()); }
            for (std::size_t m = pick(rng, 0, 1); m-- > 0;) {
                rule.neg = conjoin(std::move(rule.neg), Formula::negate(Formula::make_atom(lower())));
            }
            p.rules.push_back(std::move(rule));
        }
    }
    return p;
}

MvppProgram mvpp(Rng& rng) {
    MvppProgram m;
    m.signature.domains = {{"v2", {"a", "b"}, false}, {"v3", {"a", "b", "c"}, false}};
    auto add_constant   = [&](const std::string& name) {
        std::string dom = coin(rng, 0.5) ? "v2" : "v3";
        m.signature.constants.push_back({name, {}, dom});
        ConstantGroup g{name, {}};
        for (const auto& v : m.signature.domain(dom)->values) { g.atoms.push_back(m.atoms.intern({name, {}, v})); }
        m.constants.push_back(std::move(g));
    };
    auto numProb = pick(rng, 1, 2);
    for (std::size_t i = 0; i != numProb; ++i) { add_constant("c" + std::to_string(i + 1)); }
    bool withPlain = coin(rng, 0.5);
    if (withPlain) { add_constant("n1"); }
    for (std::size_t i = 0; i != numProb; ++i) {
        MvppDecl            d{i, {}};
        std::vector<double> w;
        for (std::size_t v = 0; v != m.constants[i].atoms.size(); ++v) { w.push_back(static_cast<double>(pick(rng, 1, 9))); }
        double sum = 0.0;
        for (auto x : w) { sum += x; }
        for (auto x : w) { d.probs.push_back(x / sum); }
        m.decls.push_back(std::move(d));
    }
    std::vector<AtomId> probAtoms;
    for (std::size_t i = 0; i != numProb; ++i) {
        probAtoms.insert(probAtoms.end(), m.constants[i].atoms.begin(), m.constants[i].atoms.end());
    }
    std::vector<AtomId> heads;
    if (withPlain) { heads = m.constants.back().atoms; }
    for (std::size_t i = 0, n = pick(rng, 1, 2); i != n; ++i) { heads.push_back(m.atoms.intern({"d" + std::to_string(i + 1), {}, {}})); }
    // stratified: a head may depend on probabilistic atoms and heads listed before it
    for (std::size_t h = 0; h != heads.size(); ++h) {
        std::vector<AtomId> lower = probAtoms;
        lower.insert(lower.end(), heads.begin(), heads.begin() + static_cast<std::ptrdiff_t>(h));
        for (std::size_t r = pick(rng, 0, 2); r-- > 0;) {
            Rule rule;
            rule.head = {heads[h]};
            for (std::size_t k = pick(rng, 1, 2); k-- > 0;) { rule.pos.push_back(lower[pick(rng, 0, lower.size() - 1)]); }
            if (coin(rng, 0.3)) {
                rule.neg = Formula::negate(Formula::make_atom(lower[pick(rng, 0, lower.size() - 1)]));
            }
            m.rules.push_back(std::move(rule));
        }
    }
    if (coin(rng, 0.3)) {
        Rule c;
        c.pos = {probAtoms[pick(rng, 0, probAtoms.size() - 1)]};
        m.rules.push_back(std::move(c));
    }
    return m;
}

Interpretation interpretation(Rng& rng, std::size_t n) {
    Interpretation I(n);
    for (std::size_t a = 0; a != n; ++a) {
        if (coin(rng, 0.5)) { I.insert(static_cast<AtomId>(a)); }
    }
    return I;
}
} // namespace gen

bool same_distribution(const Distribution& x, const Distribution& y, double tol, std::string* why) {
    auto xs = x.by_name();
    auto ys = y.by_name();
    std::set<std::vector<std::string>> keys;
    for (const auto& [k, v] : xs) { keys.insert(k); }
    for (const auto& [k, v] : ys) { keys.insert(k); }
    for (const auto& k : keys) {
        double px = xs.contains(k) ? xs[k] : 0.0;
        double py = ys.contains(k) ? ys[k] : 0.0;
        if (std::abs(px - py) > tol) {
            if (why) {
                std::string s = "{";
                for (std::size_t i = 0; i != k.size(); ++i) { s += (i ? ", " : "") + k[i]; }
                *why = s + "}: " + format_number(px) + " vs " + format_number(py);
            }
            return false;
        }
    }
    return true;
}

/////////////////////////////////////////////////////////////////////////////////////////
// Properties
/////////////////////////////////////////////////////////////////////////////////////////
namespace {
enum class Outcome { Pass, Skip, Fail };

struct Check {
    Outcome     outcome = Outcome::Pass;
    std::string detail;
};

Check pass() { return {}; }
Check skip() { return {Outcome::Skip, {}}; }
Check fail(std::string why) { return {Outcome::Fail, std::move(why)}; }

Check compare(const Distribution& x, const Distribution& y) {
    std::string why;
    return same_distribution(x, y, 1e-9, &why) ? pass() : fail(why);
}

// drops rules one at a time while the check keeps failing
template <class P, class Rules, class Run>
P shrink(P input, Rules rulesOf, Run run) {
    for (bool progress = true; progress;) {
        progress = false;
        for (std::size_t i = 0; i < rulesOf(input).size(); ++i) {
            P smaller = input;
            rulesOf(smaller).erase(rulesOf(smaller).begin() + static_cast<std::ptrdiff_t>(i));
            if (run(smaller).outcome == Outcome::Fail) {
                input    = std::move(smaller);
                progress = true;
                break;
            }
        }
    }
    return input;
}

template <class P, class Gen, class Run, class Rules, class Text>
PropertyReport run_property(const std::string& name, const SelftestOptions& opts, std::uint64_t salt, Gen gen, Run run,
                            Rules rulesOf, Text text) {
    PropertyReport rep;
    rep.name = name;
    std::seed_seq seq{opts.seed, salt};
    gen::Rng      rng(seq);
    auto          guarded = [&](const P& x) -> Check {
        try {
            return run(x);
        }
        catch (const Error& e) {
            return fail(std::string(errc_name(e.code())) + ": " + e.message());
        }
    };
    for (std::size_t attempts = 0; rep.cases < opts.iterations && attempts < 50 * opts.iterations + 50; ++attempts) {
        P    input = gen(rng);
        auto c     = guarded(input);
        if (c.outcome == Outcome::Skip) {
            ++rep.skipped;
            continue;
        }
        ++rep.cases;
        if (c.outcome == Outcome::Fail) {
            auto small         = shrink(input, rulesOf, guarded);
            rep.counterexample = guarded(small).detail + "\n" + text(small);
            break;
        }
    }
    return rep;
}

auto ground_rules  = [](GroundProgram& g) -> std::vector<WeightedRule>& { return g.rules; };
auto ground_text   = [](const GroundProgram& g) { return print(g); };
auto fix_provenance = [](GroundProgram g) {
    g.provenance.resize(g.rules.size());
    for (std::size_t i = 0; i != g.rules.size(); ++i) { g.provenance[i] = i; }
    return g;
};

bool sm_prime_nonempty(const GroundProgram& g, const Limits& limits) { return has_hard_consistent_model(g, limits); }

struct Prop1Case {
    std::vector<Rule> rules;
    std::vector<bool> subset;
    Interpretation    I;
};
} // namespace

std::vector<std::string> selftest_properties() {
    return {"asp-uniform", "mln-embedding", "completion",  "loop-formulas", "problog",          "soft-only",
            "mvpp",        "sm-subset",     "search-vs-table", "print-roundtrip"};
}

std::vector<PropertyReport> run_selftest(const SelftestOptions& opts,
                                         const std::function<void(const PropertyReport&)>& progress) {
    const auto&                 L = opts.limits;
    std::vector<PropertyReport> out;
    auto                        wanted = [&](const std::string& n) {
        return opts.only.empty() || std::find(opts.only.begin(), opts.only.end(), n) != opts.only.end();
    };
    auto emit = [&](PropertyReport r) {
        if (progress) { progress(r); }
        out.push_back(std::move(r));
    };
    std::uint64_t salt = 0;
    auto          next = [&] { return ++salt; };

    if (auto s = next(); wanted("asp-uniform")) {
        emit(run_property<GroundProgram>(
            "asp-uniform", opts, s, [](gen::Rng& r) { return gen::asp_program(r); },
            [&](const GroundProgram& g0) {
                auto g  = fix_provenance(g0);
                auto sm = enumerate_stable_models(g.unweighted(), g.atoms.size(), L);
                if (sm.empty()) { return skip(); }
                auto d = distribution(g, L);
                if (d.entries.size() != sm.size()) {
                    return fail(std::to_string(d.entries.size()) + " support entries, " +
                                std::to_string(sm.size()) + " stable models");
                }
                for (std::size_t i = 0; i != sm.size(); ++i) {
                    if (!(d.entries[i].I == sm[i])) { return fail("support differs at " + sm[i].str(g.atoms)); }
                    if (std::abs(d.entries[i].prob - 1.0 / static_cast<double>(sm.size())) > 1e-9) {
                        return fail("non-uniform probability for " + sm[i].str(g.atoms));
                    }
                    if (d.entries[i].weight.hard_count() != g.rules.size()) {
                        return fail("stable model does not satisfy every rule");
                    }
                }
                return pass();
            },
            ground_rules, ground_text));
    }
    if (auto s = next(); wanted("mln-embedding")) {
        emit(run_property<MlnProgram>(
            "mln-embedding", opts, s, [](gen::Rng& r) { return gen::mln(r); },
            [&](const MlnProgram& m) { return compare(mln_distribution(m, L), distribution(mln_to_lpmln(m), L)); },
            [](MlnProgram& m) -> std::vector<WeightedFormula>& { return m.formulas; },
            [](const MlnProgram& m) { return print(m); }));
    }
    if (auto s = next(); wanted("completion")) {
        emit(run_property<GroundProgram>(
            "completion", opts, s, [](gen::Rng& r) { return gen::tight_program(r); },
            [&](const GroundProgram& g0) {
                auto g = fix_provenance(g0);
                if (!sm_prime_nonempty(g, L)) { return skip(); }
                return compare(distribution(g, L), mln_distribution(completion(g), L));
            },
            ground_rules, ground_text));
    }
    if (auto s = next(); wanted("loop-formulas")) {
        emit(run_property<GroundProgram>(
            "loop-formulas", opts, s, [](gen::Rng& r) { return gen::lpmln_program(r); },
            [&](const GroundProgram& g0) {
                auto g = fix_provenance(g0);
                if (!sm_prime_nonempty(g, L)) { return skip(); }
                return compare(distribution(g, L), mln_distribution(loop_augmented_mln(g, L), L));
            },
            ground_rules, ground_text));
    }
    if (auto s = next(); wanted("problog")) {
        emit(run_property<ProbLogProgram>(
            "problog", opts, s, [](gen::Rng& r) { return gen::problog(r); },
            [&](const ProbLogProgram& p) {
                return compare(problog_distribution(p, L), distribution(problog_to_lpmln(p), L));
            },
            [](ProbLogProgram& p) -> std::vector<Rule>& { return p.rules; },
            [](const ProbLogProgram& p) { return print(p); }));
    }
    if (auto s = next(); wanted("soft-only")) {
        emit(run_property<GroundProgram>(
            "soft-only", opts, s, [](gen::Rng& r) { return gen::lpmln_program(r); },
            [&](const GroundProgram& g0) {
                auto g = fix_provenance(g0);
                if (!sm_prime_nonempty(g, L)) { return skip(); }
                return compare(soft_only_distribution(g, L), distribution(g, L));
            },
            ground_rules, ground_text));
    }
    if (auto s = next(); wanted("mvpp")) {
        emit(run_property<MvppProgram>(
            "mvpp", opts, s, [](gen::Rng& r) { return gen::mvpp(r); },
            [&](const MvppProgram& m) {
                std::optional<Distribution> direct;
                try {
                    direct = mvpp_direct_distribution(m, L);
                }
                catch (const Error& e) {
                    if (e.code() == Errc::EmptySmDoublePrime) { return skip(); }
                    throw;
                }
                return compare(*direct, distribution(mvpp_to_lpmln(m), L));
            },
            [](MvppProgram& m) -> std::vector<Rule>& { return m.rules; },
            [](const MvppProgram& m) { return print(m); }));
    }
    if (auto s = next(); wanted("sm-subset")) {
        emit(run_property<Prop1Case>(
            "sm-subset", opts, s,
            [](gen::Rng& r) {
                auto      n = std::uniform_int_distribution<std::size_t>(1, 6)(r);
                Prop1Case c;
                c.rules = gen::rules(r, n, std::uniform_int_distribution<std::size_t>(1, 8)(r));
                for (std::size_t i = 0; i != c.rules.size(); ++i) { c.subset.push_back(std::bernoulli_distribution(0.5)(r)); }
                c.I = gen::interpretation(r, n);
                return c;
            },
            [&](const Prop1Case& c) {
                std::vector<Rule> sub;
                for (std::size_t i = 0; i != c.rules.size(); ++i) {
                    if (c.subset[i]) { sub.push_back(c.rules[i]); }
                }
                bool satAll = std::all_of(c.rules.begin(), c.rules.end(),
                                          [&](const Rule& r) { return satisfies(c.I, r); });
                if (!satAll || !is_stable_model(sub, c.I, L.max_subset)) { return pass(); }
                return is_stable_model(c.rules, c.I, L.max_subset) ? pass() : fail("stable for the subset only");
            },
            [](Prop1Case& c) -> std::vector<Rule>& { return c.rules; },
            [](const Prop1Case& c) {
                auto t = gen::atoms(c.I.universe());
                std::vector<WeightedRule> rs;
                for (const auto& r : c.rules) { rs.push_back({Weight::alpha(), r}); }
                return print(make_ground_program(t, rs)) + "I = " + c.I.str(t) + "\n";
            }));
    }
    if (auto s = next(); wanted("search-vs-table")) {
        emit(run_property<GroundProgram>(
            "search-vs-table", opts, s, [](gen::Rng& r) { return gen::lpmln_program(r); },
            [&](const GroundProgram& g0) {
                auto g    = fix_provenance(g0);
                auto d    = distribution(g, L);
                auto rows = full_table(g, L);
                for (const auto& row : rows) {
                    if (std::abs(row.prob - d.prob(row.I)) > 1e-9) {
                        return fail("probability of " + row.I.str(g.atoms) + " differs");
                    }
                }
                return pass();
            },
            ground_rules, ground_text));
    }
    if (auto s = next(); wanted("print-roundtrip")) {
        emit(run_property<GroundProgram>(
            "print-roundtrip", opts, s, [](gen::Rng& r) { return gen::lpmln_program(r); },
            [&](const GroundProgram& g) {
                auto text  = print(g);
                auto again = print(ground_program(parse_lpmln(text)));
                return text == again ? pass() : fail("reprinted as\n" + again);
            },
            ground_rules, ground_text));
    }
    return out;
}

} // namespace lpmln
