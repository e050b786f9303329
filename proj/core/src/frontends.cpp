#include <lpmln/frontends.hpp>

#include <algorithm>
#include <cmath>
#include <set>

namespace lpmln {

namespace {
constexpr double eps = 1e-9;

Formula neg_literals(const std::vector<AtomId>& atoms, Formula extra = Formula::truth()) {
    Formula f = Formula::truth();
    for (auto a : atoms) { f = conjoin(std::move(f), Formula::negate(Formula::make_atom(a))); }
    return conjoin(std::move(f), std::move(extra));
}

Rule constraint_on(std::vector<AtomId> pos, Formula neg = Formula::truth()) {
    Rule r;
    r.pos = std::move(pos);
    r.neg = std::move(neg);
    return r;
}

Rule fact(AtomId a) {
    Rule r;
    r.head = {a};
    return r;
}

std::string names_of(const AtomTable& atoms, const Interpretation& I) { return I.str(atoms); }

Distribution normalized(AtomTable atoms, std::vector<std::pair<Interpretation, double>> weighted) {
    Distribution d;
    d.atoms = std::move(atoms);
    std::sort(weighted.begin(), weighted.end(),
              [](const auto& x, const auto& y) { return bitmask_order(x.first, y.first) < 0; });
    double total = 0.0;
    for (const auto& [I, w] : weighted) { total += w; }
    d.log_mass = std::log(total);
    for (auto& [I, w] : weighted) {
        if (w <= 0.0) { continue; }
        d.entries.push_back({std::move(I), SymbolicWeight(0, std::log(w)), w / total});
    }
    return d;
}
} // namespace

Interpretation widen(const Interpretation& I, std::size_t universe) {
    auto atoms = I.atoms();
    return Interpretation(universe, atoms);
}

/////////////////////////////////////////////////////////////////////////////////////////
// ASP and weak constraints
/////////////////////////////////////////////////////////////////////////////////////////
Formula WeakConstraint::body() const {
    Rule r;
    r.pos = pos;
    r.neg = neg;
    return r.body_formula();
}

GroundProgram asp_to_lpmln(const Signature& sig, const AtomTable& atoms, std::span<const Rule> rules) {
    std::vector<WeightedRule> out;
    for (const auto& r : rules) { out.push_back({Weight::alpha(), r}); }
    auto g      = make_ground_program(atoms, std::move(out));
    g.signature = sig;
    return g;
}

GroundProgram weak_to_lpmln(const WeakProgram& w) {
    auto g = asp_to_lpmln(w.signature, w.atoms, w.rules);
    for (const auto& c : w.weak) {
        g.rules.push_back({Weight::of(-static_cast<double>(c.weight)), constraint_on({}, Formula::negate(c.body()))});
        g.provenance.push_back(g.provenance.size());
    }
    return g;
}

long long penalty(const WeakProgram& w, const Interpretation& I) {
    long long sum = 0;
    for (const auto& c : w.weak) {
        if (satisfies(I, c.body())) { sum += c.weight; }
    }
    return sum;
}

std::vector<Interpretation> optimal_stable_models(const WeakProgram& w, const Limits& limits) {
    if (enumerate_stable_models(w.rules, w.atoms.size(), limits).empty()) {
        throw Error(Errc::NoStableModel, "the program without weak constraints has no stable model");
    }
    auto d    = distribution(weak_to_lpmln(w), limits);
    auto best = std::max_element(d.entries.begin(), d.entries.end(),
                                 [](const DistEntry& x, const DistEntry& y) { return x.prob < y.prob; });
    std::vector<Interpretation> out;
    for (const auto& e : d.entries) {
        if (std::abs(e.weight.soft_sum() - best->weight.soft_sum()) <= eps) { out.push_back(e.I); }
    }
    return out;
}

/////////////////////////////////////////////////////////////////////////////////////////
// MLN
/////////////////////////////////////////////////////////////////////////////////////////
GroundProgram mln_to_lpmln(const MlnProgram& L, double choiceWeight) {
    std::vector<WeightedRule> rules;
    for (const auto& wf : L.formulas) { rules.push_back({wf.weight, constraint_on({}, Formula::negate(wf.formula))}); }
    for (std::size_t a = 0; a != L.atoms.size(); ++a) {
        rules.push_back({Weight::of(choiceWeight), choice_rule(static_cast<AtomId>(a))});
    }
    auto g      = make_ground_program(L.atoms, std::move(rules));
    g.signature = L.signature;
    return g;
}

namespace {
MlnProgram rules_as_formulas(const GroundProgram& g) {
    MlnProgram L;
    L.signature = g.signature;
    L.atoms     = g.atoms;
    for (const auto& wr : g.rules) { L.formulas.push_back({wr.weight, wr.rule.as_formula()}); }
    return L;
}
} // namespace

MlnProgram completion(const GroundProgram& g, bool force) {
    auto rules = g.unweighted();
    if (!force && !is_tight(rules, g.atoms.size())) {
        throw Error(Errc::NotTight, "the program is not tight (use --force to complete it anyway)");
    }
    auto L = rules_as_formulas(g);
    for (auto& f : completion_formulas(rules, g.atoms.size())) { L.formulas.push_back({Weight::alpha(), std::move(f)}); }
    return L;
}

MlnProgram loop_augmented_mln(const GroundProgram& g, const Limits& limits, bool allSubsets) {
    auto rules = g.unweighted();
    auto L     = rules_as_formulas(g);
    for (const auto& loop : loops(rules, g.atoms.size(), limits, allSubsets)) {
        L.formulas.push_back({Weight::alpha(), loop_formula(rules, loop)});
    }
    return L;
}

bool has_hard_consistent_model(const GroundProgram& g, const Limits& limits) {
    SearchOptions opts;
    opts.limits         = limits;
    opts.max_violations = 0;
    return !search_models(g, opts).empty();
}

/////////////////////////////////////////////////////////////////////////////////////////
// ProbLog
/////////////////////////////////////////////////////////////////////////////////////////
GroundProgram problog_to_lpmln(const ProbLogProgram& p) {
    std::vector<WeightedRule> rules;
    for (const auto& f : p.facts) {
        if (f.prob == 1.0) { rules.push_back({Weight::alpha(), fact(f.atom)}); }
        else if (f.prob == 0.0) { rules.push_back({Weight::alpha(), constraint_on({f.atom})}); }
        else {
            rules.push_back({Weight::of(std::log(f.prob)), fact(f.atom)});
            rules.push_back({Weight::of(std::log(1.0 - f.prob)), constraint_on({f.atom})});
        }
    }
    for (const auto& r : p.rules) { rules.push_back({Weight::alpha(), r}); }
    auto g      = make_ground_program(p.atoms, std::move(rules));
    g.signature = p.signature;
    return g;
}

Distribution problog_distribution(const ProbLogProgram& p, const Limits& limits) {
    std::size_t k = p.facts.size();
    if (k > limits.max_list_all) {
        throw Error(Errc::UniverseExplosion, std::to_string(k) + " probabilistic facts exceed the cap of " +
                                                 std::to_string(limits.max_list_all));
    }
    std::vector<std::pair<Interpretation, double>> weighted;
    for (std::uint64_t mask = 0; mask != (std::uint64_t{1} << k); ++mask) {
        std::vector<Rule> rules = p.rules;
        double            pr    = 1.0;
        Interpretation    tc(p.atoms.size());
        for (std::size_t i = 0; i != k; ++i) {
            const auto& f = p.facts[i];
            if ((mask >> i) & 1u) {
                rules.push_back(fact(f.atom));
                tc.insert(f.atom);
                pr *= f.prob;
            }
            else {
                rules.push_back(constraint_on({f.atom}));
                pr *= 1.0 - f.prob;
            }
        }
        auto models = enumerate_stable_models(rules, p.atoms.size(), limits);
        if (models.size() != 1) {
            throw Error(Errc::NotWellDefined, "total choice " + names_of(p.atoms, tc) + " has " +
                                                  std::to_string(models.size()) + " stable models");
        }
        if (pr > 0.0) { weighted.emplace_back(std::move(models.front()), pr); }
    }
    return normalized(p.atoms, std::move(weighted));
}

/////////////////////////////////////////////////////////////////////////////////////////
// Multi-valued probabilistic programs
/////////////////////////////////////////////////////////////////////////////////////////
bool MvppProgram::is_probabilistic(std::size_t constant) const {
    return std::any_of(decls.begin(), decls.end(), [&](const MvppDecl& d) { return d.constant == constant; });
}

GroundProgram mvpp_to_lpmln(const MvppProgram& m) {
    std::vector<WeightedRule> rules;
    for (const auto& d : m.decls) {
        const auto& atoms = m.constants[d.constant].atoms;
        for (std::size_t i = 0; i != atoms.size(); ++i) {
            double p = d.probs[i];
            if (p == 1.0) { rules.push_back({Weight::alpha(), fact(atoms[i])}); }
            else if (p == 0.0) { rules.push_back({Weight::alpha(), constraint_on({atoms[i]})}); }
            else { rules.push_back({Weight::of(std::log(p)), fact(atoms[i])}); }
        }
    }
    for (const auto& r : m.rules) { rules.push_back({Weight::alpha(), r}); }
    for (const auto& c : m.constants) {
        for (std::size_t i = 0; i != c.atoms.size(); ++i) {
            for (std::size_t j = i + 1; j < c.atoms.size(); ++j) {
                rules.push_back({Weight::alpha(), constraint_on({c.atoms[i], c.atoms[j]})});
            }
        }
    }
    for (std::size_t c = 0; c != m.constants.size(); ++c) {
        if (!m.is_probabilistic(c)) { continue; }
        std::vector<Formula> values;
        for (auto a : m.constants[c].atoms) { values.push_back(Formula::make_atom(a)); }
        Formula some = values.size() == 1 ? values.front() : Formula::disj(std::move(values));
        rules.push_back({Weight::alpha(), constraint_on({}, Formula::negate(std::move(some)))});
    }
    auto g      = make_ground_program(m.atoms, std::move(rules));
    g.signature = m.signature;
    return g;
}

Distribution mvpp_direct_distribution(const MvppProgram& m, const Limits& limits) {
    std::uint64_t total = 1;
    for (const auto& d : m.decls) {
        if (std::any_of(d.probs.begin(), d.probs.end(), [](double p) { return p <= 0.0; })) {
            throw Error(Errc::ZeroProbabilityDeclared,
                        "constant " + m.constants[d.constant].name + " declares a zero probability; use T(Π)");
        }
        total *= d.probs.size();
        if (total > (std::uint64_t{1} << limits.max_list_all)) {
            throw Error(Errc::UniverseExplosion, "too many total choices");
        }
    }
    auto consistent = [&](const Interpretation& I) {
        for (std::size_t c = 0; c != m.constants.size(); ++c) {
            auto n = std::count_if(m.constants[c].atoms.begin(), m.constants[c].atoms.end(),
                                   [&](AtomId a) { return I.contains(a); });
            if (n > 1 || (n == 0 && m.is_probabilistic(c))) { return false; }
        }
        return true;
    };
    std::vector<std::pair<Interpretation, double>> weighted;
    std::vector<std::size_t>                       choice(m.decls.size(), 0);
    for (std::uint64_t n = 0; n != total; ++n) {
        std::vector<Rule> rules = m.rules;
        double            w     = 1.0;
        for (std::size_t i = 0; i != m.decls.size(); ++i) {
            const auto& d = m.decls[i];
            rules.push_back(fact(m.constants[d.constant].atoms[choice[i]]));
            w *= d.probs[choice[i]];
        }
        for (auto& I : enumerate_stable_models(rules, m.atoms.size(), limits)) {
            if (consistent(I)) { weighted.emplace_back(std::move(I), w); }
        }
        for (std::size_t i = m.decls.size(); i-- > 0;) {
            if (++choice[i] < m.decls[i].probs.size()) { break; }
            choice[i] = 0;
        }
    }
    if (weighted.empty()) { throw Error(Errc::EmptySmDoublePrime, "no consistent stable model for any total choice"); }
    return normalized(m.atoms, std::move(weighted));
}

/////////////////////////////////////////////////////////////////////////////////////////
// Simple P-log
/////////////////////////////////////////////////////////////////////////////////////////
Formula PlogBody::formula() const {
    Rule r;
    r.pos = pos;
    r.neg = neg_literals(neg);
    return r.body_formula();
}

PlogBody PlogBody::canonical() const {
    PlogBody b = *this;
    std::sort(b.pos.begin(), b.pos.end());
    b.pos.erase(std::unique(b.pos.begin(), b.pos.end()), b.pos.end());
    std::sort(b.neg.begin(), b.neg.end());
    b.neg.erase(std::unique(b.neg.begin(), b.neg.end()), b.neg.end());
    return b;
}

std::optional<std::size_t> PlogProgram::constant_of(AtomId atom) const {
    for (std::size_t c = 0; c != constants.size(); ++c) {
        const auto& as = constants[c].atoms;
        if (std::find(as.begin(), as.end(), atom) != as.end()) { return c; }
    }
    return std::nullopt;
}

std::string plog_intervene_symbol(const std::string& constantSymbol) { return "intervene_" + constantSymbol; }
std::string plog_obs_symbol(const std::string& constantSymbol) { return "obs_" + constantSymbol; }
std::string plog_do_symbol(const std::string& constantSymbol) { return "do_" + constantSymbol; }

namespace {
bool holds(const Interpretation& W, const PlogBody& b) {
    return std::all_of(b.pos.begin(), b.pos.end(), [&](AtomId a) { return W.contains(a); }) &&
           std::none_of(b.neg.begin(), b.neg.end(), [&](AtomId a) { return W.contains(a); });
}

GroundAtom with_value_arg(const std::string& symbol, const PlogConstant& c, std::size_t value) {
    GroundAtom a;
    a.symbol = symbol;
    a.args   = c.base.args;
    a.args.push_back(c.values[value]);
    return a;
}

GroundAtom intervene_atom(const PlogConstant& c) { return {plog_intervene_symbol(c.base.symbol), c.base.args, {}}; }

std::string value_name(const PlogProgram& p, std::size_t c, std::size_t v) {
    return p.atoms.name(p.constants[c].atoms[v]);
}

bool intervened(const PlogProgram& p, std::size_t c) {
    return std::any_of(p.act.begin(), p.act.end(), [&](AtomId a) { return p.constant_of(a) == c; });
}

// pr-atoms of a selection rule grouped by body, in order of first appearance
std::vector<std::pair<PlogBody, std::vector<std::size_t>>> pr_groups(const PlogProgram& p, std::size_t rule) {
    std::vector<std::pair<PlogBody, std::vector<std::size_t>>> out;
    for (std::size_t i = 0; i != p.pr.size(); ++i) {
        if (p.pr[i].rule != rule) { continue; }
        auto key = p.pr[i].body.canonical();
        auto it  = std::find_if(out.begin(), out.end(), [&](const auto& g) { return g.first == key; });
        if (it == out.end()) { out.push_back({key, {i}}); }
        else { it->second.push_back(i); }
    }
    return out;
}

struct Causal {
    std::size_t                rule = 0;
    std::vector<std::size_t>   applied; // pr-atoms in PR_W(c)
    std::optional<std::size_t> value;   // value of c in W
};

// r_{W,c} and PR_W(c); nullopt when no selection rule for c is applied in W
std::optional<Causal> causal_context(const PlogProgram& p, const Interpretation& W, std::size_t c) {
    std::optional<Causal> out;
    for (std::size_t r = 0; r != p.random.size(); ++r) {
        if (p.random[r].constant != c || !holds(W, p.random[r].body)) { continue; }
        if (out) {
            throw Error(Errc::ValidationError, "UniqueSelectionViolation: two selection rules for " +
                                                   p.constants[c].base.str() + " are applied in " + W.str(p.atoms));
        }
        out = Causal{r, {}, {}};
    }
    if (!out) { return out; }
    const auto& atoms = p.constants[c].atoms;
    for (std::size_t v = 0; v != atoms.size(); ++v) {
        if (W.contains(atoms[v])) { out->value = v; }
    }
    if (intervened(p, c)) { return out; }
    for (std::size_t i = 0; i != p.pr.size(); ++i) {
        if (p.pr[i].rule == out->rule && holds(W, p.pr[i].body)) { out->applied.push_back(i); }
    }
    for (std::size_t i = 1; i < out->applied.size(); ++i) {
        const auto& x = p.pr[out->applied[0]];
        for (std::size_t j = 0; j != i; ++j) {
            const auto& y = p.pr[out->applied[j]];
            const auto& z = p.pr[out->applied[i]];
            if (y.value == z.value || !(x.body.canonical() == z.body.canonical())) {
                throw Error(Errc::ValidationError, "UniqueAssignmentViolation: pr-atoms for " +
                                                       p.constants[c].base.str() + " with different conditions or "
                                                       "equal values are applied in " + W.str(p.atoms));
            }
        }
    }
    return out;
}

double causal_value(const PlogProgram& p, std::size_t c, const std::vector<std::size_t>& applied, std::size_t value) {
    double                sum = 0.0;
    std::set<std::size_t> av;
    std::optional<double> ap;
    for (auto i : applied) {
        sum += p.pr[i].prob;
        av.insert(p.pr[i].value);
        if (p.pr[i].value == value) { ap = p.pr[i].prob; }
    }
    std::size_t dom = p.constants[c].values.size();
    if (av.size() == dom && std::abs(1.0 - sum) > eps) {
        throw Error(Errc::DefaultProbabilityUndefined, "every value of " + p.constants[c].base.str() +
                                                           " has an assigned probability but they sum to " +
                                                           std::to_string(sum));
    }
    if (ap) { return *ap; }
    return (1.0 - sum) / static_cast<double>(dom - av.size());
}
} // namespace

GroundProgram plog_tau(const PlogProgram& p) {
    GroundProgram g;
    g.signature = p.signature;
    g.atoms     = p.atoms;
    struct Derived {
        AtomId              intervene;
        std::vector<AtomId> obs, act;
    };
    std::vector<Derived> derived;
    for (const auto& c : p.constants) {
        Derived d{g.atoms.intern(intervene_atom(c)), {}, {}};
        for (std::size_t v = 0; v != c.values.size(); ++v) {
            d.obs.push_back(g.atoms.intern(with_value_arg(plog_obs_symbol(c.base.symbol), c, v)));
            d.act.push_back(g.atoms.intern(with_value_arg(plog_do_symbol(c.base.symbol), c, v)));
        }
        derived.push_back(std::move(d));
    }
    auto add = [&](Rule r) { g.rules.push_back({Weight::alpha(), std::move(r)}); };
    for (const auto& r : p.rules) { add(r); }
    for (const auto& rr : p.random) {
        Rule r;
        r.head = p.constants[rr.constant].atoms;
        r.pos  = rr.body.pos;
        r.neg  = neg_literals(rr.body.neg, Formula::negate(Formula::make_atom(derived[rr.constant].intervene)));
        add(std::move(r));
    }
    auto locate = [&](AtomId a) {
        auto c = p.constant_of(a);
        if (!c) { throw Error(Errc::ValidationError, "observed atom " + p.atoms.name(a) + " is not a constant value"); }
        auto v = static_cast<std::size_t>(std::find(p.constants[*c].atoms.begin(), p.constants[*c].atoms.end(), a) -
                                          p.constants[*c].atoms.begin());
        return std::pair{*c, v};
    };
    for (auto a : p.obs) {
        auto [c, v] = locate(a);
        add(fact(derived[c].obs[v]));
    }
    for (auto a : p.act) {
        auto [c, v] = locate(a);
        add(fact(derived[c].act[v]));
    }
    for (std::size_t c = 0; c != p.constants.size(); ++c) {
        const auto& atoms = p.constants[c].atoms;
        for (std::size_t v = 0; v != atoms.size(); ++v) {
            add(constraint_on({derived[c].obs[v]}, Formula::negate(Formula::make_atom(atoms[v]))));
        }
        for (std::size_t v = 0; v != atoms.size(); ++v) {
            Rule r;
            r.head = {atoms[v]};
            r.pos  = {derived[c].act[v]};
            add(std::move(r));
        }
        for (std::size_t v = 0; v != atoms.size(); ++v) {
            Rule r;
            r.head = {derived[c].intervene};
            r.pos  = {derived[c].act[v]};
            add(std::move(r));
        }
    }
    for (std::size_t i = 0; i != g.rules.size(); ++i) { g.provenance.push_back(i); }
    return g;
}

std::vector<Diagnostic> plog_validate(const PlogProgram& p, const Limits& limits) {
    std::vector<Diagnostic> out;
    auto                    note = [&](std::string kind, std::string msg) {
        bool seen = std::any_of(out.begin(), out.end(), [&](const Diagnostic& d) { return d.message == msg; });
        if (!seen) { out.push_back({std::move(kind), std::move(msg)}); }
    };
    for (std::size_t r = 0; r != p.random.size(); ++r) {
        for (const auto& [body, members] : pr_groups(p, r)) {
            double sum = 0.0;
            for (auto i : members) { sum += p.pr[i].prob; }
            if (sum > 1.0 + eps) {
                note("ProbabilitySumExceeded", "pr-atoms of " + p.random[r].id.str() + " sum to " +
                                                   std::to_string(sum) + " under one condition");
            }
        }
    }
    auto tau = plog_tau(p);
    for (const auto& W : enumerate_stable_models(tau, limits)) {
        for (std::size_t c = 0; c != p.constants.size(); ++c) {
            try {
                auto ctx = causal_context(p, W, c);
                if (ctx && ctx->value) { causal_value(p, c, ctx->applied, *ctx->value); }
            }
            catch (const Error& e) {
                const auto& msg  = e.message();
                auto        kind = msg.substr(0, msg.find(':'));
                if (e.code() == Errc::DefaultProbabilityUndefined) { kind = "DefaultProbabilityUndefined"; }
                note(kind, msg);
            }
        }
    }
    return out;
}

std::optional<double> plog_causal_probability(const PlogProgram& p, const Interpretation& W, std::size_t constant) {
    auto ctx = causal_context(p, W, constant);
    if (!ctx || !ctx->value) { return std::nullopt; }
    return causal_value(p, constant, ctx->applied, *ctx->value);
}

PlogMeasure plog_measure(const PlogProgram& p, const Limits& limits) {
    for (std::size_t r = 0; r != p.random.size(); ++r) {
        for (const auto& [body, members] : pr_groups(p, r)) {
            double sum = 0.0;
            for (auto i : members) { sum += p.pr[i].prob; }
            if (sum > 1.0 + eps) {
                throw Error(Errc::ValidationError, "pr-atoms of " + p.random[r].id.str() + " sum to more than 1");
            }
        }
    }
    auto        tau = plog_tau(p);
    PlogMeasure m;
    m.atoms     = tau.atoms;
    auto worlds = enumerate_stable_models(tau, limits);
    if (worlds.empty()) { throw Error(Errc::Inconsistent, "the program has no possible world"); }
    double total = 0.0;
    for (auto& W : worlds) {
        double mu = 1.0;
        for (std::size_t c = 0; c != p.constants.size(); ++c) {
            if (auto pr = plog_causal_probability(p, W, c)) { mu *= *pr; }
        }
        total += mu;
        m.worlds.push_back({std::move(W), mu, 0.0});
    }
    if (total <= 0.0) { throw Error(Errc::AllZeroMeasure, "every possible world has measure 0"); }
    for (auto& w : m.worlds) { w.mu = w.mu_hat / total; }
    return m;
}

double plog_prob(const PlogMeasure& m, const Formula& query) {
    double p = 0.0;
    for (const auto& w : m.worlds) {
        if (satisfies(w.W, query)) { p += w.mu; }
    }
    return p;
}

namespace {
GroundAtom pf_atom(const RandomRule& r, const std::string& tag, const std::string& value) {
    return {"pf_" + r.id.symbol + "_" + tag, r.id.args, value};
}

std::string pf_name(const RandomRule& r, const std::string& tag) {
    return GroundAtom{"pf_" + r.id.symbol + "_" + tag, r.id.args, {}}.str();
}

GroundAtom assigned_atom(const RandomRule& r) { return {"assigned_" + r.id.symbol, r.id.args, {}}; }

// A domain with exactly `values`, declared on demand.
std::string domain_for(Signature& sig, const std::vector<std::string>& values, const std::string& fresh) {
    auto same = [&](const std::vector<std::string>& xs) {
        return std::is_permutation(xs.begin(), xs.end(), values.begin(), values.end());
    };
    if (same({"f", "t"})) { return "bool"; }
    for (const auto& d : sig.domains) {
        if (same(d.values)) { return d.name; }
    }
    sig.domains.push_back({fresh, values, false});
    return fresh;
}

// #const declarations for the constants introduced by the translation.
void declare_constants(MvppProgram& m, std::size_t first) {
    struct Family {
        std::vector<std::vector<std::string>> args;
        std::vector<std::string>              values;
    };
    std::vector<std::pair<std::string, Family>> families;
    auto add_unique = [](std::vector<std::string>& xs, const std::string& x) {
        if (std::find(xs.begin(), xs.end(), x) == xs.end()) { xs.push_back(x); }
    };
    for (std::size_t c = first; c != m.constants.size(); ++c) {
        const auto& atoms = m.constants[c].atoms;
        if (atoms.empty()) { continue; }
        const auto& head = m.atoms[atoms.front()];
        auto it = std::find_if(families.begin(), families.end(), [&](const auto& f) { return f.first == head.symbol; });
        if (it == families.end()) {
            families.push_back({head.symbol, Family{std::vector<std::vector<std::string>>(head.args.size()), {}}});
            it = std::prev(families.end());
        }
        for (std::size_t k = 0; k != head.args.size(); ++k) { add_unique(it->second.args[k], head.args[k]); }
        for (auto a : atoms) { add_unique(it->second.values, *m.atoms[a].value); }
    }
    for (const auto& [symbol, f] : families) {
        ConstDecl decl{symbol, {}, domain_for(m.signature, f.values, symbol + "_dom")};
        for (std::size_t k = 0; k != f.args.size(); ++k) {
            decl.arg_domains.push_back(domain_for(m.signature, f.args[k], symbol + "_arg" + std::to_string(k + 1)));
        }
        m.signature.constants.push_back(std::move(decl));
    }
}
} // namespace

MvppProgram plog_to_mvpp(const PlogProgram& p) {
    auto        tau = plog_tau(p);
    MvppProgram m;
    m.signature = p.signature;
    m.atoms     = tau.atoms;
    m.rules     = tau.unweighted();
    for (const auto& c : p.constants) { m.constants.push_back({c.base.str(), c.atoms}); }
    for (std::size_t ri = 0; ri != p.random.size(); ++ri) {
        const auto& r      = p.random[ri];
        const auto& c      = p.constants[r.constant];
        AtomId      interv = *m.atoms.find(intervene_atom(c));
        AtomId      assign = m.atoms.intern(assigned_atom(r));
        if (!intervened(p, r.constant)) {
            auto groups = pr_groups(p, ri);
            for (std::size_t k = 0; k != groups.size(); ++k) {
                const auto& [body, members] = groups[k];
                ConstantGroup pf{pf_name(r, std::to_string(k + 1)), {}};
                MvppDecl decl;
                decl.constant = m.constants.size();
                for (std::size_t v = 0; v != c.values.size(); ++v) {
                    pf.atoms.push_back(m.atoms.intern(pf_atom(r, std::to_string(k + 1), c.values[v])));
                    decl.probs.push_back(causal_value(p, r.constant, members, v));
                }
                for (std::size_t v = 0; v != c.values.size(); ++v) {
                    Rule rule;
                    rule.head = {c.atoms[v]};
                    rule.pos  = body.pos;
                    rule.pos.insert(rule.pos.end(), r.body.pos.begin(), r.body.pos.end());
                    rule.pos.push_back(pf.atoms[v]);
                    auto negs = body.neg;
                    negs.insert(negs.end(), r.body.neg.begin(), r.body.neg.end());
                    rule.neg = neg_literals(negs, Formula::negate(Formula::make_atom(interv)));
                    m.rules.push_back(std::move(rule));
                }
                Rule assigned;
                assigned.head = {assign};
                assigned.pos  = body.pos;
                assigned.pos.insert(assigned.pos.end(), r.body.pos.begin(), r.body.pos.end());
                auto negs = body.neg;
                negs.insert(negs.end(), r.body.neg.begin(), r.body.neg.end());
                assigned.neg = neg_literals(negs, Formula::negate(Formula::make_atom(interv)));
                m.rules.push_back(std::move(assigned));
                m.constants.push_back(std::move(pf));
                m.decls.push_back(std::move(decl));
            }
        }
        ConstantGroup box{pf_name(r, "box"), {}};
        MvppDecl decl;
        decl.constant = m.constants.size();
        for (std::size_t v = 0; v != c.values.size(); ++v) {
            box.atoms.push_back(m.atoms.intern(pf_atom(r, "box", c.values[v])));
            decl.probs.push_back(1.0 / static_cast<double>(c.values.size()));
        }
        for (std::size_t v = 0; v != c.values.size(); ++v) {
            Rule rule;
            rule.head = {c.atoms[v]};
            rule.pos  = r.body.pos;
            rule.pos.push_back(box.atoms[v]);
            rule.neg = neg_literals(r.body.neg, Formula::negate(Formula::make_atom(assign)));
            m.rules.push_back(std::move(rule));
        }
        m.constants.push_back(std::move(box));
        m.decls.push_back(std::move(decl));
    }
    declare_constants(m, p.constants.size());
    return m;
}

Formula fw_formula(const PlogProgram& p, const MvppProgram& translated, const Interpretation& W) {
    std::vector<Formula> parts;
    for (auto a : W.atoms()) { parts.push_back(Formula::make_atom(a)); }
    for (std::size_t c = 0; c != p.constants.size(); ++c) {
        auto ctx = causal_context(p, W, c);
        if (!ctx || !ctx->value) { continue; }
        const auto& r     = p.random[ctx->rule];
        const auto& value = p.constants[c].values[*ctx->value];
        std::string tag   = "box";
        if (!ctx->applied.empty()) {
            auto groups = pr_groups(p, ctx->rule);
            auto key    = p.pr[ctx->applied.front()].body.canonical();
            auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) { return g.first == key; });
            tag     = std::to_string(static_cast<std::size_t>(it - groups.begin()) + 1);
        }
        auto id = translated.atoms.find(pf_atom(r, tag, value));
        if (!id) { throw Error(Errc::SignatureError, "missing pf atom for " + value_name(p, c, *ctx->value)); }
        parts.push_back(Formula::make_atom(*id));
    }
    if (parts.empty()) { return Formula::truth(); }
    if (parts.size() == 1) { return parts.front(); }
    return Formula::conj(std::move(parts));
}

} // namespace lpmln
