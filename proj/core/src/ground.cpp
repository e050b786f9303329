#include <lpmln/ground.hpp>

#include <algorithm>
#include <charconv>

namespace lpmln {

namespace {
void add_var(const Term& t, std::vector<std::string>& out) {
    if (t.is_variable() && std::find(out.begin(), out.end(), t.name) == out.end()) { out.push_back(t.name); }
}

void add_var(const ArithTerm& t, std::vector<std::string>& out) {
    add_var(t.base, out);
    if (t.modulus) { add_var(*t.modulus, out); }
}

std::optional<long long> as_integer(const std::string& s) {
    long long v     = 0;
    auto [ptr, ec]  = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) { return std::nullopt; }
    return v;
}

std::string value_of(const Term& t, const Assignment& asg) {
    if (!t.is_variable()) { return t.name; }
    auto it = asg.find(t.name);
    if (it == asg.end()) { throw Error(Errc::SignatureError, "unbound variable " + t.name); }
    return it->second;
}

std::optional<long long> eval_arith(const ArithTerm& a, const Assignment& asg) {
    auto base = as_integer(value_of(a.base, asg));
    if (!a.modulus) { return base; }
    auto m = as_integer(value_of(*a.modulus, asg));
    if (!base || !m) { throw Error(Errc::ValidationError, "mod applied to a non-integer"); }
    if (*m == 0) { throw Error(Errc::ValidationError, "mod by zero"); }
    return ((*base % *m) + *m) % *m;
}
} // namespace

void collect_variables(const AtomPattern& a, std::vector<std::string>& out) {
    for (const auto& t : a.args) { add_var(t, out); }
    if (a.value) { add_var(*a.value, out); }
}

void collect_variables(const FormulaPattern& f, std::vector<std::string>& out) {
    if (f.op == Connective::Atom) {
        collect_variables(f.atom, out);
        return;
    }
    for (const auto& g : f.args) { collect_variables(g, out); }
}

void collect_variables(const Builtin& b, std::vector<std::string>& out) {
    add_var(b.lhs, out);
    add_var(b.rhs, out);
}

std::vector<std::string> variables_of(const RulePattern& r) {
    std::vector<std::string> vars;
    for (const auto& a : r.head) { collect_variables(a, vars); }
    for (const auto& a : r.pos) { collect_variables(a, vars); }
    for (const auto& b : r.builtins) { collect_variables(b, vars); }
    collect_variables(r.neg, vars);
    return vars;
}

bool eval_builtin(const Builtin& b, const Assignment& asg) {
    if (b.op == CmpOp::Eq || b.op == CmpOp::Ne) {
        bool eq = false;
        if (!b.lhs.modulus && !b.rhs.modulus) {
            auto l = value_of(b.lhs.base, asg);
            auto r = value_of(b.rhs.base, asg);
            auto li = as_integer(l), ri = as_integer(r);
            eq = (li && ri) ? *li == *ri : l == r;
        }
        else {
            eq = eval_arith(b.lhs, asg) == eval_arith(b.rhs, asg);
        }
        return b.op == CmpOp::Eq ? eq : !eq;
    }
    auto l = eval_arith(b.lhs, asg);
    auto r = eval_arith(b.rhs, asg);
    if (!l || !r) { throw Error(Errc::ValidationError, "comparison " + b.str() + " on non-integers"); }
    return b.op == CmpOp::Lt ? *l < *r : *l <= *r;
}

/////////////////////////////////////////////////////////////////////////////////////////
// Instantiator
/////////////////////////////////////////////////////////////////////////////////////////
Instantiator::Instantiator(const Signature& sig, AtomTable& atoms, GroundLimits limits)
    : sig_(sig)
    , atoms_(atoms)
    , limits_(limits) {}

const std::vector<std::string>& Instantiator::domain_values(const std::string& domain) const {
    const auto* d = sig_.domain(domain);
    if (!d) { throw Error(Errc::SignatureError, "unknown domain " + domain); }
    if (d->values.empty()) { throw Error(Errc::EmptyDomain, "domain " + domain + " is empty"); }
    return d->values;
}

void Instantiator::for_each_assignment(const std::vector<std::string>& vars, const std::vector<Builtin>& builtins,
                                       const std::function<void(const Assignment&)>& visit) const {
    std::vector<const std::vector<std::string>*> doms;
    std::size_t                                  total = 1;
    for (const auto& v : vars) {
        auto dn = sig_.variable_domain(v);
        if (!dn) { throw Error(Errc::SignatureError, "variable " + v + " has no #var domain annotation"); }
        doms.push_back(&domain_values(*dn));
        total *= doms.back()->size();
        if (total > limits_.max_instances) {
            throw Error(Errc::GroundingExplosion,
                        "more than " + std::to_string(limits_.max_instances) + " instances of a single rule");
        }
    }
    Assignment               asg;
    std::vector<std::size_t> idx(vars.size(), 0);
    for (std::size_t n = 0; n != total; ++n) {
        for (std::size_t i = 0; i != vars.size(); ++i) { asg[vars[i]] = (*doms[i])[idx[i]]; }
        if (std::all_of(builtins.begin(), builtins.end(), [&](const Builtin& b) { return eval_builtin(b, asg); })) {
            visit(asg);
        }
        // odometer, last variable fastest
        for (std::size_t i = vars.size(); i-- > 0;) {
            if (++idx[i] < doms[i]->size()) { break; }
            idx[i] = 0;
        }
    }
}

std::string Instantiator::resolve(const Term& t, const Assignment& asg) const { return value_of(t, asg); }

GroundAtom Instantiator::ground_atom(const AtomPattern& p, const Assignment& asg) const {
    GroundAtom g;
    g.symbol = p.symbol;
    for (const auto& t : p.args) { g.args.push_back(resolve(t, asg)); }
    if (p.value) { g.value = resolve(*p.value, asg); }
    if (const auto* c = sig_.constant(p.symbol)) {
        if (c->arg_domains.size() != g.args.size()) {
            throw Error(Errc::SignatureError, "constant " + p.symbol + " expects " +
                                                  std::to_string(c->arg_domains.size()) + " arguments");
        }
        for (std::size_t i = 0; i != g.args.size(); ++i) {
            const auto& dv = domain_values(c->arg_domains[i]);
            if (std::find(dv.begin(), dv.end(), g.args[i]) == dv.end()) {
                throw Error(Errc::SignatureError, g.str() + ": argument " + g.args[i] + " not in domain " +
                                                      c->arg_domains[i]);
            }
        }
        const auto& vals = domain_values(c->value_domain);
        if (!g.value) {
            if (c->value_domain != "bool") {
                throw Error(Errc::SignatureError, "multi-valued constant " + g.str() + " used without a value");
            }
            g.value = "t";
        }
        if (std::find(vals.begin(), vals.end(), *g.value) == vals.end()) {
            throw Error(Errc::SignatureError, g.str() + ": value not in Dom(" + p.symbol + ")");
        }
    }
    return g;
}

AtomId Instantiator::atom(const AtomPattern& p, const Assignment& asg) { return atoms_.intern(ground_atom(p, asg)); }

Formula Instantiator::formula(const FormulaPattern& f, const Assignment& asg) {
    Formula out;
    out.op = f.op;
    if (f.op == Connective::Atom) {
        out.atom = atom(f.atom, asg);
        return out;
    }
    out.args.reserve(f.args.size());
    for (const auto& g : f.args) { out.args.push_back(formula(g, asg)); }
    return out;
}

Rule Instantiator::rule(const RulePattern& r, const Assignment& asg) {
    Rule out;
    for (const auto& a : r.head) { out.head.push_back(atom(a, asg)); }
    for (const auto& a : r.pos) { out.pos.push_back(atom(a, asg)); }
    out.neg = formula(r.neg, asg);
    return out;
}

std::vector<Instantiator::ConstInstance> Instantiator::constant_instances() {
    std::vector<ConstInstance> out;
    for (const auto& c : sig_.constants) {
        std::vector<const std::vector<std::string>*> doms;
        std::size_t                                  total = 1;
        for (const auto& d : c.arg_domains) {
            doms.push_back(&domain_values(d));
            total *= doms.back()->size();
        }
        const auto&              vals = domain_values(c.value_domain);
        std::vector<std::size_t> idx(doms.size(), 0);
        for (std::size_t n = 0; n != total; ++n) {
            ConstInstance inst;
            inst.decl        = &c;
            inst.base.symbol = c.symbol;
            for (std::size_t i = 0; i != doms.size(); ++i) { inst.base.args.push_back((*doms[i])[idx[i]]); }
            inst.name = inst.base.str();
            for (const auto& v : vals) {
                GroundAtom a = inst.base;
                a.value      = v;
                inst.atoms.push_back(atoms_.intern(a));
            }
            out.push_back(std::move(inst));
            for (std::size_t i = doms.size(); i-- > 0;) {
                if (++idx[i] < doms[i]->size()) { break; }
                idx[i] = 0;
            }
        }
    }
    return out;
}

void Instantiator::declare_signature_atoms() {
    constant_instances();
    for (const auto& a : sig_.atoms) {
        // arguments naming a domain range over it; other arguments are constants
        std::vector<std::vector<std::string>> choices;
        for (const auto& t : a.args) {
            if (sig_.domain(t.name)) { choices.push_back(domain_values(t.name)); }
            else { choices.push_back({t.name}); }
        }
        std::vector<std::size_t> idx(choices.size(), 0);
        std::size_t              total = 1;
        for (const auto& c : choices) { total *= c.size(); }
        for (std::size_t n = 0; n != total; ++n) {
            GroundAtom g;
            g.symbol = a.symbol;
            for (std::size_t i = 0; i != choices.size(); ++i) { g.args.push_back(choices[i][idx[i]]); }
            atoms_.intern(g);
            for (std::size_t i = choices.size(); i-- > 0;) {
                if (++idx[i] < choices[i].size()) { break; }
                idx[i] = 0;
            }
        }
    }
}

/////////////////////////////////////////////////////////////////////////////////////////
// Program grounding
/////////////////////////////////////////////////////////////////////////////////////////
GroundProgram ground_program(const Program& p, const GroundLimits& limits) {
    GroundProgram g;
    g.signature = p.signature;
    Instantiator inst(g.signature, g.atoms, limits);
    inst.declare_signature_atoms();
    std::size_t total = 0;
    for (std::size_t i = 0; i != p.rules.size(); ++i) {
        const auto& wr = p.rules[i];
        inst.for_each_assignment(variables_of(wr.rule), wr.rule.builtins, [&](const Assignment& asg) {
            if (++total > limits.max_instances) {
                throw Error(Errc::GroundingExplosion,
                            "more than " + std::to_string(limits.max_instances) + " ground rules");
            }
            g.rules.push_back({wr.weight, inst.rule(wr.rule, asg)});
            g.provenance.push_back(i);
        });
    }
    return g;
}

std::vector<GroundAtom> ground_atoms(const Program& p, const GroundLimits& limits) {
    return ground_program(p, limits).atoms.atoms();
}

AtomPattern to_pattern(const GroundAtom& a) {
    AtomPattern p;
    p.symbol = a.symbol;
    for (const auto& s : a.args) { p.args.push_back(Term::constant(s)); }
    if (a.value) { p.value = Term::constant(*a.value); }
    return p;
}

FormulaPattern to_pattern(const Formula& f, const AtomTable& table) {
    FormulaPattern out;
    out.op = f.op;
    if (f.op == Connective::Atom) {
        out.atom = to_pattern(table[f.atom]);
        return out;
    }
    for (const auto& g : f.args) { out.args.push_back(to_pattern(g, table)); }
    return out;
}

Program lift(const GroundProgram& g) {
    Program p;
    p.signature = g.signature;
    for (const auto& wr : g.rules) {
        RulePattern r;
        for (auto a : wr.rule.head) { r.head.push_back(to_pattern(g.atoms[a])); }
        for (auto a : wr.rule.pos) { r.pos.push_back(to_pattern(g.atoms[a])); }
        r.neg = to_pattern(wr.rule.neg, g.atoms);
        p.rules.push_back({wr.weight, std::move(r)});
    }
    return p;
}

} // namespace lpmln
