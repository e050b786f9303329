#include <lpmln/program.hpp>

#include <algorithm>

namespace lpmln {

namespace {
std::string term_str(const Term& t) { return t.name; }

std::string arith_str(const ArithTerm& a) {
    std::string out = term_str(a.base);
    if (a.modulus) { out += " mod " + term_str(*a.modulus); }
    return out;
}
} // namespace

std::string AtomPattern::str() const {
    std::string out = symbol;
    if (!args.empty()) {
        out += '(';
        for (std::size_t i = 0; i != args.size(); ++i) {
            if (i) { out += ','; }
            out += term_str(args[i]);
        }
        out += ')';
    }
    if (value) { out += '=' + term_str(*value); }
    return out;
}

std::string Builtin::str() const {
    const char* ops[] = {" = ", " != ", " < ", " <= "};
    return arith_str(lhs) + ops[static_cast<int>(op)] + arith_str(rhs);
}

const DomainDecl* Signature::domain(const std::string& name) const {
    static const DomainDecl boolDomain{"bool", {"f", "t"}, false};
    for (const auto& d : domains) {
        if (d.name == name) { return &d; }
    }
    return name == "bool" ? &boolDomain : nullptr;
}

const ConstDecl* Signature::constant(const std::string& symbol) const {
    for (const auto& c : constants) {
        if (c.symbol == symbol) { return &c; }
    }
    return nullptr;
}

std::optional<std::string> Signature::variable_domain(const std::string& var) const {
    for (const auto& v : variables) {
        if (v.name == var) { return v.domain; }
    }
    return std::nullopt;
}

std::size_t GroundProgram::num_hard() const {
    return static_cast<std::size_t>(
        std::count_if(rules.begin(), rules.end(), [](const WeightedRule& r) { return r.weight.hard; }));
}

std::vector<Rule> GroundProgram::unweighted() const {
    std::vector<Rule> out;
    out.reserve(rules.size());
    for (const auto& r : rules) { out.push_back(r.rule); }
    return out;
}

GroundProgram make_ground_program(AtomTable atoms, std::vector<WeightedRule> rules) {
    GroundProgram g;
    g.atoms = std::move(atoms);
    g.rules = std::move(rules);
    g.provenance.resize(g.rules.size());
    for (std::size_t i = 0; i != g.rules.size(); ++i) { g.provenance[i] = i; }
    return g;
}

} // namespace lpmln
