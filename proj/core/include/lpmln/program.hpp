#pragma once
// Non-ground programs (typed variables over finite domains) and their ground form.

#include <lpmln/core.hpp>

#include <optional>
#include <string>
#include <vector>

namespace lpmln {

struct Term {
    enum class Kind : std::uint8_t { Constant, Variable };

    Kind        kind = Kind::Constant;
    std::string name;

    static Term constant(std::string n) { return {Kind::Constant, std::move(n)}; }
    static Term variable(std::string n) { return {Kind::Variable, std::move(n)}; }

    bool is_variable() const noexcept { return kind == Kind::Variable; }
    auto operator<=>(const Term&) const = default;
    bool operator==(const Term&) const  = default;
};

/// `symbol(args)` or `symbol(args)=value`, possibly with variables.
struct AtomPattern {
    std::string         symbol;
    std::vector<Term>   args;
    std::optional<Term> value;

    std::string str() const;
    auto        operator<=>(const AtomPattern&) const = default;
    bool        operator==(const AtomPattern&) const  = default;
};

using FormulaPattern = BasicFormula<AtomPattern>;

/// `lhs` or `lhs mod modulus`.
struct ArithTerm {
    Term                base;
    std::optional<Term> modulus;

    bool operator==(const ArithTerm&) const = default;
};

enum class CmpOp : std::uint8_t { Eq, Ne, Lt, Le };

/// Builtin relation evaluated at grounding time.
struct Builtin {
    ArithTerm lhs;
    CmpOp     op = CmpOp::Eq;
    ArithTerm rhs;

    std::string str() const;
    bool        operator==(const Builtin&) const = default;
};

struct RulePattern {
    std::vector<AtomPattern> head;
    std::vector<AtomPattern> pos;
    std::vector<Builtin>     builtins;
    FormulaPattern           neg;

    bool operator==(const RulePattern&) const = default;
};

struct WeightedRulePattern {
    Weight      weight;
    RulePattern rule;

    bool operator==(const WeightedRulePattern&) const = default;
};

struct DomainDecl {
    std::string              name;
    std::vector<std::string> values;
    bool                     is_range = false; // declared as lo..hi

    bool operator==(const DomainDecl&) const = default;
};

/// `#const c(d1,...,dk) : dom.`: a multi-valued constant family.
struct ConstDecl {
    std::string              symbol;
    std::vector<std::string> arg_domains;
    std::string              value_domain;

    bool operator==(const ConstDecl&) const = default;
};

/// `#atom p(d1,...,dk).`: Boolean atoms added to the signature.
struct AtomDecl {
    std::string       symbol;
    std::vector<Term> args; // constants or domain names

    bool operator==(const AtomDecl&) const = default;
};

struct VarDecl {
    std::string name;
    std::string domain;

    bool operator==(const VarDecl&) const = default;
};

/// Declarations of a source file. The domain `bool` = {f, t} is predefined.
struct Signature {
    std::vector<DomainDecl> domains;
    std::vector<VarDecl>    variables;
    std::vector<ConstDecl>  constants;
    std::vector<AtomDecl>   atoms;

    const DomainDecl* domain(const std::string& name) const;
    const ConstDecl*  constant(const std::string& symbol) const;
    std::optional<std::string> variable_domain(const std::string& var) const;

    bool operator==(const Signature&) const = default;
};

struct Program {
    Signature                        signature;
    std::vector<WeightedRulePattern> rules;

    bool operator==(const Program&) const = default;
};

/// gr_σ[Π]: ground weighted rules over an interned atom universe.
struct GroundProgram {
    Signature                 signature;
    AtomTable                 atoms;
    std::vector<WeightedRule> rules;
    std::vector<std::size_t>  provenance; // ground rule -> source rule index

    std::size_t num_hard() const;
    /// Π̄: the rules without weights.
    std::vector<Rule> unweighted() const;
};

/// Builds a ground program from ground rules; provenance is the identity.
GroundProgram make_ground_program(AtomTable atoms, std::vector<WeightedRule> rules);

} // namespace lpmln
