#pragma once
// Instantiation of typed non-ground programs over finite domains.

#include <lpmln/program.hpp>

#include <functional>
#include <map>

namespace lpmln {

struct GroundLimits {
    std::size_t max_instances = 100000;
};

using Assignment = std::map<std::string, std::string>;

/// Instantiates patterns against a signature, interning atoms into a table.
/// Shared by the LP^MLN grounder and every frontend.
class Instantiator {
public:
    Instantiator(const Signature& sig, AtomTable& atoms, GroundLimits limits = {});

    /// Interns the atoms declared by `#const` and `#atom`, in declaration order.
    void declare_signature_atoms();

    /// Visits every assignment of `vars` (lexicographic in declaration-value order)
    /// for which all builtins hold. Throws EmptyDomain, SignatureError for untyped
    /// variables and GroundingExplosion above the instance cap.
    void for_each_assignment(const std::vector<std::string>& vars, const std::vector<Builtin>& builtins,
                             const std::function<void(const Assignment&)>& visit) const;

    GroundAtom ground_atom(const AtomPattern& p, const Assignment& asg) const;
    AtomId     atom(const AtomPattern& p, const Assignment& asg);
    Formula    formula(const FormulaPattern& f, const Assignment& asg);
    Rule       rule(const RulePattern& r, const Assignment& asg);

    const std::vector<std::string>& domain_values(const std::string& domain) const;

    /// Ground constant names `c(args)` of a `#const` declaration, each with its value atoms.
    struct ConstInstance {
        std::string         name;
        GroundAtom          base; // value unset
        std::vector<AtomId> atoms;
        const ConstDecl*    decl = nullptr;
    };
    std::vector<ConstInstance> constant_instances();

    const Signature& signature() const noexcept { return sig_; }
    AtomTable&       table() noexcept { return atoms_; }

private:
    std::string resolve(const Term& t, const Assignment& asg) const;

    const Signature& sig_;
    AtomTable&       atoms_;
    GroundLimits     limits_;
};

bool eval_builtin(const Builtin& b, const Assignment& asg);

/// Variables of a rule in first-occurrence order (head, positive body, builtins, negative part).
std::vector<std::string> variables_of(const RulePattern& r);
void collect_variables(const AtomPattern& a, std::vector<std::string>& out);
void collect_variables(const FormulaPattern& f, std::vector<std::string>& out);
void collect_variables(const Builtin& b, std::vector<std::string>& out);

/// gr_σ[Π]. Rule order is source order, then lexicographic assignment order.
GroundProgram ground_program(const Program& p, const GroundLimits& limits = {});

/// The atom universe of `ground_program(p)`.
std::vector<GroundAtom> ground_atoms(const Program& p, const GroundLimits& limits = {});

/// A ground program viewed as a (variable-free) non-ground program.
Program lift(const GroundProgram& g);

AtomPattern to_pattern(const GroundAtom& a);
FormulaPattern to_pattern(const Formula& f, const AtomTable& table);

} // namespace lpmln
