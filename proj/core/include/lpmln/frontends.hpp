#pragma once
// Frontend languages (ASP with weak constraints, MLN, ProbLog, multi-valued
// probabilistic programs, simple P-log), their translations into LP^MLN and
// direct-semantics evaluators.
//
// Frontend programs are ground: the parser instantiates them against their
// declarations. Translations extend the atom table of their input, so atom ids
// of the source stay valid in the result.

#include <lpmln/infer.hpp>

namespace lpmln {

/////////////////////////////////////////////////////////////////////////////////////////
// Program values
/////////////////////////////////////////////////////////////////////////////////////////
/// `:~ Body. [weight]`
struct WeakConstraint {
    std::vector<AtomId> pos;
    Formula             neg;
    long long           weight = 1;

    Formula body() const;
    bool    operator==(const WeakConstraint&) const = default;
};

struct WeakProgram {
    Signature                   signature;
    AtomTable                   atoms;
    std::vector<Rule>           rules;
    std::vector<WeakConstraint> weak;
};

/// `pr :: a`
struct ProbFact {
    AtomId atom = 0;
    double prob = 0.0;
};

struct ProbLogProgram {
    Signature             signature;
    AtomTable             atoms;
    std::vector<ProbFact> facts;
    std::vector<Rule>     rules;
};

/// A ground constant `c(args)` with one atom `c(args)=v` per domain value.
struct ConstantGroup {
    std::string         name;
    std::vector<AtomId> atoms;
};

/// `p1 : c=v1 | ... | pn : c=vn`, probabilities aligned with the atoms of the constant.
struct MvppDecl {
    std::size_t         constant = 0;
    std::vector<double> probs;
};

struct MvppProgram {
    Signature                  signature;
    AtomTable                  atoms;
    std::vector<ConstantGroup> constants; // every constant, for uniqueness of value
    std::vector<MvppDecl>      decls;
    std::vector<Rule>          rules;

    bool is_probabilistic(std::size_t constant) const;
};

/// A conjunction of literals `a` and `not a`.
struct PlogBody {
    std::vector<AtomId> pos;
    std::vector<AtomId> neg;

    Formula formula() const;
    /// Order-insensitive comparison key.
    PlogBody canonical() const;
    bool     operator==(const PlogBody&) const = default;
};

struct PlogConstant {
    GroundAtom               base; // without value
    std::vector<std::string> values;
    std::vector<AtomId>      atoms; // aligned with values
    bool                     boolean_atom = false; // an undeclared atom read as c=t
};

/// `[r] random(c) :- B.`
struct RandomRule {
    GroundAtom  id;
    std::size_t constant = 0;
    PlogBody    body;
};

/// `pr[r](c=v | B) = p.`
struct PrAtom {
    std::size_t rule  = 0; // index into PlogProgram::random
    std::size_t value = 0; // index into the constant's values
    PlogBody    body;
    double      prob = 0.0;
};

struct PlogProgram {
    Signature                 signature;
    AtomTable                 atoms;
    std::vector<PlogConstant> constants;
    std::vector<Rule>         rules; // R, normal rules
    std::vector<RandomRule>   random;
    std::vector<PrAtom>       pr;
    std::vector<AtomId>       obs; // atoms c=v of Obs(c=v)
    std::vector<AtomId>       act; // atoms c=v of Do(c=v)

    /// Index of the constant owning `atom`, if any.
    std::optional<std::size_t> constant_of(AtomId atom) const;
};

/////////////////////////////////////////////////////////////////////////////////////////
// ASP and weak constraints
/////////////////////////////////////////////////////////////////////////////////////////
/// Every rule becomes hard.
GroundProgram asp_to_lpmln(const Signature& sig, const AtomTable& atoms, std::span<const Rule> rules);

/// Hard rules plus `-w : ⊥ ← ¬Body` per weak constraint.
GroundProgram weak_to_lpmln(const WeakProgram& w);

/// Stable models of the ASP part with minimal penalty, via weak_to_lpmln.
/// Throws NoStableModel when the ASP part has none.
std::vector<Interpretation> optimal_stable_models(const WeakProgram& w, const Limits& limits = {});

/// Σ weights of the weak constraints whose body holds in I.
long long penalty(const WeakProgram& w, const Interpretation& I);

/////////////////////////////////////////////////////////////////////////////////////////
// MLN
/////////////////////////////////////////////////////////////////////////////////////////
/// `w : ⊥ ← ¬F` per formula and `choiceWeight : {A}^ch` per atom.
GroundProgram mln_to_lpmln(const MlnProgram& L, double choiceWeight = 0.0);

/// Π's rules as formulas plus hard completion formulas. Throws NotTight unless `force`.
MlnProgram completion(const GroundProgram& g, bool force = false);

/// Π's rules as formulas plus a hard loop formula per loop of Π̄.
MlnProgram loop_augmented_mln(const GroundProgram& g, const Limits& limits = {}, bool allSubsets = false);

/// True iff some member of SM[Π] satisfies every hard rule.
bool has_hard_consistent_model(const GroundProgram& g, const Limits& limits = {});

/////////////////////////////////////////////////////////////////////////////////////////
// ProbLog
/////////////////////////////////////////////////////////////////////////////////////////
GroundProgram problog_to_lpmln(const ProbLogProgram& p);

/// Distribution semantics by enumeration of total choices. Throws NotWellDefined
/// when a total choice does not lead to exactly one stable model.
Distribution problog_distribution(const ProbLogProgram& p, const Limits& limits = {});

/////////////////////////////////////////////////////////////////////////////////////////
// Multi-valued probabilistic programs
/////////////////////////////////////////////////////////////////////////////////////////
/// T(Π).
GroundProgram mvpp_to_lpmln(const MvppProgram& m);

/// P″ over SM″. Throws ZeroProbabilityDeclared or EmptySmDoublePrime.
Distribution mvpp_direct_distribution(const MvppProgram& m, const Limits& limits = {});

/////////////////////////////////////////////////////////////////////////////////////////
// Simple P-log
/////////////////////////////////////////////////////////////////////////////////////////
struct Diagnostic {
    std::string kind;
    std::string message;
};

/// Static checks plus the unique selection and unique assignment conditions in
/// every possible world.
std::vector<Diagnostic> plog_validate(const PlogProgram& p, const Limits& limits = {});

/// τ(Π) as an all-hard ground program over an extension of `p.atoms`.
GroundProgram plog_tau(const PlogProgram& p);

struct WorldMeasure {
    Interpretation W; // over the atoms of plog_tau(p)
    double         mu_hat = 0.0;
    double         mu     = 0.0;
};

struct PlogMeasure {
    AtomTable                 atoms; // of plog_tau(p)
    std::vector<WorldMeasure> worlds;
};

/// Possible worlds with unnormalized and normalized measure.
/// Throws Inconsistent, AllZeroMeasure, ValidationError or DefaultProbabilityUndefined.
PlogMeasure plog_measure(const PlogProgram& p, const Limits& limits = {});

/// P_Π(A) for a formula over the atoms of plog_tau(p).
double plog_prob(const PlogMeasure& m, const Formula& query);

/// The causal probability P(W, c=v) of the value `c=v` that holds in W, if c=v is possible in W.
std::optional<double> plog_causal_probability(const PlogProgram& p, const Interpretation& W, std::size_t constant);

/// Π^LPMLN as a multi-valued probabilistic program over an extension of plog_tau(p).atoms.
MvppProgram plog_to_mvpp(const PlogProgram& p);

/// F_W over the atoms of `translated` (= plog_to_mvpp(p)).
Formula fw_formula(const PlogProgram& p, const MvppProgram& translated, const Interpretation& W);

/// Names of the derived atoms used by the P-log translations.
std::string plog_intervene_symbol(const std::string& constantSymbol);
std::string plog_obs_symbol(const std::string& constantSymbol);
std::string plog_do_symbol(const std::string& constantSymbol);

/// I viewed over a larger universe.
Interpretation widen(const Interpretation& I, std::size_t universe);

} // namespace lpmln
