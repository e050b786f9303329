#pragma once
// Probabilistic semantics of LP^MLN and MLN programs.

#include <lpmln/stable.hpp>

#include <map>

namespace lpmln {

struct DistEntry {
    Interpretation I;
    SymbolicWeight weight;
    double         prob = 0.0;
};

/// The probabilistic stable models of a ground program (or the models of an MLN)
/// with their limit probabilities. Entries are in bitmask-ascending order.
struct Distribution {
    AtomTable              atoms;
    std::vector<DistEntry> entries;
    std::uint32_t          max_tier = 0;   // hard rules satisfied by the support
    double                 log_mass = 0.0; // log Σ exp(softSum) over the support

    /// Probability of I (0 if I is not listed).
    double prob(const Interpretation& I) const;

    /// Probabilities keyed by the sorted atom names of each interpretation.
    std::map<std::vector<std::string>, double> by_name() const;
};

/// Π_I as rule indices.
std::vector<std::size_t> satisfied_rules(const GroundProgram& g, const Interpretation& I);

/// SM[Π] in bitmask-ascending order.
std::vector<Interpretation> soft_stable_set(const GroundProgram& g, const Limits& limits = {});

/// W_Π(I) as a symbolic weight; zero unless I ∈ SM[Π].
SymbolicWeight unnormalized_weight(const GroundProgram& g, const Interpretation& I, const Limits& limits = {});

/// P_Π restricted to its support (the maximal hard tier of SM[Π]).
Distribution distribution(const GroundProgram& g, const Limits& limits = {});

/// P′_Π over SM′[Π]. Throws NoHardConsistentModel when SM′[Π] is empty.
Distribution soft_only_distribution(const GroundProgram& g, const Limits& limits = {});

struct TableRow {
    Interpretation           I;
    std::vector<std::size_t> satisfied;
    SymbolicWeight           weight;
    double                   prob = 0.0;
};

/// One row per interpretation of the universe (at most `max_list_all` atoms).
std::vector<TableRow> full_table(const GroundProgram& g, const Limits& limits = {});

double prob_query(const Distribution& d, const Formula& query);
/// Throws ConditionHasZeroProbability when P(given) = 0.
double cond_prob(const Distribution& d, const Formula& query, const Formula& given);

struct WeightedFormula {
    Weight  weight;
    Formula formula;

    bool operator==(const WeightedFormula&) const = default;
};

/// A ground Markov logic network.
struct MlnProgram {
    Signature                    signature;
    AtomTable                    atoms;
    std::vector<WeightedFormula> formulas;
};

/// P_L normalized over all interpretations of the universe.
Distribution mln_distribution(const MlnProgram& L, const Limits& limits = {});

/// The MLN as the rules `w : ⊥ ← ¬F`, read classically by mln_distribution.
GroundProgram mln_as_constraints(const MlnProgram& L);

} // namespace lpmln
