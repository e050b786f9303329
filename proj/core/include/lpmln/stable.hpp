#pragma once
// Deterministic stable models, dependency graphs, loops and model search.

#include <lpmln/program.hpp>

#include <optional>
#include <span>

namespace lpmln {

/// Resource caps shared by the solver entry points.
struct Limits {
    std::size_t max_atoms    = 64;     // candidate atoms for model search
    std::size_t max_subset   = 24;     // |I| for exhaustive minimality checks
    std::size_t max_loops    = 100000;
    std::size_t max_list_all = 24;     // universe size for full tables
    unsigned    jobs         = 1;
};

/// Π^I: `A ← B` for every rule whose negative part holds in I.
std::vector<Rule> reduct(std::span<const Rule> rules, const Interpretation& I);

/// True iff I satisfies the positive program and no proper subset of I does.
/// Throws SubsetExplosion when a disjunctive check would exceed `maxSubset` atoms.
bool is_minimal_model(const Interpretation& I, std::span<const Rule> positive, std::size_t maxSubset = 24);

bool is_stable_model(std::span<const Rule> rules, const Interpretation& I, std::size_t maxSubset = 24);

/// Stable models of Π̄ in bitmask-ascending order.
std::vector<Interpretation> enumerate_stable_models(const GroundProgram& g, const Limits& limits = {});
std::vector<Interpretation> enumerate_stable_models(std::span<const Rule> rules, std::size_t numAtoms,
                                                    const Limits& limits = {});

/// Edges head atom -> positive body atom.
struct PosDepGraph {
    std::vector<std::vector<AtomId>> succ;

    std::size_t size() const noexcept { return succ.size(); }
    bool        has_edge(AtomId from, AtomId to) const;
};

PosDepGraph positive_dependency_graph(std::span<const Rule> rules, std::size_t numAtoms);

/// Strongly connected components in reverse topological order (sinks first).
std::vector<std::vector<AtomId>> strongly_connected_components(const std::vector<std::vector<AtomId>>& succ);

bool is_tight(std::span<const Rule> rules, std::size_t numAtoms);

using Loop = std::vector<AtomId>; // sorted, nonempty

/// All loops, ordered by size then lexicographically. With `allSubsets` every
/// nonempty atom set is tested directly (at most 12 atoms).
std::vector<Loop> loops(std::span<const Rule> rules, std::size_t numAtoms, const Limits& limits = {},
                        bool allSubsets = false);

Formula external_support(std::span<const Rule> rules, const Loop& loop);
Formula loop_formula(std::span<const Rule> rules, const Loop& loop);

/// One formula `A -> supports(A)` per atom of the universe.
std::vector<Formula> completion_formulas(std::span<const Rule> rules, std::size_t numAtoms);

/////////////////////////////////////////////////////////////////////////////////////////
// Model search
/////////////////////////////////////////////////////////////////////////////////////////
enum class Semantics : std::uint8_t {
    Stable,   // I is a stable model of the rules it satisfies
    Classical // I is any interpretation
};

struct SearchOptions {
    Semantics semantics = Semantics::Stable;
    bool      all_hard  = false; // treat every rule as hard
    /// Only models violating at most this many hard rules. Unset: the minimum
    /// number of violations over all models.
    std::optional<std::uint32_t> max_violations;
    /// Collect every model up to the bound instead of only the best tier.
    bool   all_tiers = false;
    Limits limits;
};

struct FoundModel {
    Interpretation I;
    std::uint32_t  hard_violations = 0;
    double         soft_sum        = 0.0; // sum of satisfied soft weights
};

/// Branch and bound search over the candidate atoms of `g`. Results are in
/// bitmask-ascending order. Throws UniverseExplosion above `max_atoms` candidates.
std::vector<FoundModel> search_models(const GroundProgram& g, const SearchOptions& opts);

/// Atoms that can be true in some model under `semantics`; all others are false.
std::vector<AtomId> candidate_atoms(std::span<const WeightedRule> rules, std::size_t numAtoms, Semantics semantics);

} // namespace lpmln
