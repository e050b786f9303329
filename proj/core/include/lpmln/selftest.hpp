#pragma once
// Random program generators and the semantic properties checked by `lpmln selftest`.

#include <lpmln/frontends.hpp>

#include <functional>
#include <random>

namespace lpmln {

namespace gen {
using Rng = std::mt19937_64;

/// Unweighted rules over atoms p1..pn: disjunctive heads, constraints, `not` and `not not`.
std::vector<Rule> rules(Rng& rng, std::size_t numAtoms, std::size_t numRules);
AtomTable         atoms(std::size_t n, const std::string& prefix = "p");

GroundProgram asp_program(Rng& rng, std::size_t maxAtoms = 8, std::size_t maxRules = 10);
/// Mixed hard and soft rules.
GroundProgram lpmln_program(Rng& rng, std::size_t maxAtoms = 6, std::size_t maxRules = 8);
/// Positive bodies only mention atoms of a lower index than every head atom.
GroundProgram tight_program(Rng& rng, std::size_t maxAtoms = 6, std::size_t maxRules = 8);
MlnProgram    mln(Rng& rng, std::size_t maxAtoms = 4, std::size_t maxFormulas = 6);
/// Stratified rules over derived atoms, hence well-defined.
ProbLogProgram problog(Rng& rng, std::size_t maxFacts = 4, std::size_t maxDerived = 4);
/// Positive probabilities, stratified rules, possibly constraints.
MvppProgram    mvpp(Rng& rng);
Interpretation interpretation(Rng& rng, std::size_t n);
Formula        formula(Rng& rng, std::size_t numAtoms, int depth);
} // namespace gen

/// Compares two distributions by atom names. Interpretations missing from one side
/// count as probability 0. Fills `why` with the first difference.
bool same_distribution(const Distribution& x, const Distribution& y, double tol, std::string* why = nullptr);

struct SelftestOptions {
    std::uint64_t            seed       = 1;
    std::size_t              iterations = 200;
    Limits                   limits;
    std::vector<std::string> only; // property names; empty means all
};

struct PropertyReport {
    std::string                name;
    std::size_t                cases   = 0;
    std::size_t                skipped = 0; // generated inputs outside the property's precondition
    std::optional<std::string> counterexample;

    bool ok() const { return !counterexample; }
};

std::vector<std::string> selftest_properties();

/// Runs each property for `iterations` generated inputs. Failing inputs are shrunk
/// by dropping rules while the failure persists.
std::vector<PropertyReport> run_selftest(const SelftestOptions& opts,
                                         const std::function<void(const PropertyReport&)>& progress = {});

} // namespace lpmln
