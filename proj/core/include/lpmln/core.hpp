#pragma once
// Shared vocabulary: ground atoms, formulas, rules, weights and interpretations.

#include <lpmln/error.hpp>

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lpmln {

using AtomId = std::uint32_t;

/// A ground atom `symbol(args)` or `symbol(args)=value`. Boolean atoms carry no value.
struct GroundAtom {
    std::string                symbol;
    std::vector<std::string>   args;
    std::optional<std::string> value;

    std::string str() const;

    auto operator<=>(const GroundAtom&) const = default;
    bool operator==(const GroundAtom&) const  = default;
};

/// Interns ground atoms; ids are dense and assigned in first-seen order.
class AtomTable {
public:
    AtomId                intern(const GroundAtom& atom);
    std::optional<AtomId> find(const GroundAtom& atom) const;

    const GroundAtom& operator[](AtomId id) const { return atoms_[id]; }
    std::string       name(AtomId id) const { return atoms_[id].str(); }
    std::size_t       size() const noexcept { return atoms_.size(); }
    bool              empty() const noexcept { return atoms_.empty(); }

    const std::vector<GroundAtom>& atoms() const noexcept { return atoms_; }

private:
    std::vector<GroundAtom>      atoms_;
    std::map<GroundAtom, AtomId> index_;
};

enum class Connective : std::uint8_t { True, False, Atom, Not, And, Or, Implies };

/// Classical propositional formula. `A` is the atom representation: AtomId for
/// ground formulas, a pattern type for formulas that still contain variables.
template <class A>
struct BasicFormula {
    Connective                op = Connective::True;
    A                         atom{};
    std::vector<BasicFormula> args;

    static BasicFormula truth() { return {}; }
    static BasicFormula falsity() { return {Connective::False, A{}, {}}; }
    static BasicFormula make_atom(A a) { return {Connective::Atom, std::move(a), {}}; }
    static BasicFormula negate(BasicFormula f) { return {Connective::Not, A{}, {std::move(f)}}; }
    static BasicFormula conj(std::vector<BasicFormula> fs) { return {Connective::And, A{}, std::move(fs)}; }
    static BasicFormula disj(std::vector<BasicFormula> fs) { return {Connective::Or, A{}, std::move(fs)}; }
    static BasicFormula implies(BasicFormula lhs, BasicFormula rhs) {
        return {Connective::Implies, A{}, {std::move(lhs), std::move(rhs)}};
    }

    bool is_true() const noexcept { return op == Connective::True; }
    bool operator==(const BasicFormula&) const = default;
};

using Formula = BasicFormula<AtomId>;

/// Set of atoms taken true over a fixed universe of `universe()` atoms.
class Interpretation {
public:
    Interpretation() = default;
    explicit Interpretation(std::size_t universe);
    Interpretation(std::size_t universe, std::span<const AtomId> trueAtoms);

    std::size_t universe() const noexcept { return size_; }
    bool        contains(AtomId a) const noexcept { return (words_[a >> 6] >> (a & 63)) & 1u; }
    void        insert(AtomId a) noexcept { words_[a >> 6] |= std::uint64_t{1} << (a & 63); }
    void        erase(AtomId a) noexcept { words_[a >> 6] &= ~(std::uint64_t{1} << (a & 63)); }
    void        assign(AtomId a, bool v) noexcept { v ? insert(a) : erase(a); }
    std::size_t count() const noexcept;
    bool        empty() const noexcept { return count() == 0; }
    bool        subset_of(const Interpretation& other) const noexcept;

    std::vector<AtomId> atoms() const;

    bool operator==(const Interpretation&) const = default;

    /// Order of the interpretations read as bitmasks with atom 0 least significant.
    friend std::strong_ordering bitmask_order(const Interpretation& a, const Interpretation& b) noexcept;

    std::string str(const AtomTable& table) const;

private:
    std::size_t                size_ = 0;
    std::vector<std::uint64_t> words_;
};

struct BitmaskLess {
    bool operator()(const Interpretation& a, const Interpretation& b) const noexcept {
        return bitmask_order(a, b) < 0;
    }
};

/// `head ← pos ∧ neg`: head is a disjunction (empty means ⊥), pos a conjunction of
/// atoms, neg a negative formula (True when absent).
struct Rule {
    std::vector<AtomId> head;
    std::vector<AtomId> pos;
    Formula             neg;

    /// The rule read as the implication `pos ∧ neg → head`.
    Formula as_formula() const;
    /// `pos ∧ neg` as a single formula.
    Formula body_formula() const;

    bool operator==(const Rule&) const = default;
};

/// Desugars `{a}^ch ← pos ∧ neg` into `a ← pos ∧ neg ∧ ¬¬a`.
Rule choice_rule(AtomId a, std::vector<AtomId> pos = {}, Formula neg = Formula::truth());

/// Conjoins `extra` onto an existing negative part without nesting Ands.
Formula conjoin(Formula lhs, Formula extra);

struct Weight {
    bool   hard = true;
    double soft = 0.0;

    static Weight alpha() { return {true, 0.0}; }
    static Weight of(double w) { return {false, w}; }

    bool operator==(const Weight&) const = default;
};

struct WeightedRule {
    Weight weight;
    Rule   rule;

    bool operator==(const WeightedRule&) const = default;
};

/// exp(hardCount·α + softSum). Zero is a separate bottom element.
class SymbolicWeight {
public:
    SymbolicWeight() = default;
    SymbolicWeight(std::uint32_t hardCount, double softSum) : nonzero_(true), hard_(hardCount), soft_(softSum) {}

    static SymbolicWeight zero() { return {}; }

    bool          is_zero() const noexcept { return !nonzero_; }
    std::uint32_t hard_count() const noexcept { return hard_; }
    double        soft_sum() const noexcept { return soft_; }

    std::string str() const;

    friend std::partial_ordering compare_weights(const SymbolicWeight& x, const SymbolicWeight& y) noexcept;
    friend std::partial_ordering operator<=>(const SymbolicWeight& x, const SymbolicWeight& y) noexcept {
        return compare_weights(x, y);
    }
    friend bool operator==(const SymbolicWeight& x, const SymbolicWeight& y) noexcept {
        return compare_weights(x, y) == 0;
    }

private:
    bool          nonzero_ = false;
    std::uint32_t hard_    = 0;
    double        soft_    = 0.0;
};

/// Classical satisfaction. Throws SignatureError for atoms outside the universe of `I`.
bool satisfies(const Interpretation& I, const Formula& f);
bool satisfies(const Interpretation& I, const Rule& r);
bool body_holds(const Interpretation& I, const Rule& r);

/// True iff every atom occurrence lies in the scope of at least one negation.
template <class A>
bool is_negative(const BasicFormula<A>& f) {
    switch (f.op) {
        case Connective::True:
        case Connective::False: return true;
        case Connective::Atom : return false;
        case Connective::Not  : return true;
        default:
            for (const auto& g : f.args) {
                if (!is_negative(g)) { return false; }
            }
            return true;
    }
}

/// Collects every atom of `f` (with repetitions removed, in first-seen order).
void collect_atoms(const Formula& f, std::vector<AtomId>& out);
std::vector<AtomId> rule_atoms(const Rule& r);

std::string to_string(const Formula& f, const AtomTable& table);

double log_sum_exp(std::span<const double> xs);

} // namespace lpmln
