#include <lpmln/core.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <sstream>

namespace lpmln {

/////////////////////////////////////////////////////////////////////////////////////////
// Errors
/////////////////////////////////////////////////////////////////////////////////////////
std::string SourceSpan::str() const {
    std::ostringstream os;
    os << (file.empty() ? "<input>" : file) << ':' << line << ':' << column;
    return os.str();
}

const char* errc_name(Errc code) {
    switch (code) {
        case Errc::ParseError                 : return "ParseError";
        case Errc::ValidationError            : return "ValidationError";
        case Errc::SignatureError             : return "SignatureError";
        case Errc::EmptyDomain                : return "EmptyDomain";
        case Errc::GroundingExplosion         : return "GroundingExplosion";
        case Errc::UniverseExplosion          : return "UniverseExplosion";
        case Errc::SubsetExplosion            : return "SubsetExplosion";
        case Errc::LoopExplosion              : return "LoopExplosion";
        case Errc::NoHardConsistentModel      : return "NoHardConsistentModel";
        case Errc::ConditionHasZeroProbability: return "ConditionHasZeroProbability";
        case Errc::NoStableModel              : return "NoStableModel";
        case Errc::NotTight                   : return "NotTight";
        case Errc::NotWellDefined             : return "NotWellDefined";
        case Errc::ZeroProbabilityDeclared    : return "ZeroProbabilityDeclared";
        case Errc::EmptySmDoublePrime         : return "EmptySmDoublePrime";
        case Errc::Inconsistent               : return "Inconsistent";
        case Errc::AllZeroMeasure             : return "AllZeroMeasure";
        case Errc::DefaultProbabilityUndefined: return "DefaultProbabilityUndefined";
        case Errc::PropertyViolation          : return "PropertyViolation";
    }
    return "Error";
}

bool is_input_error(Errc code) {
    return code == Errc::ParseError || code == Errc::ValidationError || code == Errc::SignatureError ||
           code == Errc::EmptyDomain;
}

namespace {
std::string decorate(Errc code, const std::string& message, const std::optional<SourceSpan>& span) {
    std::string out;
    if (span) { out = span->str() + ": "; }
    out += errc_name(code);
    out += ": ";
    out += message;
    return out;
}
} // namespace

Error::Error(Errc code, const std::string& message, std::optional<SourceSpan> span)
    : std::runtime_error(decorate(code, message, span))
    , code_(code)
    , span_(std::move(span))
    , message_(message) {}

ParseError::ParseError(const std::string& message, SourceSpan span, std::vector<std::string> expected)
    : Error(Errc::ParseError, message, std::move(span))
    , expected_(std::move(expected)) {}

/////////////////////////////////////////////////////////////////////////////////////////
// Atoms
/////////////////////////////////////////////////////////////////////////////////////////
std::string GroundAtom::str() const {
    std::string out = symbol;
    if (!args.empty()) {
        out += '(';
        for (std::size_t i = 0; i != args.size(); ++i) {
            if (i) { out += ','; }
            out += args[i];
        }
        out += ')';
    }
    if (value) {
        out += '=';
        out += *value;
    }
    return out;
}

AtomId AtomTable::intern(const GroundAtom& atom) {
    if (auto it = index_.find(atom); it != index_.end()) { return it->second; }
    auto id = static_cast<AtomId>(atoms_.size());
    atoms_.push_back(atom);
    index_.emplace(atom, id);
    return id;
}

std::optional<AtomId> AtomTable::find(const GroundAtom& atom) const {
    if (auto it = index_.find(atom); it != index_.end()) { return it->second; }
    return std::nullopt;
}

/////////////////////////////////////////////////////////////////////////////////////////
// Interpretation
/////////////////////////////////////////////////////////////////////////////////////////
Interpretation::Interpretation(std::size_t universe) : size_(universe), words_((universe + 63) / 64, 0) {}

Interpretation::Interpretation(std::size_t universe, std::span<const AtomId> trueAtoms) : Interpretation(universe) {
    for (auto a : trueAtoms) { insert(a); }
}

std::size_t Interpretation::count() const noexcept {
    std::size_t n = 0;
    for (auto w : words_) { n += static_cast<std::size_t>(std::popcount(w)); }
    return n;
}

bool Interpretation::subset_of(const Interpretation& other) const noexcept {
    for (std::size_t i = 0; i != words_.size(); ++i) {
        std::uint64_t o = i < other.words_.size() ? other.words_[i] : 0;
        if (words_[i] & ~o) { return false; }
    }
    return true;
}

std::vector<AtomId> Interpretation::atoms() const {
    std::vector<AtomId> out;
    for (std::size_t i = 0; i != words_.size(); ++i) {
        for (auto w = words_[i]; w; w &= w - 1) {
            out.push_back(static_cast<AtomId>(i * 64 + static_cast<std::size_t>(std::countr_zero(w))));
        }
    }
    return out;
}

std::strong_ordering bitmask_order(const Interpretation& a, const Interpretation& b) noexcept {
    auto n = std::max(a.words_.size(), b.words_.size());
    for (std::size_t i = n; i-- > 0;) {
        std::uint64_t x = i < a.words_.size() ? a.words_[i] : 0;
        std::uint64_t y = i < b.words_.size() ? b.words_[i] : 0;
        if (x != y) { return x <=> y; }
    }
    return a.size_ <=> b.size_;
}

std::string Interpretation::str(const AtomTable& table) const {
    std::vector<std::string> names;
    for (auto a : atoms()) { names.push_back(table.name(a)); }
    std::sort(names.begin(), names.end());
    std::string out = "{";
    for (std::size_t i = 0; i != names.size(); ++i) {
        if (i) { out += ", "; }
        out += names[i];
    }
    return out + "}";
}

/////////////////////////////////////////////////////////////////////////////////////////
// Formulas and rules
/////////////////////////////////////////////////////////////////////////////////////////
bool satisfies(const Interpretation& I, const Formula& f) {
    switch (f.op) {
        case Connective::True : return true;
        case Connective::False: return false;
        case Connective::Atom:
            if (f.atom >= I.universe()) {
                throw Error(Errc::SignatureError, "atom #" + std::to_string(f.atom) + " is outside the signature");
            }
            return I.contains(f.atom);
        case Connective::Not: return !satisfies(I, f.args.front());
        case Connective::And:
            return std::all_of(f.args.begin(), f.args.end(), [&](const Formula& g) { return satisfies(I, g); });
        case Connective::Or:
            return std::any_of(f.args.begin(), f.args.end(), [&](const Formula& g) { return satisfies(I, g); });
        case Connective::Implies: return !satisfies(I, f.args[0]) || satisfies(I, f.args[1]);
    }
    return false;
}

bool body_holds(const Interpretation& I, const Rule& r) {
    for (auto b : r.pos) {
        if (b >= I.universe()) { throw Error(Errc::SignatureError, "atom outside the signature"); }
        if (!I.contains(b)) { return false; }
    }
    return satisfies(I, r.neg);
}

bool satisfies(const Interpretation& I, const Rule& r) {
    if (!body_holds(I, r)) { return true; }
    return std::any_of(r.head.begin(), r.head.end(), [&](AtomId a) { return I.contains(a); });
}

Formula Rule::body_formula() const {
    std::vector<Formula> parts;
    for (auto b : pos) { parts.push_back(Formula::make_atom(b)); }
    if (neg.op == Connective::And) {
        parts.insert(parts.end(), neg.args.begin(), neg.args.end());
    }
    else if (!neg.is_true()) {
        parts.push_back(neg);
    }
    if (parts.empty()) { return Formula::truth(); }
    if (parts.size() == 1) { return parts.front(); }
    return Formula::conj(std::move(parts));
}

Formula Rule::as_formula() const {
    Formula h;
    if (head.empty()) { h = Formula::falsity(); }
    else if (head.size() == 1) { h = Formula::make_atom(head.front()); }
    else {
        std::vector<Formula> ds;
        for (auto a : head) { ds.push_back(Formula::make_atom(a)); }
        h = Formula::disj(std::move(ds));
    }
    return Formula::implies(body_formula(), std::move(h));
}

Formula conjoin(Formula lhs, Formula extra) {
    if (lhs.is_true()) { return extra; }
    if (extra.is_true()) { return lhs; }
    if (lhs.op == Connective::And) {
        lhs.args.push_back(std::move(extra));
        return lhs;
    }
    return Formula::conj({std::move(lhs), std::move(extra)});
}

Rule choice_rule(AtomId a, std::vector<AtomId> pos, Formula neg) {
    Rule r;
    r.head = {a};
    r.pos  = std::move(pos);
    r.neg  = conjoin(std::move(neg), Formula::negate(Formula::negate(Formula::make_atom(a))));
    return r;
}

void collect_atoms(const Formula& f, std::vector<AtomId>& out) {
    if (f.op == Connective::Atom) {
        if (std::find(out.begin(), out.end(), f.atom) == out.end()) { out.push_back(f.atom); }
        return;
    }
    for (const auto& g : f.args) { collect_atoms(g, out); }
}

std::vector<AtomId> rule_atoms(const Rule& r) {
    std::vector<AtomId> out;
    auto add = [&](AtomId a) {
        if (std::find(out.begin(), out.end(), a) == out.end()) { out.push_back(a); }
    };
    for (auto a : r.head) { add(a); }
    for (auto a : r.pos) { add(a); }
    collect_atoms(r.neg, out);
    return out;
}

namespace {
void print_formula(std::ostringstream& os, const Formula& f, const AtomTable& table, int parentPrec) {
    // precedence: implies 1, or 2, and 3, not 4
    switch (f.op) {
        case Connective::True : os << "true"; return;
        case Connective::False: os << "false"; return;
        case Connective::Atom : os << table.name(f.atom); return;
        case Connective::Not:
            os << "not ";
            print_formula(os, f.args.front(), table, 4);
            return;
        default: break;
    }
    int         prec = f.op == Connective::Implies ? 1 : f.op == Connective::Or ? 2 : 3;
    const char* sep  = f.op == Connective::Implies ? " -> " : f.op == Connective::Or ? " | " : " & ";
    if (f.args.empty()) {
        os << (f.op == Connective::Or ? "false" : "true");
        return;
    }
    bool paren = prec <= parentPrec || (f.args.size() == 1 && parentPrec > 0);
    if (paren) { os << '('; }
    for (std::size_t i = 0; i != f.args.size(); ++i) {
        if (i) { os << sep; }
        print_formula(os, f.args[i], table, prec);
    }
    if (paren) { os << ')'; }
}
} // namespace

std::string to_string(const Formula& f, const AtomTable& table) {
    std::ostringstream os;
    print_formula(os, f, table, 0);
    return os.str();
}

/////////////////////////////////////////////////////////////////////////////////////////
// Weights
/////////////////////////////////////////////////////////////////////////////////////////
std::partial_ordering compare_weights(const SymbolicWeight& x, const SymbolicWeight& y) noexcept {
    if (x.is_zero() || y.is_zero()) {
        return static_cast<int>(!x.is_zero()) <=> static_cast<int>(!y.is_zero());
    }
    if (x.hard_ != y.hard_) { return x.hard_ <=> y.hard_; }
    return x.soft_ <=> y.soft_;
}

std::string SymbolicWeight::str() const {
    if (is_zero()) { return "0"; }
    std::ostringstream os;
    os << "e^(" << hard_ << "a";
    if (soft_ != 0.0) { os << (soft_ < 0 ? "-" : "+") << std::abs(soft_); }
    os << ')';
    return os.str();
}

double log_sum_exp(std::span<const double> xs) {
    if (xs.empty()) { return -std::numeric_limits<double>::infinity(); }
    double m = *std::max_element(xs.begin(), xs.end());
    double s = 0.0;
    for (auto x : xs) { s += std::exp(x - m); }
    return m + std::log(s);
}

} // namespace lpmln
