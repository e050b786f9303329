#include <lpmln/infer.hpp>

#include <algorithm>
#include <cmath>

namespace lpmln {

double Distribution::prob(const Interpretation& I) const {
    auto it = std::lower_bound(entries.begin(), entries.end(), I,
                               [](const DistEntry& e, const Interpretation& x) { return bitmask_order(e.I, x) < 0; });
    return it != entries.end() && it->I == I ? it->prob : 0.0;
}

std::map<std::vector<std::string>, double> Distribution::by_name() const {
    std::map<std::vector<std::string>, double> out;
    for (const auto& e : entries) {
        std::vector<std::string> names;
        for (auto a : e.I.atoms()) { names.push_back(atoms.name(a)); }
        std::sort(names.begin(), names.end());
        out[names] += e.prob;
    }
    return out;
}

std::vector<std::size_t> satisfied_rules(const GroundProgram& g, const Interpretation& I) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i != g.rules.size(); ++i) {
        if (satisfies(I, g.rules[i].rule)) { out.push_back(i); }
    }
    return out;
}

std::vector<Interpretation> soft_stable_set(const GroundProgram& g, const Limits& limits) {
    SearchOptions opts;
    opts.all_tiers = true;
    opts.limits    = limits;
    std::vector<Interpretation> out;
    for (auto& m : search_models(g, opts)) { out.push_back(std::move(m.I)); }
    return out;
}

namespace {
SymbolicWeight weight_of(const GroundProgram& g, const std::vector<std::size_t>& satisfied) {
    std::uint32_t hard = 0;
    double        soft = 0.0;
    for (auto i : satisfied) {
        if (g.rules[i].weight.hard) { ++hard; }
        else { soft += g.rules[i].weight.soft; }
    }
    return {hard, soft};
}

std::vector<Rule> rules_at(const GroundProgram& g, const std::vector<std::size_t>& idx) {
    std::vector<Rule> out;
    for (auto i : idx) { out.push_back(g.rules[i].rule); }
    return out;
}

Distribution normalize(const AtomTable& atoms, std::vector<FoundModel> models, std::uint32_t numHard) {
    Distribution d;
    d.atoms = atoms;
    std::vector<double> softs;
    for (const auto& m : models) { softs.push_back(m.soft_sum); }
    d.log_mass = log_sum_exp(softs);
    if (!models.empty()) { d.max_tier = numHard - models.front().hard_violations; }
    for (auto& m : models) {
        double p = std::exp(m.soft_sum - d.log_mass);
        d.entries.push_back({std::move(m.I), SymbolicWeight(d.max_tier, m.soft_sum), p});
    }
    return d;
}
} // namespace

SymbolicWeight unnormalized_weight(const GroundProgram& g, const Interpretation& I, const Limits& limits) {
    auto sat   = satisfied_rules(g, I);
    auto rules = rules_at(g, sat);
    if (!is_stable_model(rules, I, limits.max_subset)) { return SymbolicWeight::zero(); }
    return weight_of(g, sat);
}

Distribution distribution(const GroundProgram& g, const Limits& limits) {
    SearchOptions opts;
    opts.limits = limits;
    return normalize(g.atoms, search_models(g, opts), static_cast<std::uint32_t>(g.num_hard()));
}

Distribution soft_only_distribution(const GroundProgram& g, const Limits& limits) {
    SearchOptions opts;
    opts.limits         = limits;
    opts.max_violations = 0;
    auto models         = search_models(g, opts);
    if (models.empty()) {
        throw Error(Errc::NoHardConsistentModel, "no stable model of the soft rules satisfies every hard rule");
    }
    return normalize(g.atoms, std::move(models), static_cast<std::uint32_t>(g.num_hard()));
}

std::vector<TableRow> full_table(const GroundProgram& g, const Limits& limits) {
    std::size_t n = g.atoms.size();
    if (n > limits.max_list_all) {
        throw Error(Errc::UniverseExplosion, "--list-all needs at most " + std::to_string(limits.max_list_all) +
                                                 " atoms, the program has " + std::to_string(n));
    }
    std::vector<TableRow> rows;
    for (std::uint64_t mask = 0; mask != (std::uint64_t{1} << n); ++mask) {
        TableRow row;
        row.I = Interpretation(n);
        for (std::size_t a = 0; a != n; ++a) {
            if ((mask >> a) & 1u) { row.I.insert(static_cast<AtomId>(a)); }
        }
        row.satisfied = satisfied_rules(g, row.I);
        auto rules    = rules_at(g, row.satisfied);
        row.weight    = is_stable_model(rules, row.I, limits.max_subset) ? weight_of(g, row.satisfied)
                                                                         : SymbolicWeight::zero();
        rows.push_back(std::move(row));
    }
    std::uint32_t tier = 0;
    bool          any  = false;
    for (const auto& r : rows) {
        if (!r.weight.is_zero()) {
            tier = any ? std::max(tier, r.weight.hard_count()) : r.weight.hard_count();
            any  = true;
        }
    }
    std::vector<double> softs;
    for (const auto& r : rows) {
        if (!r.weight.is_zero() && r.weight.hard_count() == tier) { softs.push_back(r.weight.soft_sum()); }
    }
    double mass = log_sum_exp(softs);
    for (auto& r : rows) {
        if (!r.weight.is_zero() && r.weight.hard_count() == tier) { r.prob = std::exp(r.weight.soft_sum() - mass); }
    }
    return rows;
}

double prob_query(const Distribution& d, const Formula& query) {
    double p = 0.0;
    for (const auto& e : d.entries) {
        if (satisfies(e.I, query)) { p += e.prob; }
    }
    return std::min(p, 1.0);
}

double cond_prob(const Distribution& d, const Formula& query, const Formula& given) {
    double pg = prob_query(d, given);
    if (pg <= 0.0) { throw Error(Errc::ConditionHasZeroProbability, "the condition has probability 0"); }
    return prob_query(d, Formula::conj({query, given})) / pg;
}

GroundProgram mln_as_constraints(const MlnProgram& L) {
    std::vector<WeightedRule> rules;
    for (const auto& wf : L.formulas) {
        Rule r;
        r.neg = Formula::negate(wf.formula);
        rules.push_back({wf.weight, std::move(r)});
    }
    auto g      = make_ground_program(L.atoms, std::move(rules));
    g.signature = L.signature;
    return g;
}

Distribution mln_distribution(const MlnProgram& L, const Limits& limits) {
    auto          g = mln_as_constraints(L);
    SearchOptions opts;
    opts.semantics = Semantics::Classical;
    opts.limits    = limits;
    return normalize(g.atoms, search_models(g, opts), static_cast<std::uint32_t>(g.num_hard()));
}

} // namespace lpmln
