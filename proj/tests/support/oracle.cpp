#include "oracle.hpp"

#include <algorithm>
#include <cmath>

namespace oracle {
using namespace lpmln;

namespace {
bool in(Mask I, AtomId a) { return (I >> a) & 1u; }

bool body(const Rule& r, Mask I) {
    return std::all_of(r.pos.begin(), r.pos.end(), [&](AtomId a) { return in(I, a); }) && eval(r.neg, I);
}

bool head(const Rule& r, Mask I) {
    return std::any_of(r.head.begin(), r.head.end(), [&](AtomId a) { return in(I, a); });
}

// Π^I as (head, pos) pairs.
struct PosRule {
    std::vector<AtomId> head, pos;
};

bool model_of(const std::vector<PosRule>& rs, Mask J) {
    for (const auto& r : rs) {
        bool b = std::all_of(r.pos.begin(), r.pos.end(), [&](AtomId a) { return in(J, a); });
        bool h = std::any_of(r.head.begin(), r.head.end(), [&](AtomId a) { return in(J, a); });
        if (b && !h) { return false; }
    }
    return true;
}

// (hard count, soft sum) of Π_I if I ∈ SM[Π].
std::optional<std::pair<unsigned, double>> weight(const GroundProgram& g, Mask I) {
    std::vector<Rule> sat;
    unsigned          hard = 0;
    double            soft = 0.0;
    for (const auto& wr : g.rules) {
        if (!rule_holds(wr.rule, I)) { continue; }
        sat.push_back(wr.rule);
        if (wr.weight.hard) { ++hard; }
        else { soft += wr.weight.soft; }
    }
    if (!is_stable(sat, g.atoms.size(), I)) { return std::nullopt; }
    return std::make_pair(hard, soft);
}

Probs normalize(const std::vector<std::pair<std::vector<std::string>, double>>& logw) {
    Probs out;
    if (logw.empty()) { return out; }
    double top = logw.front().second;
    for (const auto& [k, w] : logw) { top = std::max(top, w); }
    double z = 0.0;
    for (const auto& [k, w] : logw) { z += std::exp(w - top); }
    for (const auto& [k, w] : logw) { out[k] += std::exp(w - top) / z; }
    return out;
}
} // namespace

bool eval(const Formula& f, Mask I) {
    switch (f.op) {
        case Connective::True   : return true;
        case Connective::False  : return false;
        case Connective::Atom   : return in(I, f.atom);
        case Connective::Not    : return !eval(f.args[0], I);
        case Connective::And    : return std::all_of(f.args.begin(), f.args.end(), [&](const Formula& g) { return eval(g, I); });
        case Connective::Or     : return std::any_of(f.args.begin(), f.args.end(), [&](const Formula& g) { return eval(g, I); });
        case Connective::Implies: return !eval(f.args[0], I) || eval(f.args[1], I);
    }
    return false;
}

bool rule_holds(const Rule& r, Mask I) { return !body(r, I) || head(r, I); }

bool is_stable(const std::vector<Rule>& rules, std::size_t, Mask I) {
    std::vector<PosRule> red;
    for (const auto& r : rules) {
        if (eval(r.neg, I)) { red.push_back({r.head, r.pos}); }
    }
    if (!model_of(red, I)) { return false; }
    if (I == 0) { return true; }
    for (Mask J = (I - 1) & I;; J = (J - 1) & I) {
        if (model_of(red, J)) { return false; }
        if (J == 0) { break; }
    }
    return true;
}

std::vector<Mask> stable_models(const std::vector<Rule>& rules, std::size_t n) {
    std::vector<Mask> out;
    for (Mask I = 0; I < (Mask{1} << n); ++I) {
        if (is_stable(rules, n, I)) { out.push_back(I); }
    }
    return out;
}

std::vector<std::string> names(const AtomTable& atoms, Mask I) {
    std::vector<std::string> out;
    for (AtomId a = 0; a != atoms.size(); ++a) {
        if (in(I, a)) { out.push_back(atoms.name(a)); }
    }
    std::sort(out.begin(), out.end());
    return out;
}

Mask mask_of(const Interpretation& I) {
    Mask m = 0;
    for (auto a : I.atoms()) { m |= Mask{1} << a; }
    return m;
}

Probs distribution(const GroundProgram& g) {
    std::size_t                                                 n = g.atoms.size();
    std::vector<std::pair<Mask, std::pair<unsigned, double>>>   sm;
    unsigned                                                    tier = 0;
    for (Mask I = 0; I < (Mask{1} << n); ++I) {
        if (auto w = weight(g, I)) {
            sm.emplace_back(I, *w);
            tier = std::max(tier, w->first);
        }
    }
    std::vector<std::pair<std::vector<std::string>, double>> logw;
    for (const auto& [I, w] : sm) {
        if (w.first == tier) { logw.emplace_back(names(g.atoms, I), w.second); }
    }
    return normalize(logw);
}

Probs soft_only(const GroundProgram& g) {
    std::size_t                                              n = g.atoms.size();
    std::vector<std::pair<std::vector<std::string>, double>> logw;
    for (Mask I = 0; I < (Mask{1} << n); ++I) {
        auto w = weight(g, I);
        if (w && w->first == g.num_hard()) { logw.emplace_back(names(g.atoms, I), w->second); }
    }
    return normalize(logw);
}

Probs mln(const MlnProgram& L) {
    std::size_t                                                n = L.atoms.size();
    std::vector<std::tuple<Mask, unsigned, double>>            all;
    unsigned                                                   tier = 0;
    for (Mask I = 0; I < (Mask{1} << n); ++I) {
        unsigned hard = 0;
        double   soft = 0.0;
        for (const auto& f : L.formulas) {
            if (!eval(f.formula, I)) { continue; }
            if (f.weight.hard) { ++hard; }
            else { soft += f.weight.soft; }
        }
        all.emplace_back(I, hard, soft);
        tier = std::max(tier, hard);
    }
    std::vector<std::pair<std::vector<std::string>, double>> logw;
    for (const auto& [I, h, s] : all) {
        if (h == tier) { logw.emplace_back(names(L.atoms, I), s); }
    }
    return normalize(logw);
}

Probs problog(const ProbLogProgram& p) {
    Probs       out;
    std::size_t k = p.facts.size();
    for (Mask c = 0; c < (Mask{1} << k); ++c) {
        double            pr    = 1.0;
        std::vector<Rule> rules = p.rules;
        for (std::size_t i = 0; i != k; ++i) {
            bool on = in(c, static_cast<AtomId>(i));
            pr *= on ? p.facts[i].prob : 1.0 - p.facts[i].prob;
            if (on) { rules.push_back(Rule{{p.facts[i].atom}, {}, Formula::truth()}); }
        }
        if (pr == 0.0) { continue; }
        auto sm = stable_models(rules, p.atoms.size());
        if (sm.size() != 1) { throw std::runtime_error("total choice without a unique stable model"); }
        out[names(p.atoms, sm.front())] += pr;
    }
    return out;
}

std::vector<std::vector<AtomId>> loops(const std::vector<Rule>& rules, std::size_t n) {
    auto edge = [&](AtomId from, AtomId to) {
        for (const auto& r : rules) {
            if (std::find(r.head.begin(), r.head.end(), from) != r.head.end() &&
                std::find(r.pos.begin(), r.pos.end(), to) != r.pos.end()) {
                return true;
            }
        }
        return false;
    };
    std::vector<std::vector<AtomId>> out;
    for (Mask L = 1; L < (Mask{1} << n); ++L) {
        std::vector<AtomId> xs;
        for (AtomId a = 0; a != n; ++a) {
            if (in(L, a)) { xs.push_back(a); }
        }
        bool connected = true;
        for (auto s : xs) {
            // atoms reachable from s inside L by paths of length > 0
            Mask seen = 0, frontier = Mask{1} << s;
            while (frontier) {
                Mask next = 0;
                for (auto u : xs) {
                    if (!in(frontier, u)) { continue; }
                    for (auto v : xs) {
                        if (!in(seen, v) && edge(u, v)) { next |= Mask{1} << v; }
                    }
                }
                seen |= next;
                frontier = next;
            }
            if (xs.size() > 1 && (seen & L) != L) { connected = false; }
        }
        if (connected) { out.push_back(xs); }
    }
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
        return x.size() != y.size() ? x.size() < y.size() : x < y;
    });
    return out;
}

double max_diff(const Probs& x, const Probs& y) {
    double d = 0.0;
    for (const auto& [k, v] : x) {
        auto it = y.find(k);
        d       = std::max(d, std::abs(v - (it == y.end() ? 0.0 : it->second)));
    }
    for (const auto& [k, v] : y) {
        if (!x.count(k)) { d = std::max(d, std::abs(v)); }
    }
    return d;
}
} // namespace oracle
