#include <lpmln/stable.hpp>

#include <algorithm>
#include <atomic>
#include <bit>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>

namespace lpmln {

namespace {
bool contains_all(const Interpretation& I, const std::vector<AtomId>& atoms) {
    return std::all_of(atoms.begin(), atoms.end(), [&](AtomId a) { return I.contains(a); });
}

struct Restricted {
    std::vector<AtomId> head; // head ∩ I
    std::vector<AtomId> body;
};

// Minimality of I for rules already restricted to I (bodies ⊆ I, heads ⊆ I, nonempty).
bool minimal_restricted(const Interpretation& I, const std::vector<Restricted>& rules, std::size_t maxSubset) {
    bool disjunctive = std::any_of(rules.begin(), rules.end(), [](const Restricted& r) { return r.head.size() > 1; });
    if (!disjunctive) {
        Interpretation lm(I.universe());
        for (bool changed = true; changed;) {
            changed = false;
            for (const auto& r : rules) {
                if (!lm.contains(r.head.front()) && contains_all(lm, r.body)) {
                    lm.insert(r.head.front());
                    changed = true;
                }
            }
        }
        return lm == I;
    }
    auto atoms = I.atoms();
    if (atoms.size() > maxSubset) {
        throw Error(Errc::SubsetExplosion, "minimality check over " + std::to_string(atoms.size()) +
                                               " atoms exceeds the cap of " + std::to_string(maxSubset));
    }
    std::uint64_t full = atoms.size() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << atoms.size()) - 1;
    Interpretation J(I.universe());
    for (std::uint64_t mask = 0; mask != full; ++mask) {
        for (std::size_t i = 0; i != atoms.size(); ++i) { J.assign(atoms[i], (mask >> i) & 1u); }
        bool model = std::all_of(rules.begin(), rules.end(), [&](const Restricted& r) {
            return !contains_all(J, r.body) ||
                   std::any_of(r.head.begin(), r.head.end(), [&](AtomId a) { return J.contains(a); });
        });
        if (model) { return false; }
    }
    return true;
}

// Restriction to I of the reduct of the rules satisfied by I. Returns nullopt if
// some rule of `rules` is violated and `requireAll` is set.
template <class RuleRange, class Get>
std::optional<std::vector<Restricted>> restrict_reduct(const Interpretation& I, const RuleRange& rules, Get get,
                                                       bool requireAll) {
    std::vector<Restricted> out;
    for (const auto& item : rules) {
        const Rule& r = get(item);
        if (!contains_all(I, r.pos)) { continue; }
        Restricted rr;
        for (auto a : r.head) {
            if (I.contains(a)) { rr.head.push_back(a); }
        }
        if (!satisfies(I, r.neg)) { continue; }
        if (rr.head.empty()) {
            if (requireAll) { return std::nullopt; }
            continue; // violated, hence not in Π_I
        }
        rr.body = r.pos;
        out.push_back(std::move(rr));
    }
    return out;
}
} // namespace

std::vector<Rule> reduct(std::span<const Rule> rules, const Interpretation& I) {
    std::vector<Rule> out;
    for (const auto& r : rules) {
        if (satisfies(I, r.neg)) { out.push_back({r.head, r.pos, Formula::truth()}); }
    }
    return out;
}

bool is_minimal_model(const Interpretation& I, std::span<const Rule> positive, std::size_t maxSubset) {
    auto rr = restrict_reduct(I, positive, [](const Rule& r) -> const Rule& { return r; }, true);
    return rr && minimal_restricted(I, *rr, maxSubset);
}

bool is_stable_model(std::span<const Rule> rules, const Interpretation& I, std::size_t maxSubset) {
    for (const auto& r : rules) {
        if (!satisfies(I, r)) { return false; }
    }
    auto red = reduct(rules, I);
    return is_minimal_model(I, red, maxSubset);
}

std::vector<Interpretation> enumerate_stable_models(std::span<const Rule> rules, std::size_t numAtoms,
                                                    const Limits& limits) {
    GroundProgram g;
    for (std::size_t i = 0; i != numAtoms; ++i) { g.atoms.intern({"#" + std::to_string(i), {}, {}}); }
    for (const auto& r : rules) { g.rules.push_back({Weight::alpha(), r}); }
    SearchOptions opts;
    opts.all_hard       = true;
    opts.max_violations = 0;
    opts.limits         = limits;
    std::vector<Interpretation> out;
    for (auto& m : search_models(g, opts)) { out.push_back(std::move(m.I)); }
    return out;
}

std::vector<Interpretation> enumerate_stable_models(const GroundProgram& g, const Limits& limits) {
    SearchOptions opts;
    opts.all_hard       = true;
    opts.max_violations = 0;
    opts.limits         = limits;
    std::vector<Interpretation> out;
    for (auto& m : search_models(g, opts)) { out.push_back(std::move(m.I)); }
    return out;
}

/////////////////////////////////////////////////////////////////////////////////////////
// Graphs and loops
/////////////////////////////////////////////////////////////////////////////////////////
bool PosDepGraph::has_edge(AtomId from, AtomId to) const {
    return std::find(succ[from].begin(), succ[from].end(), to) != succ[from].end();
}

PosDepGraph positive_dependency_graph(std::span<const Rule> rules, std::size_t numAtoms) {
    PosDepGraph g;
    g.succ.resize(numAtoms);
    for (const auto& r : rules) {
        for (auto h : r.head) {
            for (auto b : r.pos) {
                if (!g.has_edge(h, b)) { g.succ[h].push_back(b); }
            }
        }
    }
    for (auto& s : g.succ) { std::sort(s.begin(), s.end()); }
    return g;
}

std::vector<std::vector<AtomId>> strongly_connected_components(const std::vector<std::vector<AtomId>>& succ) {
    // iterative Tarjan
    const auto                       n = static_cast<AtomId>(succ.size());
    std::vector<int>                 index(n, -1), low(n, 0);
    std::vector<bool>                onStack(n, false);
    std::vector<AtomId>              stack;
    std::vector<std::vector<AtomId>> out;
    int                              counter = 0;
    for (AtomId root = 0; root != n; ++root) {
        if (index[root] >= 0) { continue; }
        std::vector<std::pair<AtomId, std::size_t>> call{{root, 0}};
        index[root] = low[root] = counter++;
        stack.push_back(root);
        onStack[root] = true;
        while (!call.empty()) {
            auto& [v, next] = call.back();
            if (next < succ[v].size()) {
                AtomId w = succ[v][next++];
                if (index[w] < 0) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    onStack[w] = true;
                    call.emplace_back(w, 0);
                }
                else if (onStack[w]) { low[v] = std::min(low[v], index[w]); }
                continue;
            }
            if (low[v] == index[v]) {
                std::vector<AtomId> comp;
                AtomId              w = 0;
                do {
                    w = stack.back();
                    stack.pop_back();
                    onStack[w] = false;
                    comp.push_back(w);
                } while (w != v);
                std::sort(comp.begin(), comp.end());
                out.push_back(std::move(comp));
            }
            AtomId done = v;
            call.pop_back();
            if (!call.empty()) { low[call.back().first] = std::min(low[call.back().first], low[done]); }
        }
    }
    return out;
}

bool is_tight(std::span<const Rule> rules, std::size_t numAtoms) {
    auto g = positive_dependency_graph(rules, numAtoms);
    for (const auto& comp : strongly_connected_components(g.succ)) {
        if (comp.size() > 1 || g.has_edge(comp.front(), comp.front())) { return false; }
    }
    return true;
}

namespace {
bool strongly_connected(const PosDepGraph& g, const std::vector<AtomId>& set) {
    if (set.size() == 1) { return true; }
    auto reach = [&](bool forward) {
        std::vector<AtomId> seen{set.front()}, todo{set.front()};
        while (!todo.empty()) {
            AtomId v = todo.back();
            todo.pop_back();
            for (AtomId w : set) {
                bool edge = forward ? g.has_edge(v, w) : g.has_edge(w, v);
                if (edge && std::find(seen.begin(), seen.end(), w) == seen.end()) {
                    seen.push_back(w);
                    todo.push_back(w);
                }
            }
        }
        return seen.size() == set.size();
    };
    return reach(true) && reach(false);
}

void add_subset_loops(const PosDepGraph& g, const std::vector<AtomId>& atoms, std::vector<Loop>& out,
                      const Limits& limits) {
    std::uint64_t total = std::uint64_t{1} << atoms.size();
    for (std::uint64_t mask = 1; mask != total; ++mask) {
        if (std::popcount(mask) == 1) { continue; } // singletons are added separately
        Loop y;
        for (std::size_t i = 0; i != atoms.size(); ++i) {
            if ((mask >> i) & 1u) { y.push_back(atoms[i]); }
        }
        if (strongly_connected(g, y)) {
            out.push_back(std::move(y));
            if (out.size() > limits.max_loops) {
                throw Error(Errc::LoopExplosion, "more than " + std::to_string(limits.max_loops) + " loops");
            }
        }
    }
}
} // namespace

std::vector<Loop> loops(std::span<const Rule> rules, std::size_t numAtoms, const Limits& limits, bool allSubsets) {
    auto              g = positive_dependency_graph(rules, numAtoms);
    std::vector<Loop> out;
    for (std::size_t a = 0; a != numAtoms; ++a) { out.push_back({static_cast<AtomId>(a)}); }
    if (out.size() > limits.max_loops) {
        throw Error(Errc::LoopExplosion, "more than " + std::to_string(limits.max_loops) + " loops");
    }
    if (allSubsets) {
        if (numAtoms > 12) { throw Error(Errc::LoopExplosion, "subset loop enumeration is limited to 12 atoms"); }
        std::vector<AtomId> all(numAtoms);
        for (std::size_t a = 0; a != numAtoms; ++a) { all[a] = static_cast<AtomId>(a); }
        add_subset_loops(g, all, out, limits);
    }
    else {
        for (const auto& comp : strongly_connected_components(g.succ)) {
            if (comp.size() < 2) { continue; }
            if (comp.size() > 24) {
                throw Error(Errc::LoopExplosion,
                            "strongly connected component of " + std::to_string(comp.size()) + " atoms");
            }
            add_subset_loops(g, comp, out, limits);
        }
    }
    std::sort(out.begin(), out.end(), [](const Loop& x, const Loop& y) {
        return x.size() != y.size() ? x.size() < y.size() : x < y;
    });
    return out;
}

namespace {
// B ∧ N ∧ ⋀_{b ∈ head∖excluded} ¬b
Formula support_disjunct(const Rule& r, const std::function<bool(AtomId)>& excluded) {
    Formula f = r.body_formula();
    for (auto b : r.head) {
        if (!excluded(b)) { f = conjoin(std::move(f), Formula::negate(Formula::make_atom(b))); }
    }
    return f;
}

Formula disjunction(std::vector<Formula> parts) {
    if (parts.empty()) { return Formula::falsity(); }
    if (parts.size() == 1) { return std::move(parts.front()); }
    return Formula::disj(std::move(parts));
}

Formula conjunction_of(const std::vector<AtomId>& atoms) {
    if (atoms.size() == 1) { return Formula::make_atom(atoms.front()); }
    std::vector<Formula> parts;
    for (auto a : atoms) { parts.push_back(Formula::make_atom(a)); }
    return Formula::conj(std::move(parts));
}
} // namespace

Formula external_support(std::span<const Rule> rules, const Loop& loop) {
    auto                 inLoop = [&](AtomId a) { return std::find(loop.begin(), loop.end(), a) != loop.end(); };
    std::vector<Formula> parts;
    for (const auto& r : rules) {
        if (std::none_of(r.head.begin(), r.head.end(), inLoop)) { continue; }
        if (std::any_of(r.pos.begin(), r.pos.end(), inLoop)) { continue; }
        parts.push_back(support_disjunct(r, inLoop));
    }
    return disjunction(std::move(parts));
}

Formula loop_formula(std::span<const Rule> rules, const Loop& loop) {
    return Formula::implies(conjunction_of(loop), external_support(rules, loop));
}

std::vector<Formula> completion_formulas(std::span<const Rule> rules, std::size_t numAtoms) {
    std::vector<Formula> out;
    for (std::size_t i = 0; i != numAtoms; ++i) {
        auto                 a = static_cast<AtomId>(i);
        std::vector<Formula> parts;
        for (const auto& r : rules) {
            if (std::find(r.head.begin(), r.head.end(), a) == r.head.end()) { continue; }
            parts.push_back(support_disjunct(r, [a](AtomId b) { return b == a; }));
        }
        out.push_back(Formula::implies(Formula::make_atom(a), disjunction(std::move(parts))));
    }
    return out;
}

/////////////////////////////////////////////////////////////////////////////////////////
// Model search
/////////////////////////////////////////////////////////////////////////////////////////
std::vector<AtomId> candidate_atoms(std::span<const WeightedRule> rules, std::size_t numAtoms, Semantics semantics) {
    std::vector<AtomId> out;
    if (semantics == Semantics::Classical) {
        for (std::size_t a = 0; a != numAtoms; ++a) { out.push_back(static_cast<AtomId>(a)); }
        return out;
    }
    std::vector<bool> possible(numAtoms, false);
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& wr : rules) {
            const auto& r = wr.rule;
            if (!std::all_of(r.pos.begin(), r.pos.end(), [&](AtomId b) { return possible[b]; })) { continue; }
            for (auto h : r.head) {
                if (!possible[h]) { possible[h] = changed = true; }
            }
        }
    }
    for (std::size_t a = 0; a != numAtoms; ++a) {
        if (possible[a]) { out.push_back(static_cast<AtomId>(a)); }
    }
    return out;
}

namespace {
class Search {
public:
    Search(std::span<const WeightedRule> rules, std::size_t numAtoms, const SearchOptions& opts)
        : rules_(rules)
        , numAtoms_(numAtoms)
        , opts_(opts) {
        for (const auto& wr : rules_) { numHard_ += is_hard(wr) ? 1u : 0u; }
        auto cand = candidate_atoms(rules_, numAtoms_, opts_.semantics);
        if (cand.size() > opts_.limits.max_atoms) {
            throw Error(Errc::UniverseExplosion, std::to_string(cand.size()) + " candidate atoms exceed the cap of " +
                                                     std::to_string(opts_.limits.max_atoms) +
                                                     " (see --max-atoms)");
        }
        order_atoms(cand);
        build_items();
    }

    std::vector<FoundModel> run() {
        std::uint32_t bound = opts_.max_violations.value_or(static_cast<std::uint32_t>(numHard_));
        unsigned      jobs  = std::max(1u, opts_.limits.jobs);
        std::size_t   split = 0;
        if (jobs > 1) { split = std::min<std::size_t>(order_.size(), std::bit_width(jobs) + 3); }
        std::size_t tasks = std::size_t{1} << split;

        std::vector<std::vector<FoundModel>> results(tasks);
        std::vector<std::uint32_t>           best(tasks, bound);
        std::atomic<std::size_t>             next{0};
        std::exception_ptr                   failure;
        std::mutex                           failureMutex;
        auto worker = [&] {
            for (std::size_t t; (t = next++) < tasks;) {
                try {
                    Worker w(*this, bound, split, t);
                    w.run();
                    results[t] = std::move(w.models);
                    best[t]    = w.bound;
                }
                catch (...) {
                    std::lock_guard lock(failureMutex);
                    if (!failure) { failure = std::current_exception(); }
                    next = tasks;
                }
            }
        };
        if (jobs == 1) { worker(); }
        else {
            std::vector<std::jthread> pool;
            for (unsigned i = 0; i != std::min<std::size_t>(jobs, tasks); ++i) { pool.emplace_back(worker); }
        }
        if (failure) { std::rethrow_exception(failure); }

        std::uint32_t           tier = *std::min_element(best.begin(), best.end());
        std::vector<FoundModel> out;
        for (auto& part : results) {
            for (auto& m : part) {
                if (opts_.all_tiers || m.hard_violations == tier) { out.push_back(std::move(m)); }
            }
        }
        std::sort(out.begin(), out.end(),
                  [](const FoundModel& x, const FoundModel& y) { return bitmask_order(x.I, y.I) < 0; });
        return out;
    }

private:
    enum class Kind : std::uint8_t { Satisfy, Support };
    struct Item {
        Kind        kind;
        std::size_t index; // rule index or atom
    };

    struct Worker {
        Worker(const Search& s, std::uint32_t b, std::size_t split, std::size_t prefix)
            : s(s)
            , bound(b)
            , split(split)
            , prefix(prefix)
            , cur(s.numAtoms_) {}

        void run() {
            std::uint32_t viol = 0;
            if (!s.eval(s.rootItems_, cur, viol, bound)) { return; }
            dfs(0, viol);
        }

        void dfs(std::size_t p, std::uint32_t viol) {
            if (p == s.order_.size()) {
                leaf(viol);
                return;
            }
            AtomId a = s.order_[p];
            for (int value = 0; value != 2; ++value) {
                if (p < split && static_cast<int>((prefix >> p) & 1u) != value) { continue; }
                cur.assign(a, value != 0);
                std::uint32_t v = viol;
                if (s.eval(s.levelItems_[p], cur, v, bound)) { dfs(p + 1, v); }
            }
            cur.erase(a);
        }

        void leaf(std::uint32_t viol) {
            if (viol > bound) { return; }
            if (s.opts_.semantics == Semantics::Stable) {
                auto rr = restrict_reduct(cur, s.rules_, [](const WeightedRule& w) -> const Rule& { return w.rule; },
                                          false);
                if (!minimal_restricted(cur, *rr, s.opts_.limits.max_subset)) { return; }
            }
            double soft = 0.0;
            if (!s.opts_.all_hard) {
                for (const auto& wr : s.rules_) {
                    if (!wr.weight.hard && satisfies(cur, wr.rule)) { soft += wr.weight.soft; }
                }
            }
            if (!s.opts_.all_tiers && viol < bound) {
                bound = viol;
                models.clear();
            }
            models.push_back({cur, viol, soft});
        }

        const Search&           s;
        std::uint32_t           bound;
        std::size_t             split;
        std::size_t             prefix;
        Interpretation          cur;
        std::vector<FoundModel> models;
    };

    bool is_hard(const WeightedRule& wr) const { return opts_.all_hard || wr.weight.hard; }

    void order_atoms(const std::vector<AtomId>& cand) {
        // bodies before heads, over every body atom
        std::vector<int> local(numAtoms_, -1);
        for (std::size_t i = 0; i != cand.size(); ++i) { local[cand[i]] = static_cast<int>(i); }
        std::vector<std::vector<AtomId>> succ(cand.size());
        for (const auto& wr : rules_) {
            auto atoms = rule_atoms(wr.rule);
            for (auto h : wr.rule.head) {
                if (local[h] < 0) { continue; }
                for (auto b : atoms) {
                    if (b != h && local[b] >= 0) { succ[local[h]].push_back(static_cast<AtomId>(local[b])); }
                }
            }
        }
        for (auto& s : succ) {
            std::sort(s.begin(), s.end());
            s.erase(std::unique(s.begin(), s.end()), s.end());
        }
        for (const auto& comp : strongly_connected_components(succ)) {
            for (auto c : comp) { order_.push_back(cand[c]); }
        }
        position_.assign(numAtoms_, -1);
        for (std::size_t i = 0; i != order_.size(); ++i) { position_[order_[i]] = static_cast<int>(i); }
    }

    int level_of(const std::vector<AtomId>& atoms) const {
        int level = -1;
        for (auto a : atoms) { level = std::max(level, position_[a]); }
        return level;
    }

    void place(int level, Item item) { (level < 0 ? rootItems_ : levelItems_[static_cast<std::size_t>(level)]).push_back(item); }

    void build_items() {
        levelItems_.resize(order_.size());
        for (std::size_t i = 0; i != rules_.size(); ++i) {
            if (!is_hard(rules_[i])) { continue; }
            place(level_of(rule_atoms(rules_[i].rule)), {Kind::Satisfy, i});
        }
        if (opts_.semantics != Semantics::Stable) { return; }
        supporters_.resize(numAtoms_);
        for (std::size_t i = 0; i != rules_.size(); ++i) {
            for (auto h : rules_[i].rule.head) { supporters_[h].push_back(i); }
        }
        for (auto a : order_) {
            std::vector<AtomId> scope{a};
            for (auto i : supporters_[a]) {
                auto atoms = rule_atoms(rules_[i].rule);
                scope.insert(scope.end(), atoms.begin(), atoms.end());
            }
            place(level_of(scope), {Kind::Support, a});
        }
    }

    bool eval(const std::vector<Item>& items, const Interpretation& I, std::uint32_t& viol, std::uint32_t bound) const {
        for (const auto& item : items) {
            if (item.kind == Kind::Satisfy) {
                if (!satisfies(I, rules_[item.index].rule) && ++viol > bound) { return false; }
                continue;
            }
            auto a = static_cast<AtomId>(item.index);
            if (!I.contains(a)) { continue; }
            bool supported = std::any_of(supporters_[a].begin(), supporters_[a].end(), [&](std::size_t i) {
                const auto& r = rules_[i].rule;
                if (!body_holds(I, r)) { return false; }
                return std::none_of(r.head.begin(), r.head.end(), [&](AtomId b) { return b != a && I.contains(b); });
            });
            if (!supported) { return false; }
        }
        return true;
    }

    std::span<const WeightedRule>         rules_;
    std::size_t                           numAtoms_;
    SearchOptions                         opts_;
    std::size_t                           numHard_ = 0;
    std::vector<AtomId>                   order_;
    std::vector<int>                      position_;
    std::vector<Item>                     rootItems_;
    std::vector<std::vector<Item>>        levelItems_;
    std::vector<std::vector<std::size_t>> supporters_;
};
} // namespace

std::vector<FoundModel> search_models(const GroundProgram& g, const SearchOptions& opts) {
    return Search(g.rules, g.atoms.size(), opts).run();
}

} // namespace lpmln
