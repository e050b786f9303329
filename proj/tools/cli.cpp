#include "cli.hpp"

#include <lpmln/selftest.hpp>
#include <lpmln/textio.hpp>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

namespace lpmln::cli {

namespace {
using nlohmann::json;

struct Config {
    std::string              file;
    std::string              dialect;
    bool                     list_all  = false;
    std::string              format    = "table";
    int                      digits    = 6;
    bool                     via_lpmln = false;
    bool                     soft_only = false;
    bool                     optimal   = false;
    std::size_t              max_atoms = Limits{}.max_atoms;
    unsigned                 jobs      = 1;
    std::string              query;
    std::string              given;
    std::string              to;
    bool                     alchemy = false;
    bool                     force   = false;
    bool                     tight   = false;
    std::uint64_t            seed    = 1;
    std::size_t              n       = 200;
    std::vector<std::string> properties;

    Limits limits() const {
        Limits l;
        l.max_atoms = max_atoms;
        l.jobs      = jobs;
        return l;
    }
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) { throw Error(Errc::ParseError, "cannot read " + path); }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Loaded {
    Dialect         dialect;
    FrontendProgram program;
};

Loaded load(const Config& cfg) {
    auto    text    = read_file(cfg.file);
    Dialect dialect = detect_dialect(text, cfg.file);
    if (!cfg.dialect.empty()) {
        auto d = dialect_from_name(cfg.dialect);
        if (!d) { throw Error(Errc::ValidationError, "unknown dialect " + cfg.dialect); }
        dialect = *d;
    }
    return {dialect, parse(dialect, text, cfg.file)};
}

const Signature& signature_of(const FrontendProgram& p) {
    return std::visit([](const auto& x) -> const Signature& { return x.signature; }, p);
}

/// The program read as LP^MLN.
GroundProgram lpmln_view(const FrontendProgram& p) {
    struct Visitor {
        GroundProgram operator()(const Program& x) const { return ground_program(x); }
        GroundProgram operator()(const WeakProgram& x) const { return weak_to_lpmln(x); }
        GroundProgram operator()(const MlnProgram& x) const { return mln_to_lpmln(x); }
        GroundProgram operator()(const ProbLogProgram& x) const { return problog_to_lpmln(x); }
        GroundProgram operator()(const MvppProgram& x) const { return mvpp_to_lpmln(x); }
        GroundProgram operator()(const PlogProgram& x) const { return mvpp_to_lpmln(plog_to_mvpp(x)); }
    };
    return std::visit(Visitor{}, p);
}

Distribution as_distribution(const PlogMeasure& m) {
    Distribution d;
    d.atoms = m.atoms;
    for (const auto& w : m.worlds) {
        if (w.mu > 0.0) { d.entries.push_back({w.W, SymbolicWeight(0, std::log(w.mu_hat)), w.mu}); }
    }
    return d;
}

Distribution evaluate(const FrontendProgram& p, const Config& cfg) {
    auto limits = cfg.limits();
    if (cfg.via_lpmln && !std::holds_alternative<Program>(p)) { return distribution(lpmln_view(p), limits); }
    struct Visitor {
        const Config& cfg;
        const Limits& limits;
        Distribution  operator()(const Program& x) const {
            auto g = ground_program(x);
            return cfg.soft_only ? soft_only_distribution(g, limits) : distribution(g, limits);
        }
        Distribution operator()(const WeakProgram& x) const { return distribution(weak_to_lpmln(x), limits); }
        Distribution operator()(const MlnProgram& x) const { return mln_distribution(x, limits); }
        Distribution operator()(const ProbLogProgram& x) const { return problog_distribution(x, limits); }
        Distribution operator()(const MvppProgram& x) const { return mvpp_direct_distribution(x, limits); }
        Distribution operator()(const PlogProgram& x) const { return as_distribution(plog_measure(x, limits)); }
    };
    return std::visit(Visitor{cfg, limits}, p);
}

/// Fixed `digits` decimals; values too small for that fall back to `digits` significant digits.
std::string decimal(double x, int digits) {
    char buf[64];
    if (x != 0.0 && std::abs(x) < 0.5 * std::pow(10.0, -digits)) {
        std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    }
    else {
        std::snprintf(buf, sizeof buf, "%.*f", digits, x);
    }
    return buf;
}

void print_table(std::ostream& out, const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> width;
    for (const auto& r : rows) {
        width.resize(std::max(width.size(), r.size()));
        for (std::size_t i = 0; i != r.size(); ++i) { width[i] = std::max(width[i], r[i].size()); }
    }
    for (const auto& r : rows) {
        std::string line;
        for (std::size_t i = 0; i != r.size(); ++i) {
            line += r[i];
            if (i + 1 != r.size()) { line += std::string(width[i] - r[i].size() + 2, ' '); }
        }
        out << line << '\n';
    }
}

json atom_names(const Interpretation& I, const AtomTable& t) {
    std::vector<std::string> xs;
    for (auto a : I.atoms()) { xs.push_back(t.name(a)); }
    std::sort(xs.begin(), xs.end());
    return xs;
}

json weight_json(const SymbolicWeight& w) {
    if (w.is_zero()) { return nullptr; }
    return json{{"hard", w.hard_count()}, {"soft", w.soft_sum()}};
}

json universe_json(const AtomTable& t) {
    json out = json::array();
    for (const auto& a : t.atoms()) { out.push_back(a.str()); }
    return out;
}

int cmd_models(const Config& cfg, std::ostream& out) {
    auto loaded = load(cfg);
    if (cfg.optimal) {
        const auto* w = std::get_if<WeakProgram>(&loaded.program);
        if (!w) { throw Error(Errc::ValidationError, "--optimal needs a program with weak constraints"); }
        auto best = optimal_stable_models(*w, cfg.limits());
        if (cfg.format == "json") {
            json xs = json::array();
            for (const auto& I : best) { xs.push_back(atom_names(I, w->atoms)); }
            out << json{{"optimal", xs}}.dump(2) << '\n';
        }
        else {
            for (const auto& I : best) { out << I.str(w->atoms) << "  penalty " << penalty(*w, I) << '\n'; }
        }
        return Success;
    }
    if (cfg.list_all) {
        auto g    = lpmln_view(loaded.program);
        auto rows = full_table(g, cfg.limits());
        if (cfg.format == "json") {
            json xs = json::array();
            for (const auto& r : rows) {
                json sat = json::array();
                for (auto i : r.satisfied) { sat.push_back(i + 1); }
                xs.push_back({{"atoms", atom_names(r.I, g.atoms)},
                              {"satisfied", sat},
                              {"weight", weight_json(r.weight)},
                              {"prob", r.prob}});
            }
            out << json{{"atoms", universe_json(g.atoms)}, {"rules", g.rules.size()}, {"rows", xs}}.dump(2) << '\n';
            return Success;
        }
        std::vector<std::vector<std::string>> table{{"I", "Pi_I", "W", "P"}};
        for (const auto& r : rows) {
            std::string sat = "{";
            for (std::size_t i = 0; i != r.satisfied.size(); ++i) {
                sat += (i ? "," : "") + std::string("r") + std::to_string(r.satisfied[i] + 1);
            }
            table.push_back({r.I.str(g.atoms), sat + "}", r.weight.str(), decimal(r.prob, cfg.digits)});
        }
        print_table(out, table);
        return Success;
    }
    auto d = evaluate(loaded.program, cfg);
    if (cfg.format == "json") {
        json xs = json::array();
        for (const auto& e : d.entries) {
            xs.push_back({{"atoms", atom_names(e.I, d.atoms)}, {"weight", weight_json(e.weight)}, {"prob", e.prob}});
        }
        out << json{{"atoms", universe_json(d.atoms)}, {"models", xs}}.dump(2) << '\n';
        return Success;
    }
    std::vector<std::vector<std::string>> table{{"I", "P"}};
    for (const auto& e : d.entries) { table.push_back({e.I.str(d.atoms), decimal(e.prob, cfg.digits)}); }
    print_table(out, table);
    return Success;
}

int cmd_query(const Config& cfg, std::ostream& out) {
    auto        loaded = load(cfg);
    auto        d      = evaluate(loaded.program, cfg);
    const auto& sig    = signature_of(loaded.program);
    auto        q      = parse_query(cfg.query, sig, d.atoms);
    double      p      = 0.0;
    if (cfg.given.empty()) { p = prob_query(d, q); }
    else { p = cond_prob(d, q, parse_query(cfg.given, sig, d.atoms)); }
    if (cfg.format == "json") {
        json j{{"query", cfg.query}, {"given", cfg.given.empty() ? json(nullptr) : json(cfg.given)}, {"prob", p}};
        out << j.dump() << '\n';
    }
    else { out << "P = " << decimal(p, cfg.digits) << '\n'; }
    return Success;
}

int cmd_translate(const Config& cfg, std::ostream& out, std::ostream& err) {
    auto        loaded = load(cfg);
    const auto& p      = loaded.program;
    bool        json   = cfg.format == "json";
    auto emit_ground = [&](const GroundProgram& g) { out << (json ? to_json(g, 2) + "\n" : print(g)); };
    auto emit_mln    = [&](const MlnProgram& m) {
        if (cfg.alchemy) { out << print_alchemy(m); }
        else { out << (json ? canonical_json(m) + "\n" : print(m)); }
    };
    if (cfg.to == "lpmln") {
        if (const auto* x = std::get_if<Program>(&p); x && !json) { out << print(*x); }
        else { emit_ground(lpmln_view(p)); }
    }
    else if (cfg.to == "ground") {
        if (const auto* x = std::get_if<Program>(&p)) { emit_ground(ground_program(*x)); }
        else { out << (json ? canonical_json(p) + "\n" : print(p)); }
    }
    else if (cfg.to == "completion" || cfg.to == "mln") {
        if (const auto* m = std::get_if<MlnProgram>(&p); m && cfg.to == "mln") {
            emit_mln(*m);
            return Success;
        }
        auto g = lpmln_view(p);
        if (cfg.to == "mln") {
            if (!has_hard_consistent_model(g, cfg.limits())) {
                err << "warning: no stable model satisfies every hard rule; the MLN may differ\n";
            }
            emit_mln(loop_augmented_mln(g, cfg.limits()));
            return Success;
        }
        auto c = completion(g, cfg.force);
        if (!has_hard_consistent_model(g, cfg.limits())) {
            err << "warning: no stable model satisfies every hard rule; the completion may differ\n";
        }
        emit_mln(c);
    }
    else if (cfg.to == "mvpp") {
        const auto* x = std::get_if<PlogProgram>(&p);
        if (!x) { throw Error(Errc::ValidationError, "--to mvpp needs a P-log program"); }
        auto m = plog_to_mvpp(*x);
        out << (json ? canonical_json(m) + "\n" : print(m));
    }
    else if (cfg.to == "tau") {
        const auto* x = std::get_if<PlogProgram>(&p);
        if (!x) { throw Error(Errc::ValidationError, "--to tau needs a P-log program"); }
        emit_ground(plog_tau(*x));
    }
    else { throw Error(Errc::ValidationError, "unknown target " + cfg.to); }
    return Success;
}

int cmd_check(const Config& cfg, std::ostream& out) {
    auto loaded = load(cfg);
    int  code   = Success;
    if (const auto* x = std::get_if<PlogProgram>(&loaded.program)) {
        for (const auto& d : plog_validate(*x, cfg.limits())) {
            out << cfg.file << ": " << d.kind << ": " << d.message << '\n';
            code = InputError;
        }
    }
    if (code != Success) { return code; }
    auto g = lpmln_view(loaded.program);
    out << cfg.file << ": " << dialect_name(loaded.dialect) << ", " << g.atoms.size() << " atoms, " << g.rules.size()
        << " ground rules\n";
    if (cfg.tight) {
        bool tight = is_tight(g.unweighted(), g.atoms.size());
        out << cfg.file << ": " << (tight ? "tight" : "not tight") << '\n';
    }
    out << "ok\n";
    return Success;
}

int cmd_selftest(const Config& cfg, std::ostream& out) {
    SelftestOptions opts;
    opts.seed       = cfg.seed;
    opts.iterations = cfg.n;
    opts.limits     = cfg.limits();
    opts.only       = cfg.properties;
    bool ok         = true;
    run_selftest(opts, [&](const PropertyReport& r) {
        out << (r.ok() ? "PASS " : "FAIL ") << r.name << " (" << r.cases << " cases, " << r.skipped << " skipped)\n";
        if (!r.ok()) {
            out << *r.counterexample << '\n';
            ok = false;
        }
        out.flush();
    });
    return ok ? Success : SemanticError;
}

std::size_t env_max_atoms() {
    if (const char* v = std::getenv("LPMLN_MAX_ATOMS")) {
        try {
            return static_cast<std::size_t>(std::stoul(v));
        }
        catch (const std::exception&) {
        }
    }
    return Limits{}.max_atoms;
}
} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Config   cfg;
    CLI::App app{"Exact inference for weighted logic programs (LP^MLN) and related languages", "lpmln"};
    app.require_subcommand(1);
    cfg.max_atoms = env_max_atoms();

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("file", cfg.file, "Input program")->required();
        sub->add_option("--dialect,--from", cfg.dialect, "lpmln, asp, mln, problog, mvpp or plog");
        sub->add_option("--max-atoms", cfg.max_atoms, "Cap on candidate atoms of a search (env LPMLN_MAX_ATOMS)");
        sub->add_option("--jobs,-j", cfg.jobs, "Worker threads")->check(CLI::Range(1u, 256u));
    };
    auto add_output = [&](CLI::App* sub) {
        sub->add_option("--format", cfg.format, "table or json")->check(CLI::IsMember({"table", "json", "text"}));
        sub->add_option("--digits", cfg.digits, "Decimals of printed probabilities")->check(CLI::Range(1, 17));
        sub->add_flag("--via-lpmln", cfg.via_lpmln, "Evaluate the LP^MLN translation of a frontend program");
        sub->add_flag("--soft-only", cfg.soft_only, "Use P' (soft rules only, hard rules as constraints)");
    };

    auto* models = app.add_subcommand("models", "Print the probabilistic stable models");
    add_common(models);
    add_output(models);
    models->add_flag("--list-all", cfg.list_all, "Print every interpretation with Pi_I, weight and probability");
    models->add_flag("--optimal", cfg.optimal, "Print the optimal stable models of a program with weak constraints");

    auto* query = app.add_subcommand("query", "Probability of a formula");
    add_common(query);
    add_output(query);
    query->add_option("--query,-q", cfg.query, "Formula")->required();
    query->add_option("--given,-g", cfg.given, "Condition");

    auto* translate = app.add_subcommand("translate", "Translate a program");
    add_common(translate);
    translate->add_option("--to", cfg.to, "lpmln, ground, mln, completion, mvpp or tau")
        ->required()
        ->check(CLI::IsMember({"lpmln", "ground", "mln", "completion", "mvpp", "tau"}));
    translate->add_option("--format", cfg.format, "text or json")->check(CLI::IsMember({"table", "text", "json"}));
    translate->add_flag("--alchemy", cfg.alchemy, "Alchemy-style MLN output");
    translate->add_flag("--force", cfg.force, "Complete non-tight programs");

    auto* check = app.add_subcommand("check", "Validate a program");
    add_common(check);
    check->add_flag("--tight", cfg.tight, "Report whether the program is tight");

    auto* selftest = app.add_subcommand("selftest", "Run the randomized semantic property checks");
    selftest->add_option("--seed", cfg.seed, "Random seed");
    selftest->add_option("-n,--iterations", cfg.n, "Cases per property");
    selftest->add_option("--property,-p", cfg.properties, "Restrict to the named properties");
    selftest->add_option("--max-atoms", cfg.max_atoms, "Cap on candidate atoms of a search");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    }
    catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? Success : UsageError;
    }

    try {
        if (models->parsed()) { return cmd_models(cfg, out); }
        if (query->parsed()) { return cmd_query(cfg, out); }
        if (translate->parsed()) { return cmd_translate(cfg, out, err); }
        if (check->parsed()) { return cmd_check(cfg, out); }
        if (selftest->parsed()) { return cmd_selftest(cfg, out); }
    }
    catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return is_input_error(e.code()) ? InputError : SemanticError;
    }
    catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return SemanticError;
    }
    return UsageError;
}

} // namespace lpmln::cli
