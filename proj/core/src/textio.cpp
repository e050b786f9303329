#include <lpmln/textio.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

namespace lpmln {

/////////////////////////////////////////////////////////////////////////////////////////
// Dialects
/////////////////////////////////////////////////////////////////////////////////////////
namespace {
constexpr std::pair<Dialect, const char*> dialect_names[] = {
    {Dialect::Lpmln, "lpmln"},     {Dialect::AspWeak, "asp"}, {Dialect::Mln, "mln"},
    {Dialect::ProbLog, "problog"}, {Dialect::Mvpp, "mvpp"},   {Dialect::Plog, "plog"},
};
} // namespace

const char* dialect_name(Dialect d) {
    for (const auto& [k, n] : dialect_names) {
        if (k == d) { return n; }
    }
    return "?";
}

std::optional<Dialect> dialect_from_name(std::string_view name) {
    for (const auto& [k, n] : dialect_names) {
        if (name == n) { return k; }
    }
    return std::nullopt;
}

std::optional<Dialect> dialect_from_path(std::string_view path) {
    auto dot = path.rfind('.');
    if (dot == std::string_view::npos) { return std::nullopt; }
    return dialect_from_name(path.substr(dot + 1));
}

Dialect detect_dialect(std::string_view text, std::string_view path) {
    std::size_t i = 0;
    while (i < text.size()) {
        auto eol  = text.find('\n', i);
        auto line = text.substr(i, eol == std::string_view::npos ? text.size() - i : eol - i);
        i         = eol == std::string_view::npos ? text.size() : eol + 1;
        auto b    = line.find_first_not_of(" \t\r");
        if (b == std::string_view::npos || line[b] == '%') { continue; }
        line = line.substr(b);
        if (line.starts_with("#dialect")) {
            auto rest = line.substr(8);
            auto s    = rest.find_first_not_of(" \t");
            auto e    = rest.find_first_of(" \t.%", s);
            if (s != std::string_view::npos) {
                if (auto d = dialect_from_name(rest.substr(s, e == std::string_view::npos ? e : e - s))) { return *d; }
            }
        }
        break;
    }
    return dialect_from_path(path).value_or(Dialect::Lpmln);
}

Dialect dialect_of(const FrontendProgram& p) { return static_cast<Dialect>(p.index()); }

/////////////////////////////////////////////////////////////////////////////////////////
// Lexer
/////////////////////////////////////////////////////////////////////////////////////////
namespace {

enum class Tok : std::uint8_t { End, Ident, Variable, Number, Directive, Punct };

struct Token {
    Tok         kind = Tok::End;
    std::string text;
    SourceSpan  span;
};

const char* tok_desc(Tok k) {
    switch (k) {
        case Tok::End      : return "end of input";
        case Tok::Ident    : return "identifier";
        case Tok::Variable : return "variable";
        case Tok::Number   : return "number";
        case Tok::Directive: return "directive";
        case Tok::Punct    : return "punctuation";
    }
    return "?";
}

std::vector<Token> lex(std::string_view text, const std::string& file) {
    static constexpr std::string_view two[]  = {":-", ":~", "::", "..", "!=", "<=", ">=", "->"};
    static constexpr std::string_view one    = ".,;:()[]{}|=<>&~/-";
    std::vector<Token>                out;
    unsigned                          line = 1, col = 1;
    std::size_t                       i    = 0;
    auto                              ch   = [&](std::size_t k) -> unsigned char {
        return i + k < text.size() ? static_cast<unsigned char>(text[i + k]) : 0;
    };
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k != n; ++k, ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            }
            else { ++col; }
        }
    };
    auto word = [](unsigned char c) { return std::isalnum(c) || c == '_'; };
    while (i < text.size()) {
        unsigned char c = ch(0);
        if (std::isspace(c)) {
            advance(1);
            continue;
        }
        if (c == '%') {
            while (i < text.size() && text[i] != '\n') { advance(1); }
            continue;
        }
        Token       t;
        t.span          = {file, line, col};
        std::size_t len = 0;
        if (std::islower(c) || std::isupper(c) || c == '_') {
            t.kind = std::islower(c) ? Tok::Ident : Tok::Variable;
            while (word(ch(len))) { ++len; }
        }
        else if (std::isdigit(c)) {
            t.kind = Tok::Number;
            while (std::isdigit(ch(len))) { ++len; }
            if (ch(len) == '.' && std::isdigit(ch(len + 1))) {
                ++len;
                while (std::isdigit(ch(len))) { ++len; }
            }
            if (ch(len) == 'e' || ch(len) == 'E') {
                std::size_t k = len + 1;
                if (ch(k) == '+' || ch(k) == '-') { ++k; }
                if (std::isdigit(ch(k))) {
                    len = k;
                    while (std::isdigit(ch(len))) { ++len; }
                }
            }
        }
        else if (c == '#') {
            t.kind = Tok::Directive;
            len    = 1;
            while (word(ch(len))) { ++len; }
            if (len == 1) { throw ParseError("'#' must start a directive", t.span); }
        }
        else {
            t.kind = Tok::Punct;
            for (auto p : two) {
                if (text.substr(i, 2) == p) { len = 2; }
            }
            if (len == 0 && one.find(static_cast<char>(c)) != std::string_view::npos) { len = 1; }
            if (len == 0) {
                throw ParseError(std::string("unexpected character '") + static_cast<char>(c) + "'", t.span);
            }
        }
        t.text = std::string(text.substr(i, len));
        advance(len);
        out.push_back(std::move(t));
    }
    out.push_back({Tok::End, "", {file, line, col}});
    return out;
}

/////////////////////////////////////////////////////////////////////////////////////////
// Source statements
/////////////////////////////////////////////////////////////////////////////////////////
struct Stmt {
    enum class Kind : std::uint8_t { Rule, Weak, Formula, ProbFact, Decl, Random, Pr, Obs, Do };

    Kind                                        kind = Kind::Rule;
    SourceSpan                                  span;
    WeightedRulePattern                         rule;
    FormulaPattern                              formula;
    long long                                   weak = 0;
    std::vector<std::pair<double, AtomPattern>> choices;
    double                                      prob = 0.0;
    std::optional<AtomPattern>                  id;
};

struct Source {
    Signature         sig;
    std::vector<Stmt> stmts;
};

template <class A>
BasicFormula<A> conj_of(std::vector<BasicFormula<A>> elems) {
    if (elems.empty()) { return BasicFormula<A>::truth(); }
    if (elems.size() == 1) { return std::move(elems.front()); }
    return BasicFormula<A>::conj(std::move(elems));
}

template <class A>
std::vector<BasicFormula<A>> elements_of(const BasicFormula<A>& neg) {
    if (neg.is_true()) { return {}; }
    if (neg.op == Connective::And && neg.args.size() >= 2) { return neg.args; }
    return {neg};
}

double parse_double(const Token& t) {
    double v       = 0.0;
    auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc{} || ptr != t.text.data() + t.text.size()) { throw ParseError("bad number " + t.text, t.span); }
    return v;
}

class Parser {
public:
    Parser(std::string_view text, const std::string& file, Dialect d)
        : toks_(lex(text, file))
        , dialect_(d) {}

    Source parse_source() {
        Source src;
        while (peek().kind != Tok::End) {
            if (peek().kind == Tok::Directive) { directive(src); }
            else {
                for (auto& st : statement()) { src.stmts.push_back(std::move(st)); }
            }
        }
        return src;
    }

    FormulaPattern parse_query() {
        auto f = formula();
        accept(".");
        if (peek().kind != Tok::End) { fail("unexpected '" + peek().text + "' after the query", {"end of input"}); }
        return f;
    }

private:
    const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
    bool at(std::string_view s, std::size_t k = 0) const {
        const auto& t = peek(k);
        return (t.kind == Tok::Punct || t.kind == Tok::Ident) && t.text == s;
    }
    bool accept(std::string_view s) {
        if (!at(s)) { return false; }
        ++pos_;
        return true;
    }
    const Token& next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

    [[noreturn]] void fail(const std::string& msg, std::vector<std::string> expected = {}) const {
        throw ParseError(msg, peek().span, std::move(expected));
    }
    [[noreturn]] void unexpected(std::vector<std::string> expected) const {
        const auto& t   = peek();
        std::string got = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
        std::string msg = "unexpected " + got + ", expected ";
        for (std::size_t i = 0; i != expected.size(); ++i) { msg += (i ? " or " : "") + expected[i]; }
        throw ParseError(msg, t.span, std::move(expected));
    }
    void expect(std::string_view s) {
        if (!accept(s)) { unexpected({"'" + std::string(s) + "'"}); }
    }
    const Token& expect(Tok kind) {
        if (peek().kind != kind) { unexpected({tok_desc(kind)}); }
        return next();
    }

    // directives ---------------------------------------------------------------------
    std::string domain_value() {
        if (accept("-")) { return "-" + expect(Tok::Number).text; }
        if (peek().kind == Tok::Ident || peek().kind == Tok::Number) { return next().text; }
        unexpected({"identifier", "number"});
    }

    void directive(Source& src) {
        const Token& d    = next();
        auto&        sig  = src.sig;
        auto         span = d.span;
        if (d.text == "#dialect") {
            const auto& n = expect(Tok::Ident);
            auto        k = dialect_from_name(n.text);
            if (!k) { throw ParseError("unknown dialect " + n.text, n.span); }
            if (*k != dialect_) {
                throw ParseError(std::string("file declares dialect ") + n.text + " but is read as " +
                                     dialect_name(dialect_),
                                 n.span);
            }
        }
        else if (d.text == "#domain") {
            DomainDecl dom;
            dom.name = expect(Tok::Ident).text;
            expect("=");
            if (accept("{")) {
                if (!at("}")) {
                    do { dom.values.push_back(domain_value()); } while (accept(","));
                }
                expect("}");
            }
            else {
                auto lo = std::stoll(domain_value());
                expect("..");
                auto hi      = std::stoll(domain_value());
                dom.is_range = true;
                for (auto v = lo; v <= hi; ++v) { dom.values.push_back(std::to_string(v)); }
            }
            if (sig.domain(dom.name) && dom.name != "bool") {
                throw Error(Errc::ValidationError, "domain " + dom.name + " declared twice", span);
            }
            std::set<std::string> seen(dom.values.begin(), dom.values.end());
            if (seen.size() != dom.values.size()) {
                throw Error(Errc::ValidationError, "domain " + dom.name + " lists a value twice", span);
            }
            if (dom.name == "bool") { throw Error(Errc::ValidationError, "the domain bool is predefined", span); }
            sig.domains.push_back(std::move(dom));
        }
        else if (d.text == "#var") {
            std::vector<std::string> names;
            do { names.push_back(expect(Tok::Variable).text); } while (accept(","));
            expect(":");
            auto dom = expect(Tok::Ident).text;
            if (!sig.domain(dom)) { throw Error(Errc::SignatureError, "unknown domain " + dom, span); }
            for (auto& n : names) {
                if (sig.variable_domain(n)) { throw Error(Errc::ValidationError, "variable " + n + " declared twice", span); }
                sig.variables.push_back({n, dom});
            }
        }
        else if (d.text == "#const") {
            ConstDecl c;
            c.symbol = expect(Tok::Ident).text;
            if (accept("(")) {
                do { c.arg_domains.push_back(expect(Tok::Ident).text); } while (accept(","));
                expect(")");
            }
            expect(":");
            c.value_domain = expect(Tok::Ident).text;
            for (const auto& dn : c.arg_domains) {
                if (!sig.domain(dn)) { throw Error(Errc::SignatureError, "unknown domain " + dn, span); }
            }
            if (!sig.domain(c.value_domain)) {
                throw Error(Errc::SignatureError, "unknown domain " + c.value_domain, span);
            }
            if (sig.constant(c.symbol)) {
                throw Error(Errc::ValidationError, "constant " + c.symbol + " declared twice", span);
            }
            sig.constants.push_back(std::move(c));
        }
        else if (d.text == "#atom") {
            AtomDecl a;
            a.symbol = expect(Tok::Ident).text;
            if (accept("(")) {
                do { a.args.push_back(Term::constant(domain_value())); } while (accept(","));
                expect(")");
            }
            if (sig.constant(a.symbol)) {
                throw Error(Errc::ValidationError, a.symbol + " is a multi-valued constant", span);
            }
            sig.atoms.push_back(std::move(a));
        }
        else { throw ParseError("unknown directive " + d.text, span, {"#dialect", "#domain", "#var", "#const", "#atom"}); }
        expect(".");
    }

    // terms, atoms, formulas ---------------------------------------------------------
    Term term() {
        const auto& t = peek();
        if (t.kind == Tok::Variable) { return Term::variable(next().text); }
        if (t.kind == Tok::Ident || t.kind == Tok::Number) { return Term::constant(next().text); }
        if (at("-") && peek(1).kind == Tok::Number) {
            ++pos_;
            return Term::constant("-" + next().text);
        }
        unexpected({"term"});
    }

    AtomPattern atom() {
        const auto& t = peek();
        if (t.kind != Tok::Ident) { unexpected({"atom"}); }
        if (t.text == "not" || t.text == "true" || t.text == "false") { fail("'" + t.text + "' is a keyword"); }
        AtomPattern a;
        a.symbol = next().text;
        if (accept("(")) {
            do { a.args.push_back(term()); } while (accept(","));
            expect(")");
        }
        if (accept("=")) { a.value = term(); }
        return a;
    }

    FormulaPattern formula() {
        auto lhs = disjunction();
        if (accept("->")) { return FormulaPattern::implies(std::move(lhs), formula()); }
        return lhs;
    }
    FormulaPattern disjunction() {
        std::vector<FormulaPattern> xs{conjunction()};
        while (accept("|") || accept(";")) { xs.push_back(conjunction()); }
        return xs.size() == 1 ? std::move(xs.front()) : FormulaPattern::disj(std::move(xs));
    }
    FormulaPattern conjunction() {
        std::vector<FormulaPattern> xs{unary()};
        while (accept("&") || accept(",")) { xs.push_back(unary()); }
        return xs.size() == 1 ? std::move(xs.front()) : FormulaPattern::conj(std::move(xs));
    }
    FormulaPattern unary() {
        if (accept("not") || accept("~")) { return FormulaPattern::negate(unary()); }
        return primary();
    }
    FormulaPattern primary() {
        if (accept("(")) {
            auto f = formula();
            expect(")");
            return f;
        }
        if (accept("true")) { return FormulaPattern::truth(); }
        if (accept("false")) { return FormulaPattern::falsity(); }
        return FormulaPattern::make_atom(atom());
    }

    // rules --------------------------------------------------------------------------
    ArithTerm arith() {
        ArithTerm a{term(), std::nullopt};
        if (accept("mod")) { a.modulus = term(); }
        return a;
    }

    Builtin builtin() {
        auto lhs = arith();
        auto op  = peek().text;
        if (!(accept("=") || accept("!=") || accept("<") || accept("<=") || accept(">") || accept(">="))) {
            unexpected({"'='", "'!='", "'<'", "'<='", "'>'", "'>='"});
        }
        auto rhs = arith();
        if (op == "=") { return {lhs, CmpOp::Eq, rhs}; }
        if (op == "!=") { return {lhs, CmpOp::Ne, rhs}; }
        if (op == "<") { return {lhs, CmpOp::Lt, rhs}; }
        if (op == "<=") { return {lhs, CmpOp::Le, rhs}; }
        if (op == ">") { return {rhs, CmpOp::Lt, lhs}; }
        return {rhs, CmpOp::Le, lhs};
    }

    void literal(RulePattern& r, std::vector<FormulaPattern>& negs) {
        const auto& t = peek();
        if (t.kind == Tok::Variable || t.kind == Tok::Number || at("-")) {
            r.builtins.push_back(builtin());
            return;
        }
        std::size_t nots = 0;
        while (accept("not")) { ++nots; }
        if (nots == 0 && at("(")) {
            auto span = peek().span;
            auto f    = primary();
            if (!is_negative(f)) {
                throw Error(Errc::ValidationError, "a parenthesized body element must be a negative formula", span);
            }
            negs.push_back(std::move(f));
            return;
        }
        auto f = (at("(") || at("true") || at("false")) ? primary() : FormulaPattern::make_atom(atom());
        if (nots == 0) {
            r.pos.push_back(std::move(f.atom));
            return;
        }
        while (nots-- > 0) { f = FormulaPattern::negate(std::move(f)); }
        negs.push_back(std::move(f));
    }

    void body(RulePattern& r, std::vector<FormulaPattern>& negs, std::string_view end = ".") {
        if (at(end)) { return; }
        do { literal(r, negs); } while (accept(","));
    }

    bool weight_ahead() const {
        if (peek().kind == Tok::Number) { return at(":", 1); }
        if (at("-") && peek(1).kind == Tok::Number) { return at(":", 2); }
        return at("alpha") && at(":", 1);
    }

    Weight weight() {
        if (accept("alpha")) { return Weight::alpha(); }
        bool neg = accept("-");
        auto w   = parse_double(expect(Tok::Number));
        return Weight::of(neg ? -w : w);
    }

    double probability() {
        const auto& t = expect(Tok::Number);
        double      p = parse_double(t);
        if (accept("/")) {
            const auto& d = expect(Tok::Number);
            double      q = parse_double(d);
            if (q == 0.0) { throw ParseError("division by zero", d.span); }
            p /= q;
        }
        if (!(p >= 0.0 && p <= 1.0)) {
            throw Error(Errc::ValidationError, "probability " + format_number(p) + " is outside [0, 1]", t.span);
        }
        return p;
    }

    // `head :- body.` with an optional choice head; produces one rule per choice atom
    std::vector<RulePattern> rule_tail(bool allowDisjunction, bool allowChoice) {
        std::vector<AtomPattern> head;
        bool                     choice = false;
        if (allowChoice && accept("{")) {
            choice = true;
            do { head.push_back(atom()); } while (accept(";"));
            expect("}");
        }
        else if (!at(":-")) {
            head.push_back(atom());
            while (at(";") || at("|")) {
                if (!allowDisjunction) { fail("disjunctive heads are not allowed here"); }
                ++pos_;
                head.push_back(atom());
            }
        }
        RulePattern                 r;
        std::vector<FormulaPattern> negs;
        if (accept(":-")) { body(r, negs); }
        else if (head.empty()) { unexpected({"atom", "':-'"}); }
        expect(".");
        if (!choice) {
            r.head = std::move(head);
            r.neg  = conj_of(std::move(negs));
            return {std::move(r)};
        }
        std::vector<RulePattern> out;
        for (auto& a : head) {
            RulePattern c = r;
            auto        n = negs;
            n.push_back(FormulaPattern::negate(FormulaPattern::negate(FormulaPattern::make_atom(a))));
            c.head = {std::move(a)};
            c.neg  = conj_of(std::move(n));
            out.push_back(std::move(c));
        }
        return out;
    }

    std::vector<Stmt> statement() {
        Stmt s;
        s.span = peek().span;
        switch (dialect_) {
            case Dialect::Lpmln  : return rule_statements(s, true);
            case Dialect::AspWeak: return weak_statement(s);
            case Dialect::Mln    : return {mln_statement(s)};
            case Dialect::ProbLog: return {problog_statement(s)};
            case Dialect::Mvpp   : return {mvpp_statement(s)};
            case Dialect::Plog   : return {plog_statement(s)};
        }
        return {};
    }

    // a choice head yields one statement per atom
    std::vector<Stmt> rule_statements(const Stmt& s, bool weighted) {
        Weight w = Weight::alpha();
        if (weighted && weight_ahead()) {
            w = weight();
            expect(":");
        }
        std::vector<Stmt> out;
        for (auto& r : rule_tail(true, true)) {
            Stmt x = s;
            x.rule = {w, std::move(r)};
            out.push_back(std::move(x));
        }
        return out;
    }

    std::vector<Stmt> weak_statement(Stmt& s) {
        if (!accept(":~")) { return rule_statements(s, false); }
        s.kind = Stmt::Kind::Weak;
        std::vector<FormulaPattern> negs;
        body(s.rule.rule, negs);
        s.rule.rule.neg = conj_of(std::move(negs));
        expect(".");
        expect("[");
        bool neg = accept("-");
        auto w   = parse_double(expect(Tok::Number));
        if (w != std::floor(w)) { fail("weak constraint weights are integers"); }
        s.weak = static_cast<long long>(neg ? -w : w);
        expect("]");
        return {s};
    }

    Stmt mln_statement(Stmt& s) {
        s.kind = Stmt::Kind::Formula;
        if (!weight_ahead()) { unexpected({"weight"}); }
        s.rule.weight = weight();
        expect(":");
        s.formula = formula();
        expect(".");
        return s;
    }

    Stmt problog_statement(Stmt& s) {
        if (peek().kind == Tok::Number) {
            s.kind = Stmt::Kind::ProbFact;
            s.prob = probability();
            expect("::");
            s.rule.rule.head = {atom()};
            expect(".");
            return s;
        }
        s.rule.rule = rule_tail(false, false).front();
        if (s.rule.rule.head.empty()) { fail("ProbLog rules need a head"); }
        return s;
    }

    Stmt mvpp_statement(Stmt& s) {
        if (peek().kind == Tok::Number) {
            s.kind = Stmt::Kind::Decl;
            do {
                double p = probability();
                expect(":");
                auto a = atom();
                if (!a.value) { fail("expected c=v in a probability declaration"); }
                s.choices.emplace_back(p, std::move(a));
            } while (accept("|"));
            expect(".");
            return s;
        }
        s.rule.rule = rule_tail(true, false).front();
        return s;
    }

    void plog_body(RulePattern& r, std::string_view end) {
        std::vector<FormulaPattern> negs;
        body(r, negs, end);
        for (const auto& n : negs) {
            if (n.op != Connective::Not || n.args.front().op != Connective::Atom) {
                fail("P-log bodies contain only atoms and 'not atom'");
            }
        }
        r.neg = conj_of(std::move(negs));
    }

    Stmt plog_statement(Stmt& s) {
        if (at("[") || (at("random") && at("(", 1))) {
            s.kind = Stmt::Kind::Random;
            if (accept("[")) {
                s.id = atom();
                expect("]");
            }
            expect("random");
            expect("(");
            s.rule.rule.head = {atom()};
            expect(")");
            if (accept(":-")) { plog_body(s.rule.rule, "."); }
            expect(".");
            return s;
        }
        if (at("pr") && (at("[", 1) || at("(", 1))) {
            ++pos_;
            s.kind = Stmt::Kind::Pr;
            if (accept("[")) {
                s.id = atom();
                expect("]");
            }
            expect("(");
            s.rule.rule.head = {atom()};
            if (accept("|")) { plog_body(s.rule.rule, ")"); }
            expect(")");
            expect("=");
            s.prob = probability();
            expect(".");
            return s;
        }
        if ((at("obs") || at("do")) && at("(", 1)) {
            s.kind = next().text == "obs" ? Stmt::Kind::Obs : Stmt::Kind::Do;
            expect("(");
            s.rule.rule.head = {atom()};
            expect(")");
            expect(".");
            return s;
        }
        s.rule.rule = rule_tail(false, false).front();
        if (s.rule.rule.head.empty()) { fail("P-log rules need a head"); }
        plog_check_neg(s.rule.rule.neg);
        return s;
    }

    void plog_check_neg(const FormulaPattern& neg) {
        for (const auto& n : elements_of(neg)) {
            if (n.op != Connective::Not || n.args.front().op != Connective::Atom) {
                throw Error(Errc::ValidationError, "P-log rules are normal: only 'not atom' in bodies", peek().span);
            }
        }
    }

private:
    std::vector<Token> toks_;
    std::size_t        pos_ = 0;
    Dialect            dialect_;
};

Source read_source(Dialect d, std::string_view text, const std::string& file) {
    return Parser(text, file, d).parse_source();
}

/////////////////////////////////////////////////////////////////////////////////////////
// Instantiation of source statements
/////////////////////////////////////////////////////////////////////////////////////////
[[noreturn]] void invalid(const Stmt& s, const std::string& msg) { throw Error(Errc::ValidationError, msg, s.span); }

std::vector<std::string> stmt_vars(const Stmt& s) {
    auto v = variables_of(s.rule.rule);
    collect_variables(s.formula, v);
    if (s.id) { collect_variables(*s.id, v); }
    for (const auto& [p, a] : s.choices) { collect_variables(a, v); }
    return v;
}

template <class F>
void for_instances(const Instantiator& inst, const Stmt& s, F&& visit) {
    try {
        inst.for_each_assignment(stmt_vars(s), s.rule.rule.builtins, visit);
    }
    catch (const ParseError&) {
        throw;
    }
    catch (const Error& e) {
        if (e.span()) { throw; }
        throw Error(e.code(), e.message(), s.span);
    }
}

std::string value_of(const Term& t, const Assignment& asg) {
    if (!t.is_variable()) { return t.name; }
    return asg.at(t.name);
}

std::size_t index_of(const std::vector<std::string>& xs, const std::string& x) {
    return static_cast<std::size_t>(std::find(xs.begin(), xs.end(), x) - xs.begin());
}

GroundAtom without_value(GroundAtom a) {
    a.value.reset();
    return a;
}

std::vector<AtomId> negated_atoms(const Formula& neg) {
    std::vector<AtomId> out;
    for (const auto& e : elements_of(neg)) { out.push_back(e.args.front().atom); }
    return out;
}

template <class P>
P begin_program(const Source& src) {
    P p;
    p.signature = src.sig;
    return p;
}
} // namespace

Program parse_lpmln(std::string_view text, const std::string& file) {
    auto    src = read_source(Dialect::Lpmln, text, file);
    Program p;
    p.signature = src.sig;
    for (auto& s : src.stmts) {
        for (const auto& v : variables_of(s.rule.rule)) {
            if (!p.signature.variable_domain(v)) {
                throw Error(Errc::SignatureError, "variable " + v + " has no #var declaration", s.span);
            }
        }
        p.rules.push_back(std::move(s.rule));
    }
    return p;
}

WeakProgram parse_weak(std::string_view text, const std::string& file, const GroundLimits& limits) {
    auto src = read_source(Dialect::AspWeak, text, file);
    auto w   = begin_program<WeakProgram>(src);
    Instantiator inst(w.signature, w.atoms, limits);
    inst.declare_signature_atoms();
    for (const auto& s : src.stmts) {
        for_instances(inst, s, [&](const Assignment& asg) {
            auto r = inst.rule(s.rule.rule, asg);
            if (s.kind == Stmt::Kind::Weak) { w.weak.push_back({std::move(r.pos), std::move(r.neg), s.weak}); }
            else { w.rules.push_back(std::move(r)); }
        });
    }
    return w;
}

MlnProgram parse_mln(std::string_view text, const std::string& file, const GroundLimits& limits) {
    auto         src = read_source(Dialect::Mln, text, file);
    auto         L   = begin_program<MlnProgram>(src);
    Instantiator inst(L.signature, L.atoms, limits);
    inst.declare_signature_atoms();
    for (const auto& s : src.stmts) {
        for_instances(inst, s, [&](const Assignment& asg) {
            L.formulas.push_back({s.rule.weight, inst.formula(s.formula, asg)});
        });
    }
    return L;
}

ProbLogProgram parse_problog(std::string_view text, const std::string& file, const GroundLimits& limits) {
    auto         src = read_source(Dialect::ProbLog, text, file);
    auto         p   = begin_program<ProbLogProgram>(src);
    Instantiator inst(p.signature, p.atoms, limits);
    inst.declare_signature_atoms();
    std::vector<SourceSpan> factSpans;
    for (const auto& s : src.stmts) {
        for_instances(inst, s, [&](const Assignment& asg) {
            if (s.kind == Stmt::Kind::ProbFact) {
                p.facts.push_back({inst.atom(s.rule.rule.head.front(), asg), s.prob});
                factSpans.push_back(s.span);
            }
            else { p.rules.push_back(inst.rule(s.rule.rule, asg)); }
        });
    }
    for (std::size_t i = 0; i != p.facts.size(); ++i) {
        for (const auto& r : p.rules) {
            if (std::find(r.head.begin(), r.head.end(), p.facts[i].atom) != r.head.end()) {
                throw Error(Errc::ValidationError,
                            "probabilistic atom " + p.atoms.name(p.facts[i].atom) + " occurs in a rule head",
                            factSpans[i]);
            }
        }
    }
    return p;
}

MvppProgram parse_mvpp(std::string_view text, const std::string& file, const GroundLimits& limits) {
    auto src = read_source(Dialect::Mvpp, text, file);
    // constants used in declarations without #const get a domain of the listed values
    for (const auto& s : src.stmts) {
        if (s.kind != Stmt::Kind::Decl) { continue; }
        const auto& sym = s.choices.front().second.symbol;
        if (src.sig.constant(sym)) { continue; }
        DomainDecl dom{"dom_" + sym, {}, false};
        for (const auto& [p, a] : s.choices) {
            if (a.symbol != sym) { invalid(s, "a declaration mixes the constants " + sym + " and " + a.symbol); }
            if (!a.args.empty() || a.value->is_variable()) {
                invalid(s, "declare the constant " + sym + " with #const");
            }
            dom.values.push_back(a.value->name);
        }
        if (src.sig.domain(dom.name)) { invalid(s, "domain " + dom.name + " already exists"); }
        src.sig.constants.push_back({sym, {}, dom.name});
        src.sig.domains.push_back(std::move(dom));
    }
    auto         m = begin_program<MvppProgram>(src);
    Instantiator inst(m.signature, m.atoms, limits);
    auto         groups = inst.constant_instances();
    inst.declare_signature_atoms();
    std::map<std::string, std::size_t> byName;
    for (auto& g : groups) {
        byName[g.name] = m.constants.size();
        m.constants.push_back({g.name, g.atoms});
    }
    std::vector<bool> declared(m.constants.size(), false);
    for (const auto& s : src.stmts) {
        for_instances(inst, s, [&](const Assignment& asg) {
            if (s.kind != Stmt::Kind::Decl) {
                m.rules.push_back(inst.rule(s.rule.rule, asg));
                return;
            }
            std::optional<std::size_t>         c;
            std::vector<std::optional<double>> probs;
            for (const auto& [p, a] : s.choices) {
                auto g  = inst.ground_atom(a, asg);
                auto it = byName.find(without_value(g).str());
                if (it == byName.end()) { invalid(s, without_value(g).str() + " is not a constant"); }
                if (c && *c != it->second) { invalid(s, "a declaration must concern a single constant"); }
                c           = it->second;
                const auto& atoms = m.constants[*c].atoms;
                probs.resize(atoms.size());
                auto idx = static_cast<std::size_t>(std::find(atoms.begin(), atoms.end(), m.atoms.intern(g)) -
                                                    atoms.begin());
                if (probs[idx]) { invalid(s, g.str() + " is listed twice"); }
                probs[idx] = p;
            }
            MvppDecl d{*c, {}};
            double   sum = 0.0;
            for (std::size_t i = 0; i != probs.size(); ++i) {
                if (!probs[i]) {
                    invalid(s, "the declaration of " + m.constants[*c].name + " omits " +
                                   m.atoms.name(m.constants[*c].atoms[i]));
                }
                d.probs.push_back(*probs[i]);
                sum += *probs[i];
            }
            if (std::abs(sum - 1.0) > 1e-9) {
                invalid(s, "probabilities of " + m.constants[*c].name + " sum to " + format_number(sum));
            }
            if (declared[*c]) { invalid(s, m.constants[*c].name + " is declared twice"); }
            declared[*c] = true;
            m.decls.push_back(std::move(d));
        });
    }
    return m;
}

PlogProgram parse_plog(std::string_view text, const std::string& file, const GroundLimits& limits) {
    auto         src = read_source(Dialect::Plog, text, file);
    auto         p   = begin_program<PlogProgram>(src);
    Instantiator inst(p.signature, p.atoms, limits);
    auto         groups = inst.constant_instances();
    inst.declare_signature_atoms();
    std::map<GroundAtom, std::size_t> byBase;
    for (auto& g : groups) {
        byBase[g.base] = p.constants.size();
        p.constants.push_back({g.base, inst.domain_values(g.decl->value_domain), g.atoms, false});
    }
    auto body_of = [&](const Stmt& s, const Assignment& asg) {
        RulePattern r = s.rule.rule;
        r.head.clear();
        auto g = inst.rule(r, asg);
        return PlogBody{std::move(g.pos), negated_atoms(g.neg)};
    };
    auto value_atom = [&](const Stmt& s, const Assignment& asg) {
        auto g  = inst.ground_atom(s.rule.rule.head.front(), asg);
        auto it = byBase.find(without_value(g));
        if (it == byBase.end() || !g.value) { invalid(s, g.str() + " is not a value of a declared constant"); }
        return std::pair{it->second, index_of(p.constants[it->second].values, *g.value)};
    };
    std::size_t randomCount = 0;
    for (const auto& s : src.stmts) {
        if (s.kind == Stmt::Kind::Rule) {
            for_instances(inst, s, [&](const Assignment& asg) { p.rules.push_back(inst.rule(s.rule.rule, asg)); });
        }
        else if (s.kind == Stmt::Kind::Random) {
            ++randomCount;
            auto vars = stmt_vars(s);
            for_instances(inst, s, [&](const Assignment& asg) {
                const auto& head = s.rule.rule.head.front();
                if (head.value) { invalid(s, "random(c) takes a constant, not c=v"); }
                GroundAtom base{head.symbol, {}, {}};
                for (const auto& t : head.args) { base.args.push_back(value_of(t, asg)); }
                auto it = byBase.find(base);
                if (it == byBase.end()) { invalid(s, base.str() + " is not a declared constant"); }
                RandomRule rr;
                if (s.id) { rr.id = inst.ground_atom(*s.id, asg); }
                else {
                    rr.id.symbol = "r" + std::to_string(randomCount);
                    for (const auto& v : vars) { rr.id.args.push_back(asg.at(v)); }
                }
                for (const auto& other : p.random) {
                    if (other.id == rr.id) { invalid(s, "selection rule " + rr.id.str() + " defined twice"); }
                }
                rr.constant = it->second;
                rr.body     = body_of(s, asg);
                p.random.push_back(std::move(rr));
            });
        }
    }
    for (const auto& s : src.stmts) {
        if (s.kind == Stmt::Kind::Pr) {
            for_instances(inst, s, [&](const Assignment& asg) {
                auto [c, v] = value_atom(s, asg);
                PrAtom pr;
                pr.value = v;
                pr.prob  = s.prob;
                pr.body  = body_of(s, asg);
                std::optional<std::size_t> rule;
                std::optional<GroundAtom>  id;
                if (s.id) { id = inst.ground_atom(*s.id, asg); }
                for (std::size_t r = 0; r != p.random.size(); ++r) {
                    bool match = id ? p.random[r].id == *id : p.random[r].constant == c;
                    if (!match) { continue; }
                    if (rule) { invalid(s, "the selection rule of this pr-atom is ambiguous; name it with pr[r]"); }
                    rule = r;
                }
                if (!rule) { invalid(s, "no selection rule for " + p.constants[c].base.str()); }
                if (p.random[*rule].constant != c) {
                    invalid(s, p.random[*rule].id.str() + " does not select " + p.constants[c].base.str());
                }
                pr.rule = *rule;
                p.pr.push_back(std::move(pr));
            });
        }
        else if (s.kind == Stmt::Kind::Obs || s.kind == Stmt::Kind::Do) {
            for_instances(inst, s, [&](const Assignment& asg) {
                auto a = inst.atom(s.rule.rule.head.front(), asg);
                (s.kind == Stmt::Kind::Obs ? p.obs : p.act).push_back(a);
            });
        }
    }
    for (std::size_t a = 0; a != p.atoms.size(); ++a) {
        const auto& g = p.atoms[static_cast<AtomId>(a)];
        if (!g.value && !p.signature.constant(g.symbol)) {
            p.constants.push_back({g, {"t"}, {static_cast<AtomId>(a)}, true});
        }
    }
    return p;
}

FrontendProgram parse(Dialect dialect, std::string_view text, const std::string& file, const GroundLimits& limits) {
    switch (dialect) {
        case Dialect::Lpmln  : return parse_lpmln(text, file);
        case Dialect::AspWeak: return parse_weak(text, file, limits);
        case Dialect::Mln    : return parse_mln(text, file, limits);
        case Dialect::ProbLog: return parse_problog(text, file, limits);
        case Dialect::Mvpp   : return parse_mvpp(text, file, limits);
        case Dialect::Plog   : return parse_plog(text, file, limits);
    }
    throw Error(Errc::ParseError, "unknown dialect");
}

/////////////////////////////////////////////////////////////////////////////////////////
// Queries
/////////////////////////////////////////////////////////////////////////////////////////
namespace {
Formula resolve_query(const FormulaPattern& f, const Instantiator& inst, const AtomTable& atoms) {
    Formula out;
    out.op = f.op;
    if (f.op == Connective::Atom) {
        std::vector<std::string> vars;
        collect_variables(f.atom, vars);
        if (!vars.empty()) { throw Error(Errc::SignatureError, "query atom " + f.atom.str() + " is not ground"); }
        auto g  = inst.ground_atom(f.atom, {});
        auto id = atoms.find(g);
        if (!id) { throw Error(Errc::SignatureError, "unknown atom " + g.str()); }
        out.atom = *id;
        return out;
    }
    for (const auto& x : f.args) { out.args.push_back(resolve_query(x, inst, atoms)); }
    return out;
}
} // namespace

Formula parse_query(std::string_view text, const Signature& sig, const AtomTable& atoms) {
    auto         f       = Parser(text, "<query>", Dialect::Mln).parse_query();
    AtomTable    scratch = atoms;
    Instantiator inst(sig, scratch);
    return resolve_query(f, inst, atoms);
}

/////////////////////////////////////////////////////////////////////////////////////////
// Printing
/////////////////////////////////////////////////////////////////////////////////////////
std::string format_number(double w) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, w);
    return std::string(buf, ptr);
}

std::string format_weight(const Weight& w) { return w.hard ? "alpha" : format_number(w.soft); }

namespace {
template <class A, class Name>
void formula_text(std::string& out, const BasicFormula<A>& f, const Name& name, int parentPrec) {
    switch (f.op) {
        case Connective::True : out += "true"; return;
        case Connective::False: out += "false"; return;
        case Connective::Atom : out += name(f.atom); return;
        case Connective::Not:
            out += "not ";
            formula_text(out, f.args.front(), name, 4);
            return;
        default: break;
    }
    int         prec = f.op == Connective::Implies ? 1 : f.op == Connective::Or ? 2 : 3;
    const char* sep  = f.op == Connective::Implies ? " -> " : f.op == Connective::Or ? " | " : " & ";
    if (f.args.empty()) {
        out += f.op == Connective::Or ? "false" : "true";
        return;
    }
    bool paren = prec <= parentPrec || (f.args.size() == 1 && parentPrec > 0);
    if (paren) { out += '('; }
    for (std::size_t i = 0; i != f.args.size(); ++i) {
        if (i) { out += sep; }
        formula_text(out, f.args[i], name, prec);
    }
    if (paren) { out += ')'; }
}

template <class A, class Name>
std::string formula_string(const BasicFormula<A>& f, const Name& name, int parentPrec = 0) {
    std::string out;
    formula_text(out, f, name, parentPrec);
    return out;
}

template <class A, class Name>
std::string neg_element(const BasicFormula<A>& f, const Name& name) {
    if (f.op == Connective::Not) { return formula_string(f, name); }
    return "(" + formula_string(f, name) + ")";
}

auto pattern_name = [](const AtomPattern& a) { return a.str(); };

std::string rule_text(const RulePattern& r) {
    std::string head;
    for (std::size_t i = 0; i != r.head.size(); ++i) { head += (i ? "; " : "") + r.head[i].str(); }
    std::vector<std::string> body;
    for (const auto& a : r.pos) { body.push_back(a.str()); }
    for (const auto& b : r.builtins) { body.push_back(b.str()); }
    for (const auto& e : elements_of(r.neg)) { body.push_back(neg_element(e, pattern_name)); }
    std::string out = head;
    if (!body.empty() || head.empty()) { out += head.empty() ? ":-" : " :-"; }
    for (std::size_t i = 0; i != body.size(); ++i) { out += (i ? ", " : " ") + body[i]; }
    return out + ".";
}

RulePattern pattern_of(const Rule& r, const AtomTable& t) {
    RulePattern p;
    for (auto a : r.head) { p.head.push_back(to_pattern(t[a])); }
    for (auto a : r.pos) { p.pos.push_back(to_pattern(t[a])); }
    p.neg = to_pattern(r.neg, t);
    return p;
}

std::string body_text(const RulePattern& r) {
    auto s = rule_text(r); // ":- body." or ":-."
    s      = s.substr(2, s.size() - 3);
    return s.empty() ? s : s.substr(1);
}

std::string print_signature(const Signature& sig) {
    std::string out;
    for (const auto& d : sig.domains) {
        out += "#domain " + d.name + " = ";
        if (d.is_range && !d.values.empty()) { out += d.values.front() + ".." + d.values.back(); }
        else {
            out += "{";
            for (std::size_t i = 0; i != d.values.size(); ++i) { out += (i ? ", " : "") + d.values[i]; }
            out += "}";
        }
        out += ".\n";
    }
    for (const auto& v : sig.variables) { out += "#var " + v.name + " : " + v.domain + ".\n"; }
    for (const auto& c : sig.constants) {
        out += "#const " + c.symbol;
        if (!c.arg_domains.empty()) {
            out += "(";
            for (std::size_t i = 0; i != c.arg_domains.size(); ++i) { out += (i ? ", " : "") + c.arg_domains[i]; }
            out += ")";
        }
        out += " : " + c.value_domain + ".\n";
    }
    for (const auto& a : sig.atoms) { out += "#atom " + AtomPattern{a.symbol, a.args, std::nullopt}.str() + ".\n"; }
    return out;
}

std::string with_signature(const Signature& sig, const std::string& body) {
    auto head = print_signature(sig);
    if (head.empty() || body.empty()) { return head + body; }
    return head + "\n" + body;
}

std::string plog_body_text(const PlogBody& b, const AtomTable& t) {
    std::vector<std::string> xs;
    for (auto a : b.pos) { xs.push_back(t.name(a)); }
    for (auto a : b.neg) { xs.push_back("not " + t.name(a)); }
    std::string out;
    for (std::size_t i = 0; i != xs.size(); ++i) { out += (i ? ", " : "") + xs[i]; }
    return out;
}
} // namespace

std::string print(const Program& p) {
    std::string body;
    for (const auto& r : p.rules) { body += format_weight(r.weight) + " : " + rule_text(r.rule) + "\n"; }
    return with_signature(p.signature, body);
}

std::string print(const GroundProgram& g) { return print(lift(g)); }

std::string print(const WeakProgram& p) {
    std::string body;
    for (const auto& r : p.rules) { body += rule_text(pattern_of(r, p.atoms)) + "\n"; }
    for (const auto& c : p.weak) {
        Rule r;
        r.pos = c.pos;
        r.neg = c.neg;
        body += ":~ " + body_text(pattern_of(r, p.atoms)) + ". [" + std::to_string(c.weight) + "]\n";
    }
    return with_signature(p.signature, body);
}

std::string print(const MlnProgram& p) {
    std::string body;
    for (const auto& f : p.formulas) {
        body += format_weight(f.weight) + " : " + to_string(f.formula, p.atoms) + ".\n";
    }
    return with_signature(p.signature, body);
}

std::string print(const ProbLogProgram& p) {
    std::string body;
    for (const auto& f : p.facts) { body += format_number(f.prob) + " :: " + p.atoms.name(f.atom) + ".\n"; }
    for (const auto& r : p.rules) { body += rule_text(pattern_of(r, p.atoms)) + "\n"; }
    return with_signature(p.signature, body);
}

std::string print(const MvppProgram& p) {
    std::string body;
    for (const auto& d : p.decls) {
        const auto& atoms = p.constants[d.constant].atoms;
        for (std::size_t i = 0; i != atoms.size(); ++i) {
            body += (i ? " | " : "") + format_number(d.probs[i]) + " : " + p.atoms.name(atoms[i]);
        }
        body += ".\n";
    }
    for (const auto& r : p.rules) { body += rule_text(pattern_of(r, p.atoms)) + "\n"; }
    return with_signature(p.signature, body);
}

std::string print(const PlogProgram& p) {
    std::string body;
    for (const auto& r : p.rules) { body += rule_text(pattern_of(r, p.atoms)) + "\n"; }
    for (const auto& r : p.random) {
        body += "[" + r.id.str() + "] random(" + p.constants[r.constant].base.str() + ")";
        auto b = plog_body_text(r.body, p.atoms);
        body += (b.empty() ? "" : " :- " + b) + ".\n";
    }
    for (const auto& pr : p.pr) {
        const auto& r = p.random[pr.rule];
        body += "pr[" + r.id.str() + "](" + p.atoms.name(p.constants[r.constant].atoms[pr.value]);
        auto b = plog_body_text(pr.body, p.atoms);
        body += (b.empty() ? "" : " | " + b) + ") = " + format_number(pr.prob) + ".\n";
    }
    for (auto a : p.obs) { body += "obs(" + p.atoms.name(a) + ").\n"; }
    for (auto a : p.act) { body += "do(" + p.atoms.name(a) + ").\n"; }
    return with_signature(p.signature, body);
}

std::string print(const FrontendProgram& p) {
    return std::visit([](const auto& x) { return print(x); }, p);
}

namespace {
std::string alchemy_name(const std::string& s) {
    if (s.empty() || !std::islower(static_cast<unsigned char>(s.front()))) { return s; }
    std::string out = s;
    out.front()     = static_cast<char>(std::toupper(static_cast<unsigned char>(out.front())));
    return out;
}

std::string alchemy_atom(const GroundAtom& a) {
    std::string out = alchemy_name(a.symbol);
    auto        args = a.args;
    if (a.value) { args.push_back(*a.value); }
    if (!args.empty()) {
        out += "(";
        for (std::size_t i = 0; i != args.size(); ++i) { out += (i ? "," : "") + alchemy_name(args[i]); }
        out += ")";
    }
    return out;
}

void alchemy_formula(std::string& out, const Formula& f, const AtomTable& t, int parentPrec) {
    switch (f.op) {
        case Connective::True : out += "true"; return;
        case Connective::False: out += "false"; return;
        case Connective::Atom : out += alchemy_atom(t[f.atom]); return;
        case Connective::Not:
            out += "!";
            alchemy_formula(out, f.args.front(), t, 4);
            return;
        default: break;
    }
    int         prec = f.op == Connective::Implies ? 1 : f.op == Connective::Or ? 2 : 3;
    const char* sep  = f.op == Connective::Implies ? " => " : f.op == Connective::Or ? " v " : " ^ ";
    bool        paren = prec <= parentPrec;
    if (paren) { out += '('; }
    for (std::size_t i = 0; i != f.args.size(); ++i) {
        if (i) { out += sep; }
        alchemy_formula(out, f.args[i], t, prec);
    }
    if (paren) { out += ')'; }
}
} // namespace

std::string print_alchemy(const MlnProgram& p) {
    std::string out = "// ground MLN\n";
    for (const auto& f : p.formulas) {
        std::string text;
        alchemy_formula(text, f.formula, p.atoms, 0);
        out += f.weight.hard ? text + ".\n" : format_number(f.weight.soft) + " " + text + "\n";
    }
    return out;
}

/////////////////////////////////////////////////////////////////////////////////////////
// JSON
/////////////////////////////////////////////////////////////////////////////////////////
namespace {
using nlohmann::json;

json names(const AtomTable& t, std::span<const AtomId> ids) {
    json out = json::array();
    for (auto a : ids) { out.push_back(t.name(a)); }
    return out;
}

json formula_json(const Formula& f, const AtomTable& t) {
    static const char* ops[] = {"true", "false", "atom", "not", "and", "or", "implies"};
    if (f.op == Connective::Atom) { return json{{"atom", t.name(f.atom)}}; }
    json out{{"op", ops[static_cast<int>(f.op)]}};
    if (!f.args.empty()) {
        json args = json::array();
        for (const auto& g : f.args) { args.push_back(formula_json(g, t)); }
        out["args"] = std::move(args);
    }
    return out;
}

json weight_json(const Weight& w) { return w.hard ? json("alpha") : json(w.soft); }

json rule_json(const Rule& r, const AtomTable& t) {
    return json{{"head", names(t, r.head)}, {"pos", names(t, r.pos)}, {"neg", formula_json(r.neg, t)}};
}

json sorted_atoms(const AtomTable& t) {
    std::vector<std::string> xs;
    for (std::size_t a = 0; a != t.size(); ++a) { xs.push_back(t.name(static_cast<AtomId>(a))); }
    std::sort(xs.begin(), xs.end());
    return xs;
}

json plog_body_json(const PlogBody& b, const AtomTable& t) {
    return json{{"pos", names(t, b.pos)}, {"neg", names(t, b.neg)}};
}

json canonical(const Program& p) { return json{{"dialect", "lpmln"}, {"text", print(p)}}; }

json canonical(const WeakProgram& p) {
    json rules = json::array(), weak = json::array();
    for (const auto& r : p.rules) { rules.push_back(rule_json(r, p.atoms)); }
    for (const auto& c : p.weak) {
        weak.push_back({{"pos", names(p.atoms, c.pos)}, {"neg", formula_json(c.neg, p.atoms)}, {"weight", c.weight}});
    }
    return json{{"rules", rules}, {"weak", weak}};
}

json canonical(const MlnProgram& p) {
    json fs = json::array();
    for (const auto& f : p.formulas) {
        fs.push_back({{"weight", weight_json(f.weight)}, {"formula", formula_json(f.formula, p.atoms)}});
    }
    return json{{"formulas", fs}};
}

json canonical(const ProbLogProgram& p) {
    json facts = json::array(), rules = json::array();
    for (const auto& f : p.facts) { facts.push_back({{"atom", p.atoms.name(f.atom)}, {"prob", f.prob}}); }
    for (const auto& r : p.rules) { rules.push_back(rule_json(r, p.atoms)); }
    return json{{"facts", facts}, {"rules", rules}};
}

json canonical(const MvppProgram& p) {
    json cs = json::array(), ds = json::array(), rules = json::array();
    for (const auto& c : p.constants) { cs.push_back({{"name", c.name}, {"atoms", names(p.atoms, c.atoms)}}); }
    for (const auto& d : p.decls) { ds.push_back({{"constant", p.constants[d.constant].name}, {"probs", d.probs}}); }
    for (const auto& r : p.rules) { rules.push_back(rule_json(r, p.atoms)); }
    return json{{"constants", cs}, {"decls", ds}, {"rules", rules}};
}

json canonical(const PlogProgram& p) {
    json cs = json::array(), rules = json::array(), random = json::array(), pr = json::array();
    for (const auto& c : p.constants) {
        cs.push_back({{"base", c.base.str()}, {"values", c.values}, {"atoms", names(p.atoms, c.atoms)},
                      {"boolean_atom", c.boolean_atom}});
    }
    for (const auto& r : p.rules) { rules.push_back(rule_json(r, p.atoms)); }
    for (const auto& r : p.random) {
        random.push_back({{"id", r.id.str()},
                          {"constant", p.constants[r.constant].base.str()},
                          {"body", plog_body_json(r.body, p.atoms)}});
    }
    for (const auto& x : p.pr) {
        pr.push_back({{"rule", p.random[x.rule].id.str()},
                      {"value", x.value},
                      {"body", plog_body_json(x.body, p.atoms)},
                      {"prob", x.prob}});
    }
    return json{{"constants", cs},        {"rules", rules},
                {"random", random},       {"pr", pr},
                {"obs", names(p.atoms, p.obs)}, {"act", names(p.atoms, p.act)}};
}
} // namespace

std::string to_json(const GroundProgram& g, int indent) {
    json rules = json::array();
    for (const auto& wr : g.rules) {
        auto r      = rule_json(wr.rule, g.atoms);
        r["weight"] = weight_json(wr.weight);
        rules.push_back(std::move(r));
    }
    json out{{"atoms", names(g.atoms, [&] {
                  std::vector<AtomId> ids(g.atoms.size());
                  for (std::size_t i = 0; i != ids.size(); ++i) { ids[i] = static_cast<AtomId>(i); }
                  return ids;
              }())},
             {"rules", std::move(rules)}};
    return out.dump(indent);
}

std::string canonical_json(const FrontendProgram& p) {
    return std::visit(
        [&](const auto& x) {
            json out = canonical(x);
            out["dialect"] = dialect_name(dialect_of(p));
            if constexpr (!std::is_same_v<std::decay_t<decltype(x)>, Program>) {
                out["signature"] = print_signature(x.signature);
                out["atoms"]     = sorted_atoms(x.atoms);
            }
            return out.dump();
        },
        p);
}

} // namespace lpmln
