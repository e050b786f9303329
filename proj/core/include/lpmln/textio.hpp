#pragma once
// Text forms: parsers and printers for the six input dialects, queries and JSON export.

#include <lpmln/frontends.hpp>
#include <lpmln/ground.hpp>

#include <string_view>
#include <variant>

namespace lpmln {

enum class Dialect : std::uint8_t { Lpmln, AspWeak, Mln, ProbLog, Mvpp, Plog };

/// `lpmln`, `asp`, `mln`, `problog`, `mvpp`, `plog`.
const char*            dialect_name(Dialect d);
std::optional<Dialect> dialect_from_name(std::string_view name);
/// By file extension.
std::optional<Dialect> dialect_from_path(std::string_view path);
/// A `#dialect` header wins over the extension; Lpmln if neither is conclusive.
Dialect detect_dialect(std::string_view text, std::string_view path);

using FrontendProgram = std::variant<Program, WeakProgram, MlnProgram, ProbLogProgram, MvppProgram, PlogProgram>;

Dialect dialect_of(const FrontendProgram& p);

/// Parses and, for every dialect but Lpmln, instantiates the program.
FrontendProgram parse(Dialect dialect, std::string_view text, const std::string& file = "<input>",
                      const GroundLimits& limits = {});

Program        parse_lpmln(std::string_view text, const std::string& file = "<input>");
WeakProgram    parse_weak(std::string_view text, const std::string& file = "<input>", const GroundLimits& = {});
MlnProgram     parse_mln(std::string_view text, const std::string& file = "<input>", const GroundLimits& = {});
ProbLogProgram parse_problog(std::string_view text, const std::string& file = "<input>", const GroundLimits& = {});
MvppProgram    parse_mvpp(std::string_view text, const std::string& file = "<input>", const GroundLimits& = {});
PlogProgram    parse_plog(std::string_view text, const std::string& file = "<input>", const GroundLimits& = {});

/// A formula over the ground atoms of a program. Unknown atoms raise SignatureError.
Formula parse_query(std::string_view text, const Signature& sig, const AtomTable& atoms);

std::string print(const Program& p);
std::string print(const GroundProgram& g); // as a variable-free LP^MLN program
std::string print(const WeakProgram& p);
std::string print(const MlnProgram& p);
std::string print(const ProbLogProgram& p);
std::string print(const MvppProgram& p);
std::string print(const PlogProgram& p);
std::string print(const FrontendProgram& p);

/// Alchemy-style rendering of a ground MLN (best effort).
std::string print_alchemy(const MlnProgram& p);

/// Shortest decimal that reads back as `w`.
std::string format_number(double w);
std::string format_weight(const Weight& w);

/// `{"atoms":[...], "rules":[{"weight", "head", "pos", "neg"}]}`.
std::string to_json(const GroundProgram& g, int indent = -1);

/// Id-independent JSON rendering of a program value: atoms are referred to by name.
/// Two values with equal canonical JSON are structurally equal up to atom numbering.
std::string canonical_json(const FrontendProgram& p);

} // namespace lpmln
