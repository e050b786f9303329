#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lpmln {

/// Position of a construct in an input file. Lines and columns are 1-based.
struct SourceSpan {
    std::string file;
    unsigned    line   = 0;
    unsigned    column = 0;

    std::string str() const;
};

enum class Errc {
    ParseError,
    ValidationError,
    SignatureError,
    EmptyDomain,
    GroundingExplosion,
    UniverseExplosion,
    SubsetExplosion,
    LoopExplosion,
    NoHardConsistentModel,
    ConditionHasZeroProbability,
    NoStableModel,
    NotTight,
    NotWellDefined,
    ZeroProbabilityDeclared,
    EmptySmDoublePrime,
    Inconsistent,
    AllZeroMeasure,
    DefaultProbabilityUndefined,
    PropertyViolation,
};

const char* errc_name(Errc code);

/// Input errors (bad syntax, bad declarations, unknown atoms) as opposed to
/// semantic failures of an otherwise valid program.
bool is_input_error(Errc code);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message, std::optional<SourceSpan> span = std::nullopt);

    Errc                             code() const noexcept { return code_; }
    const std::optional<SourceSpan>& span() const noexcept { return span_; }
    const std::string&               message() const noexcept { return message_; }

private:
    Errc                      code_;
    std::optional<SourceSpan> span_;
    std::string               message_;
};

class ParseError : public Error {
public:
    ParseError(const std::string& message, SourceSpan span, std::vector<std::string> expected = {});

    const std::vector<std::string>& expected() const noexcept { return expected_; }

private:
    std::vector<std::string> expected_;
};

} // namespace lpmln
