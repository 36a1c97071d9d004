#pragma once

#include <stdexcept>
#include <string>

namespace rbds {

enum class ErrorCode {
    NonFiniteInput,
    NonPositiveEpsilon,
    SeriesTooShort,
    ConstantSeries,
    InvalidPatternParams,
    PatternTooLarge,
    OracleTooLarge,
    DegenerateScale,
    NonPositiveVariance,
    ExponentNegative,
    NonStationaryParams,
    ZeroResidual,
    InvalidArgument,
    ParseError,
};

const char* error_name(ErrorCode code) noexcept;

// Every failure raised by the library carries a code so the CLI can map it
// to an exit status and a machine-readable diagnostic.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
    throw Error(code, what);
}

} // namespace rbds
