#pragma once

#include <stdexcept>
#include <string>

namespace tumor {

enum class ErrorKind {
    InvalidParams,
    NoSignChange,
    DegenerateDenominator,
    DenominatorVanished,
    BlowUp,
    NonConvergent,
    BracketFailure,
    SeedFailure,
    StepFailure,
    StepTooLarge,
    RadiusCollapse,
    BadConfig,
    IoError,
};

const char* to_string(ErrorKind kind);

/// Library-wide error type; kind() maps to CLI exit codes.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) {
    throw Error(kind, msg);
}

} // namespace tumor
