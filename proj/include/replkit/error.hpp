#ifndef REPLKIT_ERROR_HPP
#define REPLKIT_ERROR_HPP

#include <stdexcept>
#include <string>

namespace replkit {

enum class ErrorKind {
    OutOfWindow,
    IncompatibleScale,
    NonUnitLeading,
    InsufficientPrecision,
    NotNormalized,
    MissingReplicate,
    NonIntegralSolution,
    Inconsistent,
    Stuck,
    FractionalPowerMismatch,
    ParseError,
    ValidationError,
    UnresolvableReplicate,
    UnknownLabel,
    WindowTooSmall,
    InvalidArgument,
};

const char* to_string(ErrorKind kind);

/// The single exception type thrown by the toolkit. `kind` is stable and
/// machine-readable; `what()` carries the human-readable detail.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& detail)
        : std::runtime_error(detail), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace replkit

#endif
