#pragma once

#include <stdexcept>
#include <string>

namespace tdkit {

/// Raised when a caller breaks an operation's precondition (dimension
/// mismatch, out-of-range state, non-binary features for replacing traces...).
class ContractError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical routine cannot produce an answer (singular
/// Bellman system, power iteration that does not settle).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised on malformed input files (CSV, JSON archives).
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace tdkit
