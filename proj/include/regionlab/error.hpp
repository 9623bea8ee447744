#pragma once

#include <stdexcept>
#include <string>

namespace regionlab {

/// Violated precondition: dimension mismatch, out-of-range index, malformed
/// configuration.
class ContractError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Argument outside the mathematical domain of a function (e.g. inverse
/// sigmoid of a value with magnitude >= 1).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A computation that could not produce a valid result, such as a retry
/// budget running out.
class RuntimeFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline void require(bool condition, const char* message) {
    if (!condition) throw ContractError(message);
}

inline void require(bool condition, const std::string& message) {
    if (!condition) throw ContractError(message);
}

}  // namespace regionlab
