#pragma once

#include <stdexcept>
#include <string>

namespace tlkit {

/// Precondition or algebraic-domain violation (vanishing q-integer, bad N, ...).
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& m) : std::runtime_error(m) {}
};

/// Resource guard tripped (size ceilings, variable-count ceilings, ...).
struct GuardError : std::runtime_error {
    explicit GuardError(const std::string& m) : std::runtime_error(m) {}
};

/// Filesystem or serialization failure.
struct IoError : std::runtime_error {
    explicit IoError(const std::string& m) : std::runtime_error(m) {}
};

}  // namespace tlkit
