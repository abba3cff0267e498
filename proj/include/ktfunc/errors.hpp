#pragma once

#include <stdexcept>
#include <string>

namespace ktfunc {

/// Malformed instance data: dimension mismatch, non-positive mass, bad index.
class InstanceError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Exponent or parameter outside the admissible range.
class SpecError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An exhaustive search would exceed the configured evaluation budget.
class CapacityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A produced decomposition failed its own norm certificate.
class CertificationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed instance text; `where()` names the line or field.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string where, const std::string& what)
        : std::runtime_error(where + ": " + what), where_(std::move(where)) {}
    const std::string& where() const noexcept { return where_; }

private:
    std::string where_;
};

}  // namespace ktfunc
