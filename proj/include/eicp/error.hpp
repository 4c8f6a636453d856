#pragma once

#include <stdexcept>
#include <string>

namespace eicp {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class FieldError : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// An index or shape that cannot describe any instance (as opposed to a
/// well-formed instance that breaks a problem constraint).
class StructuralError : public Error {
public:
    using Error::Error;
};

class NoDemandError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    enum class Kind { MalformedJson, Schema, OutOfRange, NonPrimeField };

    ParseError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}

    [[nodiscard]] Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

class GenerationFailure : public Error {
public:
    using Error::Error;
};

/// A resource guard tripped. Results are never truncated silently.
class GuardExceeded : public Error {
public:
    using Error::Error;
};

class InvalidCode : public Error {
public:
    using Error::Error;
};

class NotDecodable : public Error {
public:
    using Error::Error;
};

class NotSingleUnicast : public Error {
public:
    using Error::Error;
};

} // namespace eicp
