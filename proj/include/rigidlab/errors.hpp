#ifndef RIGIDLAB_ERRORS_HPP
#define RIGIDLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rigidlab {

/// Base of every error raised by the library. `code()` is the stable,
/// machine-readable identifier the CLI writes into its reports.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

/// Exact arithmetic was requested on data that is not rational.
class ArithmeticModeError : public Error {
public:
    explicit ArithmeticModeError(const std::string& message)
        : Error("arithmetic_mode", message) {}
};

class InvalidInputError : public Error {
public:
    explicit InvalidInputError(const std::string& message)
        : Error("invalid_input", message) {}
};

/// Two objects that must share a graph, vertex count or dimension do not.
class MismatchError : public Error {
public:
    explicit MismatchError(const std::string& message)
        : Error("mismatch", message) {}
};

/// A structural hypothesis failed on the input; the code names which one.
class HypothesisError : public Error {
public:
    HypothesisError(std::string code, const std::string& message)
        : Error(std::move(code), message) {}
};

class DomainError : public Error {
public:
    explicit DomainError(const std::string& message)
        : Error("out_of_domain", message) {}
};

class ParseError : public Error {
public:
    explicit ParseError(const std::string& message)
        : Error("parse_error", message) {}
};

class InvariantViolation : public Error {
public:
    explicit InvariantViolation(const std::string& message)
        : Error("invariant_violation", message) {}
};

}  // namespace rigidlab

#endif  // RIGIDLAB_ERRORS_HPP
