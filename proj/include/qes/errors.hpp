#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qes {

/// Base class of every error raised by the engine.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DivisionByZero : public Error {
public:
    DivisionByZero() : Error("division by zero") {}
};

/// Substituting a value for the parameter zeroed a denominator.
class SingularSpecialization : public Error {
public:
    explicit SingularSpecialization(std::string factor)
        : Error("singular specialization: denominator factor " + factor + " vanishes"),
          factor_(std::move(factor)) {}
    const std::string &factor() const { return factor_; }

private:
    std::string factor_;
};

/// An operator coefficient has a denominator that is not a pure power of x.
class NonLaurentCoefficient : public Error {
public:
    explicit NonLaurentCoefficient(const std::string &coef)
        : Error("non-Laurent coefficient: " + coef) {}
};

class PreconditionViolation : public Error {
public:
    using Error::Error;
};

/// Adding operators carrying different x^{s*a} prefactors.
class ShiftMismatch : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string &what, std::size_t position)
        : Error("parse error at " + std::to_string(position) + ": " + what), position_(position) {}
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

} // namespace qes
