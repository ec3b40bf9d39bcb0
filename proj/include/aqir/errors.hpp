#ifndef AQIR_ERRORS_HPP
#define AQIR_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace aqir {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Interval inversion was asked for an interval that contains zero.
class DivisionByIntervalContainingZero : public Error {
public:
    DivisionByIntervalContainingZero() : Error("interval inversion: interval contains zero") {}
};

/// A coefficient oracle could not deliver the requested approximation.
class OracleFailure : public Error {
public:
    using Error::Error;
};

/// An exact-rational operation was requested on an approximation-only polynomial.
class ExactViewUnavailable : public Error {
public:
    ExactViewUnavailable() : Error("polynomial has no exact rational coefficients") {}
};

/// The adaptive precision loop hit its cap with too many unresolved signs.
class UnresolvedSigns : public Error {
public:
    explicit UnresolvedSigns(const std::string& what, std::size_t root_index = npos)
        : Error(what), root_index_(root_index) {}

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    std::size_t root_index() const noexcept { return root_index_; }

private:
    std::size_t root_index_;
};

class LeadingCoefficientTooSmall : public Error {
public:
    LeadingCoefficientTooSmall() : Error("leading coefficient cannot be certified to satisfy |a_d| >= 1/2") {}
};

class NotSquareFree : public Error {
public:
    NotSquareFree() : Error("polynomial is not square-free") {}
};

/// A caller-side precondition (isolating input, sign pattern, ...) does not hold.
class PreconditionViolation : public Error {
public:
    explicit PreconditionViolation(const std::string& what, std::size_t root_index = UnresolvedSigns::npos)
        : Error(what), root_index_(root_index) {}

    std::size_t root_index() const noexcept { return root_index_; }

private:
    std::size_t root_index_;
};

/// Malformed problem file, bench spec or numeric literal.
class ParseError : public Error {
public:
    using Error::Error;
};

} // namespace aqir

#endif // AQIR_ERRORS_HPP
