#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace prodcalc {

/// Location and hint for a rejected piece of input text.
struct ParseDiagnostic {
    std::size_t offset = 0;  // byte offset into the input
    std::string message;
    std::string expected;  // expected-token hint, may be empty
};

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct DomainError : Error {
    enum class Cause { LnNonPositive, DivisionByZero, PowInvalid, ZeroValue, Other };
    DomainError(Cause c, const std::string& what) : Error(what), cause(c) {}
    Cause cause;
};

struct ParseError : Error {
    explicit ParseError(ParseDiagnostic d)
        : Error(d.message + " at offset " + std::to_string(d.offset) +
                (d.expected.empty() ? "" : " (expected " + d.expected + ")")),
          diagnostic(std::move(d)) {}
    ParseDiagnostic diagnostic;
};

struct ShapeMismatch : Error {
    using Error::Error;
};

struct DegreeOverflow : Error {
    using Error::Error;
};

struct DegreeUnderflow : Error {
    using Error::Error;
};

struct NonPositiveIntegrand : Error {
    using Error::Error;
};

struct DegeneratePartition : Error {
    using Error::Error;
};

struct DegenerateSign : Error {
    using Error::Error;
};

struct NonIntegrableSingularity : Error {
    using Error::Error;
};

struct PositivityViolation : Error {
    using Error::Error;
};

struct DegenerateSimplex : Error {
    using Error::Error;
};

struct BudgetExhausted : Error {
    using Error::Error;
};

}  // namespace prodcalc
