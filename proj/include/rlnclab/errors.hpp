#pragma once

#include <stdexcept>
#include <string>

namespace rlnclab {

// Base class for all errors raised by this library.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct NonPrimeCharacteristic : Error {
    explicit NonPrimeCharacteristic(const std::string& what) : Error(what) {}
};

struct DegreeOutOfRange : Error {
    explicit DegreeOutOfRange(const std::string& what) : Error(what) {}
};

struct OrderTooLarge : Error {
    explicit OrderTooLarge(const std::string& what) : Error(what) {}
};

struct FieldMismatch : Error {
    explicit FieldMismatch(const std::string& what) : Error(what) {}
};

struct InverseOfZero : Error {
    explicit InverseOfZero(const std::string& what) : Error(what) {}
};

struct CyclicNetwork : Error {
    explicit CyclicNetwork(const std::string& what) : Error(what) {}
};

struct UnknownSink : Error {
    explicit UnknownSink(const std::string& what) : Error(what) {}
};

struct CoefficientSetMismatch : Error {
    explicit CoefficientSetMismatch(const std::string& what) : Error(what) {}
};

struct NotButterfly : Error {
    explicit NotButterfly(const std::string& what) : Error(what) {}
};

struct InvalidDimension : Error {
    explicit InvalidDimension(const std::string& what) : Error(what) {}
};

struct ParseError : Error {
    explicit ParseError(const std::string& what) : Error(what) {}
};

// Raised when an exact enumeration would exceed the configured evaluation
// budget. Carries both sides of the comparison so callers can report them.
struct SearchSpaceTooLarge : Error {
    SearchSpaceTooLarge(std::string required, std::string allowed)
        : Error("search space too large: " + required + " evaluations required, budget allows " + allowed),
          required_evaluations(std::move(required)),
          allowed_evaluations(std::move(allowed)) {}

    std::string required_evaluations;
    std::string allowed_evaluations;
};

}  // namespace rlnclab
