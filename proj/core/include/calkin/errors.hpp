#pragma once

#include <stdexcept>
#include <string>

namespace calkin {

// Raised when a finite prefix (plus its tail bound) cannot certify the
// quantity being computed.
class InsufficientPrefix : public std::runtime_error {
public:
    explicit InsufficientPrefix(const std::string& what)
        : std::runtime_error(what) {}
};

class DimensionMismatch : public std::invalid_argument {
public:
    explicit DimensionMismatch(const std::string& what)
        : std::invalid_argument(what) {}
};

class NotNormalized : public std::invalid_argument {
public:
    explicit NotNormalized(const std::string& what)
        : std::invalid_argument(what) {}
};

class NormViolation : public std::invalid_argument {
public:
    explicit NormViolation(const std::string& what)
        : std::invalid_argument(what) {}
};

class ConvergenceFailure : public std::runtime_error {
public:
    explicit ConvergenceFailure(const std::string& what)
        : std::runtime_error(what) {}
};

class SpanFailure : public std::runtime_error {
public:
    explicit SpanFailure(const std::string& what)
        : std::runtime_error(what) {}
};

}  // namespace calkin
