#ifndef POISLRT_ERRORS_HPP
#define POISLRT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace poislrt {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& msg) : std::domain_error(msg) {}
};

// Exact integer arithmetic exceeded the representable range.
class NumericOverflowError : public std::overflow_error {
public:
    explicit NumericOverflowError(const std::string& msg) : std::overflow_error(msg) {}
};

// Iterative solver failed to converge; carries the last bracket.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& msg, double lo, double hi)
        : std::runtime_error(msg), bracket_lo(lo), bracket_hi(hi) {}
    double bracket_lo;
    double bracket_hi;
};

// Malformed input file; line is 1-based, 0 when not applicable.
class CsvError : public std::runtime_error {
public:
    CsvError(const std::string& msg, int line_number)
        : std::runtime_error(msg), line(line_number) {}
    int line;
};

}  // namespace poislrt

#endif
