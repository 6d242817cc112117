#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace crossrd {

/// Argument outside the mathematical domain of an operation (non-positive
/// lengths, half-integer Bessel orders, ill-posed diffusion, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A closed form whose denominator vanishes for the given inputs.
class DegenerateError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Malformed input file. Carries the 1-based line number of the offending line.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& source, std::size_t line, const std::string& what)
        : std::runtime_error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Mesh connectivity that cannot be used (degenerate or out-of-range triangles).
class TopologyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Linear solver did not reach the requested tolerance.
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, long iterations, double residual)
        : std::runtime_error(what + " (iterations=" + std::to_string(iterations) +
                             ", relative residual=" + std::to_string(residual) + ")"),
          iterations_(iterations), residual_(residual) {}

    long iterations() const noexcept { return iterations_; }
    double residual() const noexcept { return residual_; }

private:
    long iterations_;
    double residual_;
};

/// Simulation produced non-finite or runaway values.
class BlowUpError : public std::runtime_error {
public:
    BlowUpError(double time, const std::string& what)
        : std::runtime_error(what + " at t=" + std::to_string(time)), time_(time) {}

    double time() const noexcept { return time_; }

private:
    double time_;
};

}  // namespace crossrd
