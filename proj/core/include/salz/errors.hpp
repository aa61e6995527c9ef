// Exception types shared by all salz modules.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace salz {

/// Field has a y component where an in-plane field is required.
class OutOfPlaneError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Eigenbasis requested at a point where the field vanishes.
class DegenerateFieldError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Integration or continuation loop did not meet its stopping rule.
/// Carries whatever partial information was available.
class NonConvergenceError : public std::runtime_error {
public:
    NonConvergenceError(const std::string& what, double partial_p, std::vector<double> p_sequence = {})
        : std::runtime_error(what), partial_p_(partial_p), p_sequence_(std::move(p_sequence)) {}

    double partial_p() const noexcept { return partial_p_; }
    const std::vector<double>& p_sequence() const noexcept { return p_sequence_; }

private:
    double partial_p_;
    std::vector<double> p_sequence_;
};

/// Malformed input file. line() is 1-based, 0 when not tied to a line.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// File could not be opened, read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace salz
