#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace credit {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Maturity/frequency combination that does not give a valid schedule.
class ScheduleError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Root finder or iterative solver failed.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// Regression could not be carried out.
class FitError : public Error {
public:
    using Error::Error;
};

/// Not enough usable quotes for the requested fit.
class InsufficientDataError : public FitError {
public:
    using FitError::FitError;
};

/// Design matrix lacks full column rank.
class RankDeficientError : public FitError {
public:
    RankDeficientError(const std::string& what, std::vector<std::string> collinear)
        : FitError(what), collinear_(std::move(collinear)) {}

    /// Quote ids that add no new direction to the design.
    [[nodiscard]] const std::vector<std::string>& collinear() const noexcept { return collinear_; }

private:
    std::vector<std::string> collinear_;
};

/// Quotes cannot be matched by a non-negative hazard.
class ArbitrageError : public Error {
public:
    ArbitrageError(const std::string& what, double maturity) : Error(what), maturity_(maturity) {}

    [[nodiscard]] double maturity() const noexcept { return maturity_; }

private:
    double maturity_;
};

/// Malformed input file.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line) : Error(what), line_(line) {}

    /// 1-based line number in the offending file, 0 when not applicable.
    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Required input not supplied or not found.
class MissingInputError : public Error {
public:
    using Error::Error;
};

} // namespace credit
