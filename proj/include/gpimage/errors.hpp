#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace gpimage {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter outside its admissible set (non-positive lengthscale, unsupported nu, ...).
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Operator order exceeds the smoothness available on the object it is applied to.
class DomainError : public Error {
public:
    DomainError(std::string what, int required, int available)
        : Error(std::move(what)), required_(required), available_(available) {}

    [[nodiscard]] int required() const noexcept { return required_; }
    [[nodiscard]] int available() const noexcept { return available_; }
    [[nodiscard]] int deficit() const noexcept { return required_ - available_; }

private:
    int required_;
    int available_;
};

/// Cholesky failed for every jitter on the ladder.
class NotPositiveDefiniteError : public Error {
public:
    NotPositiveDefiniteError(std::string what, std::vector<double> ladder)
        : Error(std::move(what)), ladder_(std::move(ladder)) {}

    [[nodiscard]] const std::vector<double>& attempted() const noexcept { return ladder_; }

private:
    std::vector<double> ladder_;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

/// Non-finite value encountered while evaluating a function on a stencil.
class EvaluationError : public Error {
public:
    using Error::Error;
};

/// Grid too small or not uniform for the requested stencil.
class GridError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, int line, int column)
        : Error(what), line_(line), column_(column) {}

    [[nodiscard]] int line() const noexcept { return line_; }
    [[nodiscard]] int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

} // namespace gpimage
