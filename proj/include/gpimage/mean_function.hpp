#pragma once

#include <functional>
#include <string>

#include "gpimage/expr.hpp"
#include "gpimage/smoothness.hpp"

namespace gpimage {

/// Real function on the index set with closed-form derivatives up to `smoothness()`.
class MeanFunction {
public:
    /// (order, x) -> d^order f / dx^order at x, valid for order <= smoothness.
    using DerivativeFn = std::function<double(int, double)>;

    MeanFunction();  // identically zero

    static MeanFunction from_expr(const Expr& e);

    /// Value-only function; no closed-form derivatives.
    MeanFunction(std::function<double(double)> value, std::string label);

    MeanFunction(DerivativeFn derivatives, Smoothness smoothness, std::string label);

    [[nodiscard]] double operator()(double x) const { return derivatives_(0, x); }

    /// Closed-form derivative; DomainError when order exceeds smoothness().
    [[nodiscard]] double derivative(int order, double x) const;

    [[nodiscard]] Smoothness smoothness() const noexcept { return smoothness_; }
    [[nodiscard]] bool has_closed_derivatives() const noexcept { return smoothness_ > Smoothness(0); }
    [[nodiscard]] const std::string& label() const noexcept { return label_; }

    [[nodiscard]] const DerivativeFn& derivatives() const noexcept { return derivatives_; }

private:
    DerivativeFn derivatives_;
    Smoothness smoothness_;
    std::string label_;
};

} // namespace gpimage
