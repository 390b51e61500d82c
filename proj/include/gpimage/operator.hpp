#pragma once

#include <string>
#include <vector>

#include "gpimage/expr.hpp"

namespace gpimage {

/// T = Σ_i a_i(x) D^i with smooth closed-form coefficients.
///
/// Catalog operators (identity, D^n, x·D, their sums and compositions) all act
/// on C^n([a, b]) and admit densely defined adjoints by integration by parts;
/// that hypothesis is assumed, not checked.
class LinearOperator {
public:
    struct Term {
        int order = 0;
        Expr coefficient;
    };

    LinearOperator();  // identity

    /// Terms with equal order are summed; zero coefficients are dropped.
    explicit LinearOperator(const std::vector<Term>& terms, std::string label = {});

    static LinearOperator identity();
    /// D^order.
    static LinearOperator derivative(int order);
    /// The single term coefficient · D^order.
    static LinearOperator term(int order, const Expr& coefficient);

    /// Highest order with a nonzero coefficient; 0 for the zero operator.
    [[nodiscard]] int order() const noexcept { return order_; }
    /// Ascending in order.
    [[nodiscard]] const std::vector<Term>& terms() const noexcept { return terms_; }
    [[nodiscard]] const std::string& label() const noexcept { return label_; }
    [[nodiscard]] bool is_identity() const;

    /// a_i^{(deriv)}(x) for term index `term_index`.
    [[nodiscard]] double coefficient_derivative(std::size_t term_index, int deriv, double x) const;

    /// Apply the Σ_i a_i(x) f^{(i)}(x) formula to tabulated derivatives of f at x.
    /// derivatives[i] must hold f^{(i)}(x) for i ≤ order().
    [[nodiscard]] double combine(double x, const std::vector<double>& derivatives) const;

private:
    static constexpr int kTabulated = 8;

    std::vector<Term> terms_;
    std::vector<std::vector<Expr>> coefficient_derivatives_;  // [term][0..kTabulated]
    int order_ = 0;
    std::string label_;
};

/// S ∘ T, expanded by the Leibniz rule.
[[nodiscard]] LinearOperator compose(const LinearOperator& s, const LinearOperator& t);
[[nodiscard]] LinearOperator add(const LinearOperator& s, const LinearOperator& t);
[[nodiscard]] LinearOperator scale(double c, const LinearOperator& t);

/// Binomial coefficient as double; exact for the orders used here.
[[nodiscard]] double binomial(int n, int k);

} // namespace gpimage
