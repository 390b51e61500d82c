#include "gpimage/mean_function.hpp"

#include <memory>
#include <vector>

#include "gpimage/errors.hpp"

namespace gpimage {

namespace {

constexpr int kTabulatedDerivatives = 8;

/// Derivatives of an expression, tabulated up to a fixed order; higher orders are derived per call.
class ExprDerivatives {
public:
    explicit ExprDerivatives(const Expr& e) {
        table_.push_back(e);
        for (int d = 1; d <= kTabulatedDerivatives; ++d) table_.push_back(table_.back().derivative());
    }

    double operator()(int order, double x) const {
        if (order <= kTabulatedDerivatives) return table_[order](x);
        return table_.back().derivative(order - kTabulatedDerivatives)(x);
    }

private:
    std::vector<Expr> table_;
};

} // namespace

MeanFunction::MeanFunction() : MeanFunction(from_expr(Expr::constant(0.0))) {}

MeanFunction MeanFunction::from_expr(const Expr& e) {
    auto table = std::make_shared<const ExprDerivatives>(e);
    return MeanFunction([table](int order, double x) { return (*table)(order, x); }, Smoothness::infinite(),
                        e.to_string());
}

MeanFunction::MeanFunction(std::function<double(double)> value, std::string label)
    : derivatives_([value = std::move(value)](int, double x) { return value(x); }),
      smoothness_(0),
      label_(std::move(label)) {}

MeanFunction::MeanFunction(DerivativeFn derivatives, Smoothness smoothness, std::string label)
    : derivatives_(std::move(derivatives)), smoothness_(smoothness), label_(std::move(label)) {}

double MeanFunction::derivative(int order, double x) const {
    if (!smoothness_.admits(order))
        throw DomainError("mean function '" + label_ + "' has closed-form derivatives up to order " +
                              smoothness_.to_string() + ", order " + std::to_string(order) + " requested",
                          order, smoothness_.value());
    return derivatives_(order, x);
}

} // namespace gpimage
