#include "gpimage/apply.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "gpimage/errors.hpp"
#include "gpimage/finite_difference.hpp"
#include "gpimage/linalg.hpp"

namespace gpimage {

namespace {

bool closed_available(const LinearOperator& t, Slot slot, const Kernel& k) {
    for (const auto& term : t.terms()) {
        const bool ok = slot == Slot::arg1 ? k.has_closed_form(term.order, 0) : k.has_closed_form(0, term.order);
        if (!ok) return false;
    }
    return true;
}

/// Closed-form slot application; partials follow from the Leibniz rule in the acted-on argument.
class SlotAppliedKernel final : public KernelNode {
public:
    SlotAppliedKernel(LinearOperator op, Slot slot, Kernel base, bool symmetric)
        : op_(std::move(op)), slot_(slot), base_(std::move(base)), symmetric_(symmetric) {}

    double value(double x1, double x2) const override { return closed_partial(0, 0, x1, x2); }

    bool has_closed_form(int d1, int d2) const override {
        for (const auto& term : op_.terms()) {
            const bool ok = slot_ == Slot::arg1 ? base_.has_closed_form(d1 + term.order, d2)
                                                : base_.has_closed_form(d1, d2 + term.order);
            if (!ok) return false;
        }
        return true;
    }

    double closed_partial(int d1, int d2, double x1, double x2) const override {
        const int d = slot_ == Slot::arg1 ? d1 : d2;
        const double xs = slot_ == Slot::arg1 ? x1 : x2;
        double acc = 0.0;
        const auto& terms = op_.terms();
        for (std::size_t t = 0; t < terms.size(); ++t) {
            for (int l = 0; l <= d; ++l) {
                const double c = op_.coefficient_derivative(t, d - l, xs);
                if (c == 0.0) continue;
                const double p = slot_ == Slot::arg1
                                     ? base_.node()->closed_partial(terms[t].order + l, d2, x1, x2)
                                     : base_.node()->closed_partial(d1, terms[t].order + l, x1, x2);
                acc += binomial(d, l) * c * p;
            }
        }
        return acc;
    }

    Smoothness smoothness(Slot s) const override {
        const Smoothness base = base_.smoothness(s);
        return s == slot_ ? base.minus(op_.order()) : base;
    }

    bool symmetric() const override { return symmetric_; }

    std::string label() const override {
        return "[" + op_.label() + "]_" + (slot_ == Slot::arg1 ? "1" : "2") + " " + base_.label();
    }

private:
    LinearOperator op_;
    Slot slot_;
    Kernel base_;
    bool symmetric_;
};

/// Finite-difference application: operators accumulated per argument over a base
/// kernel that is only ever evaluated, never differenced twice. Each mixed partial
/// ∂^i_1 ∂^j_2 of the base comes from one tensor-product stencil.
class FdAppliedKernel final : public KernelNode {
public:
    FdAppliedKernel(Kernel base, LinearOperator op1, LinearOperator op2, Slot inner, FdScheme scheme, bool symmetric)
        : base_(std::move(base)), op1_(std::move(op1)), op2_(std::move(op2)), inner_(inner), scheme_(scheme),
          symmetric_(symmetric) {
        for (const LinearOperator* op : {&op1_, &op2_})
            if (op->order() > kMaxStencilDerivative)
                throw ParameterError("finite-difference application supports order <= 4 per argument, got " +
                                     std::to_string(op->order()));
    }

    double value(double x1, double x2) const override {
        auto f = [this](double a, double b) { return base_(a, b); };
        const auto& t1 = op1_.terms();
        const auto& t2 = op2_.terms();
        double acc = 0.0;
        for (std::size_t i = 0; i < t1.size(); ++i) {
            const double a = op1_.coefficient_derivative(i, 0, x1);
            if (a == 0.0) continue;
            for (std::size_t j = 0; j < t2.size(); ++j) {
                const double b = op2_.coefficient_derivative(j, 0, x2);
                if (b == 0.0) continue;
                const int d1 = t1[i].order;
                const int d2 = t2[j].order;
                const double m = d1 == 0 && d2 == 0 ? base_(x1, x2)
                                                    : fd_mixed_partial(f, x1, x2, d1, d2, scheme_, inner_ == Slot::arg2);
                acc += a * b * m;
            }
        }
        return acc;
    }

    bool has_closed_form(int d1, int d2) const override { return d1 == 0 && d2 == 0; }
    double closed_partial(int, int, double x1, double x2) const override { return value(x1, x2); }

    Smoothness smoothness(Slot s) const override {
        return base_.smoothness(s).minus(s == Slot::arg1 ? op1_.order() : op2_.order());
    }

    bool symmetric() const override { return symmetric_; }

    std::string label() const override {
        return "[" + op1_.label() + "]_1 [" + op2_.label() + "]_2^fd " + base_.label();
    }

    /// The same node with t applied on top in `slot`.
    Kernel extended(const LinearOperator& t, Slot slot, bool symmetric) const {
        const bool first = slot == Slot::arg1;
        return Kernel(std::make_shared<FdAppliedKernel>(base_, first ? compose(t, op1_) : op1_,
                                                        first ? op2_ : compose(t, op2_), inner_, scheme_, symmetric));
    }

private:
    Kernel base_;
    LinearOperator op1_;
    LinearOperator op2_;
    Slot inner_;  // slot whose operator was applied first
    FdScheme scheme_;
    bool symmetric_;
};

Kernel apply_slot(const LinearOperator& t, Slot slot, const Kernel& k, const ApplyOptions& options, bool symmetric) {
    require_in_domain(t, k, slot);
    const bool closed = closed_available(t, slot, k);
    switch (options.strategy) {
    case Strategy::closed_form:
        if (!closed)
            throw DomainError("no closed-form partials of order " + std::to_string(t.order()) + " in " +
                                  to_string(slot) + " of kernel '" + k.label() + "'",
                              t.order(), 0);
        [[fallthrough]];
    case Strategy::automatic:
        if (closed) return Kernel(std::make_shared<SlotAppliedKernel>(t, slot, k, symmetric));
        [[fallthrough]];
    case Strategy::finite_difference:
        break;
    }
    if (const auto* fd = dynamic_cast<const FdAppliedKernel*>(k.node().get())) return fd->extended(t, slot, symmetric);
    const bool first = slot == Slot::arg1;
    return Kernel(std::make_shared<FdAppliedKernel>(k, first ? t : LinearOperator::identity(),
                                                    first ? LinearOperator::identity() : t, slot, options.scheme,
                                                    symmetric));
}

} // namespace

void require_in_domain(const LinearOperator& t, const Kernel& k, Slot slot) {
    const Smoothness s = k.smoothness(slot);
    if (!s.admits(t.order()))
        throw DomainError("operator '" + t.label() + "' of order " + std::to_string(t.order()) +
                              " exceeds the sample-path smoothness " + s.to_string() + " of kernel '" + k.label() +
                              "' in " + to_string(slot) + " (deficit " + std::to_string(t.order() - s.value()) + ")",
                          t.order(), s.value());
}

MeanFunction apply_to_function(const LinearOperator& t, const MeanFunction& f, const ApplyOptions& options) {
    const int order = t.order();
    const bool closed = f.smoothness().admits(order);
    const bool use_fd = options.strategy == Strategy::finite_difference ||
                        (!closed && !f.has_closed_derivatives() && options.strategy == Strategy::automatic);
    const std::string label = "[" + t.label() + "](" + f.label() + ")";

    if (use_fd) {
        const FdScheme scheme = options.scheme;
        auto value = [t, f, scheme](double x) {
            auto fx = [&f](double y) { return f(y); };
            double acc = 0.0;
            const auto& terms = t.terms();
            for (std::size_t i = 0; i < terms.size(); ++i) {
                const double c = t.coefficient_derivative(i, 0, x);
                if (c == 0.0) continue;
                acc += c * (terms[i].order == 0 ? f(x) : fd_derivative(fx, x, terms[i].order, scheme));
            }
            return acc;
        };
        return MeanFunction(std::function<double(double)>(value), label);
    }
    if (!closed)
        throw DomainError("operator '" + t.label() + "' of order " + std::to_string(order) + " exceeds the " +
                              "closed-form smoothness " + f.smoothness().to_string() + " of mean '" + f.label() +
                              "' (deficit " + std::to_string(order - f.smoothness().value()) + ")",
                          order, f.smoothness().value());

    // (Tf)^{(d)} = Σ_i Σ_{j ≤ d} C(d, j) a_i^{(d−j)} f^{(i+j)}
    auto derivatives = [t, f](int d, double x) {
        double acc = 0.0;
        const auto& terms = t.terms();
        for (std::size_t i = 0; i < terms.size(); ++i) {
            for (int j = 0; j <= d; ++j) {
                const double c = t.coefficient_derivative(i, d - j, x);
                if (c == 0.0) continue;
                acc += binomial(d, j) * c * f.derivatives()(terms[i].order + j, x);
            }
        }
        return acc;
    };
    return MeanFunction(derivatives, f.smoothness().minus(order), label);
}

Kernel apply_arg(const LinearOperator& t, Slot slot, const Kernel& k, const ApplyOptions& options) {
    return apply_slot(t, slot, k, options, false);
}

Kernel apply_both(const LinearOperator& t, const Kernel& k, const ApplyOptions& options) {
    require_in_domain(t, k, Slot::arg1);
    require_in_domain(t, k, Slot::arg2);
    const Kernel inner = apply_slot(t, Slot::arg2, k, options, false);
    return apply_slot(t, Slot::arg1, inner, options, k.symmetric());
}

Kernel apply_both_reversed(const LinearOperator& t, const Kernel& k, const ApplyOptions& options) {
    require_in_domain(t, k, Slot::arg1);
    require_in_domain(t, k, Slot::arg2);
    const Kernel inner = apply_slot(t, Slot::arg1, k, options, false);
    return apply_slot(t, Slot::arg2, inner, options, k.symmetric());
}

double commutator_residual(const LinearOperator& t, const Kernel& k, const Grid& g, const ApplyOptions& options) {
    const Eigen::MatrixXd a = cross_gram(apply_both(t, k, options), g, g);
    const Eigen::MatrixXd b = cross_gram(apply_both_reversed(t, k, options), g, g);
    return (a - b).cwiseAbs().maxCoeff();
}

} // namespace gpimage
