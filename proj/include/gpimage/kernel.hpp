#pragma once

#include <memory>
#include <string>

#include "gpimage/smoothness.hpp"

namespace gpimage {

enum class Slot { arg1 = 0, arg2 = 1 };

[[nodiscard]] constexpr const char* to_string(Slot s) { return s == Slot::arg1 ? "arg1" : "arg2"; }

/// Implementation interface behind Kernel. Implementations are immutable.
class KernelNode {
public:
    virtual ~KernelNode() = default;

    [[nodiscard]] virtual double value(double x1, double x2) const = 0;
    /// Whether ∂^{d1}_{x1} ∂^{d2}_{x2} k has a closed form here.
    [[nodiscard]] virtual bool has_closed_form(int d1, int d2) const = 0;
    /// Only called when has_closed_form(d1, d2).
    [[nodiscard]] virtual double closed_partial(int d1, int d2, double x1, double x2) const = 0;
    /// Almost-sure differentiability order of sample paths in the given argument.
    [[nodiscard]] virtual Smoothness smoothness(Slot slot) const = 0;
    [[nodiscard]] virtual bool symmetric() const = 0;
    [[nodiscard]] virtual std::string label() const = 0;
};

/// Covariance bifunction on X × X with closed-form partial-derivative data.
///
/// Cheap to copy; copies share the immutable implementation.
class Kernel {
public:
    explicit Kernel(std::shared_ptr<const KernelNode> node);

    [[nodiscard]] double operator()(double x1, double x2) const { return node_->value(x1, x2); }

    [[nodiscard]] bool has_closed_form(int d1, int d2) const { return node_->has_closed_form(d1, d2); }

    /// Closed-form partial; DomainError when not available.
    [[nodiscard]] double partial(int d1, int d2, double x1, double x2) const;

    [[nodiscard]] Smoothness smoothness(Slot slot) const { return node_->smoothness(slot); }
    [[nodiscard]] Smoothness sample_smoothness() const {
        return min(node_->smoothness(Slot::arg1), node_->smoothness(Slot::arg2));
    }
    [[nodiscard]] bool symmetric() const { return node_->symmetric(); }
    [[nodiscard]] std::string label() const { return node_->label(); }

    [[nodiscard]] const std::shared_ptr<const KernelNode>& node() const noexcept { return node_; }

private:
    std::shared_ptr<const KernelNode> node_;
};

} // namespace gpimage
