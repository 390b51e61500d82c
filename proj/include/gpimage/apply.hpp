#pragma once

#include "gpimage/finite_difference.hpp"
#include "gpimage/grid.hpp"
#include "gpimage/kernel.hpp"
#include "gpimage/mean_function.hpp"
#include "gpimage/operator.hpp"

namespace gpimage {

enum class Strategy {
    automatic,          ///< closed form when available, finite differences otherwise
    closed_form,        ///< closed form or DomainError
    finite_difference,  ///< finite differences of the underlying values
};

struct ApplyOptions {
    Strategy strategy = Strategy::automatic;
    FdScheme scheme{};
};

/// x ↦ Σ_i a_i(x) f^{(i)}(x). The result has smoothness f.smoothness − T.order.
///
/// Closed-form derivatives are used when T.order ≤ f.smoothness. A value-only f
/// falls back to finite differences unless the strategy is closed_form. A function
/// with closed-form derivatives of insufficient order is a DomainError.
[[nodiscard]] MeanFunction apply_to_function(const LinearOperator& t, const MeanFunction& f,
                                             const ApplyOptions& options = {});

/// T applied to one argument of k: (x1, x2) ↦ Σ_i a_i(x_slot) ∂^i_{x_slot} k(x1, x2).
///
/// Throws DomainError when T.order exceeds k.smoothness(slot), whatever the strategy.
[[nodiscard]] Kernel apply_arg(const LinearOperator& t, Slot slot, const Kernel& k, const ApplyOptions& options = {});

/// T₁ T₂ k, applied to the second argument first.
[[nodiscard]] Kernel apply_both(const LinearOperator& t, const Kernel& k, const ApplyOptions& options = {});

/// T₂ T₁ k, the opposite application order to apply_both.
[[nodiscard]] Kernel apply_both_reversed(const LinearOperator& t, const Kernel& k, const ApplyOptions& options = {});

/// max over g × g of |T₁T₂k − T₂T₁k|.
[[nodiscard]] double commutator_residual(const LinearOperator& t, const Kernel& k, const Grid& g,
                                         const ApplyOptions& options = {});

/// Throws DomainError unless T.order ≤ k.smoothness(slot).
void require_in_domain(const LinearOperator& t, const Kernel& k, Slot slot);

} // namespace gpimage
