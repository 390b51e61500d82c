#pragma once

#include <functional>
#include <span>
#include <vector>

namespace gpimage {

/// Accuracy order of every stencil in the library.
inline constexpr int kStencilAccuracy = 4;
/// Highest derivative order the stencils support.
inline constexpr int kMaxStencilDerivative = 4;

struct FdScheme {
    double base_step = 1.0;
    bool richardson = false;
};

/// Weights for the `order`-th derivative at `z` from values at `nodes` (Fornberg's recursion).
/// The returned weights have unit spacing scale: divide by h^order for offsets scaled by h.
[[nodiscard]] std::vector<double> stencil_weights(double z, std::span<const double> nodes, int order);

/// Number of points in the centered accuracy-4 stencil for a derivative of `order`.
[[nodiscard]] int central_width(int order);

/// Derivative of `f` at `x` by a centered stencil of accuracy order 4.
///
/// Step h = base_step · max(1, |x|) · ε^(1/(order+4)). With `richardson`, the
/// estimates at h and h/2 are combined as (16·D(h/2) − D(h)) / 15.
/// Throws EvaluationError if f is not finite on the stencil, ParameterError if
/// order is outside [0, 4].
[[nodiscard]] double fd_derivative(const std::function<double(double)>& f, double x, int order,
                                   const FdScheme& scheme = {});

/// ∂^d1_1 ∂^d2_2 f at (x1, x2) by the tensor product of the centered stencils.
///
/// Both steps follow the rule above with the total order d1 + d2 in the exponent,
/// so one differencing pass covers the mixed partial. `arg2_inner` selects which
/// argument is summed in the inner loop. Same errors as fd_derivative, per argument.
[[nodiscard]] double fd_mixed_partial(const std::function<double(double, double)>& f, double x1, double x2, int d1,
                                      int d2, const FdScheme& scheme = {}, bool arg2_inner = true);

} // namespace gpimage
