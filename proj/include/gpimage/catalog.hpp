#pragma once

#include "gpimage/kernel.hpp"

namespace gpimage {

// Integrability of paths in the norms the operators act between is an analytic
// hypothesis on these kernels; nothing here checks it numerically.

/// Highest total derivative order d1 + d2 with a closed form for the squared-exponential kernel.
inline constexpr int kSquaredExponentialBudget = 6;

/// σ² exp(−(x1 − x2)² / (2ℓ²)); paths are infinitely differentiable.
[[nodiscard]] Kernel se_kernel(double lengthscale, double variance);

/// Half-integer Matérn orders ν = p + 1/2.
enum class MaternOrder { half = 0, three_halves = 1, five_halves = 2, seven_halves = 3 };

/// Maps 0.5, 1.5, 2.5, 3.5 to a MaternOrder; ParameterError otherwise.
[[nodiscard]] MaternOrder matern_order_from_nu(double nu);

/// Half-integer Matérn kernel. Sample paths are ⌈ν⌉ − 1 times differentiable and
/// closed-form partials exist up to total order 2(⌈ν⌉ − 1).
[[nodiscard]] Kernel matern_kernel(MaternOrder nu, double lengthscale, double variance);

/// Hermite polynomial He_n(t), probabilists' convention.
[[nodiscard]] double hermite_he(int n, double t);

} // namespace gpimage
