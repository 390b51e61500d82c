#pragma once

#include <vector>

#include <Eigen/Dense>

#include "gpimage/grid.hpp"
#include "gpimage/kernel.hpp"

namespace gpimage {

/// [k(x_i, x_j)] + jitter·I, symmetrized entrywise after assembly. Rows assemble in parallel.
[[nodiscard]] Eigen::MatrixXd gram(const Kernel& k, const Grid& g, double jitter = 0.0);

/// [k(x_i, y_j)] without symmetrization.
[[nodiscard]] Eigen::MatrixXd cross_gram(const Kernel& k, const Grid& gx, const Grid& gy);

struct CholeskyFactor {
    Eigen::MatrixXd lower;
    double jitter = 0.0;
};

/// The jitter ladder {0, 1e-12, 1e-11, ...} truncated at max_jitter.
[[nodiscard]] std::vector<double> jitter_ladder(double max_jitter);

/// L with L Lᵀ = M + δI for the smallest δ on the ladder that factorizes.
/// Throws NotPositiveDefiniteError carrying the attempted ladder.
[[nodiscard]] CholeskyFactor chol_psd(const Eigen::MatrixXd& m, double max_jitter);

struct PsdCheck {
    bool ok = false;
    double jitter = 0.0;  // δ needed, when ok
};

/// Runtime PSD certificate for a kernel on a grid: does gram(k, g) factorize with δ ≤ max_jitter?
[[nodiscard]] PsdCheck check_psd(const Kernel& k, const Grid& g, double max_jitter = 1e-8);

} // namespace gpimage
