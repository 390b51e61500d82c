#pragma once

#include <cstddef>
#include <cstdint>

#include <Eigen/Dense>

#include "gpimage/grid.hpp"
#include "gpimage/operator.hpp"
#include "gpimage/prior.hpp"
#include "gpimage/smoothness.hpp"

namespace gpimage {

using PathMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// N sample paths tabulated on a grid; row p is path p.
class SampleEnsemble {
public:
    /// Throws ParameterError unless N ≥ 2, columns match the grid, and every entry is finite.
    /// `smoothness` is the path regularity the ensemble stands for (the prior kernel's).
    SampleEnsemble(Grid grid, PathMatrix paths, std::uint64_t seed, Smoothness smoothness);

    [[nodiscard]] const Grid& grid() const noexcept { return grid_; }
    [[nodiscard]] const PathMatrix& paths() const noexcept { return paths_; }
    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
    [[nodiscard]] Smoothness smoothness() const noexcept { return smoothness_; }
    [[nodiscard]] std::size_t count() const noexcept { return static_cast<std::size_t>(paths_.rows()); }

private:
    Grid grid_;
    PathMatrix paths_;
    std::uint64_t seed_;
    Smoothness smoothness_;
};

/// Draws N paths of u ~ p on g as m + L z, L from chol_psd(gram(k, g), max_jitter).
/// Path i uses the substream (seed, paths, i), so output does not depend on thread count.
[[nodiscard]] SampleEnsemble sample_paths(const GaussianProcessPrior& p, const Grid& g, std::size_t n,
                                          std::uint64_t seed, double max_jitter = 1e-8);

/// Maps each path through the grid stencils of T. DomainError when T.order exceeds
/// the ensemble's smoothness; GridError when the grid is too small or non-uniform.
[[nodiscard]] SampleEnsemble apply_operator_pathwise(const LinearOperator& t, const SampleEnsemble& e);

[[nodiscard]] Eigen::VectorXd empirical_mean(const SampleEnsemble& e);

/// Unbiased (N − 1) covariance; every entry is computed by covariance_entry.
[[nodiscard]] Eigen::MatrixXd empirical_cov(const SampleEnsemble& e);

/// Σ_p (u_pi − mean_i)(u_pj − mean_j) / (N − 1), summed in path order.
[[nodiscard]] double covariance_entry(const SampleEnsemble& e, const Eigen::VectorXd& mean, std::size_t i,
                                      std::size_t j);

/// Single-threaded implementations kept as test oracles and benchmark baselines.
namespace reference {

[[nodiscard]] Eigen::MatrixXd gram(const Kernel& k, const Grid& g, double jitter = 0.0);
[[nodiscard]] SampleEnsemble sample_paths(const GaussianProcessPrior& p, const Grid& g, std::size_t n,
                                          std::uint64_t seed, double max_jitter = 1e-8);
[[nodiscard]] SampleEnsemble apply_operator_pathwise(const LinearOperator& t, const SampleEnsemble& e);
[[nodiscard]] Eigen::VectorXd empirical_mean(const SampleEnsemble& e);
[[nodiscard]] Eigen::MatrixXd empirical_cov(const SampleEnsemble& e);

} // namespace reference

} // namespace gpimage
