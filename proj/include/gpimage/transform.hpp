#pragma once

#include <string>

#include <Eigen/Dense>

#include "gpimage/apply.hpp"
#include "gpimage/grid.hpp"
#include "gpimage/prior.hpp"

namespace gpimage {

/// Law of v = Tu for u ~ prior, i.e. GP(T m, T₁ T₂ k), with its provenance.
struct ImageProcess {
    GaussianProcessPrior prior;
    std::string source;
    std::string operator_label;
};

/// The image process of u ~ p under T. Mean and kernel stay lazy, so the
/// result can be pushed forward again.
/// Throws DomainError when T.order exceeds the kernel's sample smoothness or the
/// mean's closed-form smoothness (value-only means go through finite differences).
[[nodiscard]] ImageProcess pushforward(const GaussianProcessPrior& p, const LinearOperator& t,
                                       const ApplyOptions& options = {});

struct GaussianVector {
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;
};

/// (T m, T C Tᵀ) for u ~ N(m, C). Throws DimensionError on non-conformable shapes.
[[nodiscard]] GaussianVector finite_dim_pushforward(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov,
                                                    const Eigen::MatrixXd& t);

/// Prior covariance blocks of (u on grid_x, Tu on grid_y).
struct JointBlocks {
    Eigen::MatrixXd uu;  ///< k(x_i, x_j)
    Eigen::MatrixXd uv;  ///< (T₂k)(x_i, y_j)
    Eigen::MatrixXd vu;  ///< (T₁k)(y_i, x_j)
    Eigen::MatrixXd vv;  ///< (T₁T₂k)(y_i, y_j)
    Grid grid_x;
    Grid grid_y;

    /// [[uu, uv], [vu, vv]].
    [[nodiscard]] Eigen::MatrixXd stacked() const;
};

[[nodiscard]] JointBlocks joint_blocks(const GaussianProcessPrior& p, const LinearOperator& t, const Grid& grid_x,
                                       const Grid& grid_y, const ApplyOptions& options = {});

} // namespace gpimage
