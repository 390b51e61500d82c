#include "gpimage/transform.hpp"

#include <string>

#include "gpimage/errors.hpp"
#include "gpimage/linalg.hpp"

namespace gpimage {

ImageProcess pushforward(const GaussianProcessPrior& p, const LinearOperator& t, const ApplyOptions& options) {
    Kernel kv = apply_both(t, p.kernel, options);
    MeanFunction mv = apply_to_function(t, p.mean, options);
    return ImageProcess{GaussianProcessPrior{std::move(mv), std::move(kv)},
                        "GP(" + p.mean.label() + ", " + p.kernel.label() + ")", t.label()};
}

GaussianVector finite_dim_pushforward(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov,
                                      const Eigen::MatrixXd& t) {
    if (cov.rows() != cov.cols()) throw DimensionError("covariance must be square");
    if (mean.size() != cov.rows())
        throw DimensionError("mean has length " + std::to_string(mean.size()) + " but covariance is " +
                             std::to_string(cov.rows()) + "x" + std::to_string(cov.cols()));
    if (t.cols() != mean.size())
        throw DimensionError("operator matrix has " + std::to_string(t.cols()) + " columns, expected " +
                             std::to_string(mean.size()));
    return {t * mean, t * cov * t.transpose()};
}

Eigen::MatrixXd JointBlocks::stacked() const {
    const Eigen::Index nx = uu.rows();
    const Eigen::Index ny = vv.rows();
    Eigen::MatrixXd m(nx + ny, nx + ny);
    m.topLeftCorner(nx, nx) = uu;
    m.topRightCorner(nx, ny) = uv;
    m.bottomLeftCorner(ny, nx) = vu;
    m.bottomRightCorner(ny, ny) = vv;
    return m;
}

JointBlocks joint_blocks(const GaussianProcessPrior& p, const LinearOperator& t, const Grid& grid_x,
                         const Grid& grid_y, const ApplyOptions& options) {
    const Kernel t2k = apply_arg(t, Slot::arg2, p.kernel, options);
    const Kernel t1k = apply_arg(t, Slot::arg1, p.kernel, options);
    const Kernel t1t2k = apply_both(t, p.kernel, options);
    return JointBlocks{gram(p.kernel, grid_x), cross_gram(t2k, grid_x, grid_y), cross_gram(t1k, grid_y, grid_x),
                       gram(t1t2k, grid_y), grid_x, grid_y};
}

} // namespace gpimage
