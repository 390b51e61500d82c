#include "gpimage/linalg.hpp"

#include <cmath>
#include <string>

#include "gpimage/errors.hpp"
#include "parallel.hpp"

namespace gpimage {

Eigen::MatrixXd gram(const Kernel& k, const Grid& g, double jitter) {
    const auto n = static_cast<Eigen::Index>(g.size());
    Eigen::MatrixXd m(n, n);
    detail::parallel_for(n, [&](std::int64_t i) {
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = k(g[i], g[j]);
    });
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double s = 0.5 * (m(i, j) + m(j, i));
            m(i, j) = s;
            m(j, i) = s;
        }
        m(i, i) += jitter;
    }
    return m;
}

Eigen::MatrixXd cross_gram(const Kernel& k, const Grid& gx, const Grid& gy) {
    const auto nx = static_cast<Eigen::Index>(gx.size());
    const auto ny = static_cast<Eigen::Index>(gy.size());
    Eigen::MatrixXd m(nx, ny);
    detail::parallel_for(nx, [&](std::int64_t i) {
        for (Eigen::Index j = 0; j < ny; ++j) m(i, j) = k(gx[i], gy[j]);
    });
    return m;
}

std::vector<double> jitter_ladder(double max_jitter) {
    std::vector<double> ladder{0.0};
    for (int e = -12; e <= 300; ++e) {
        const double d = std::pow(10.0, e);
        if (d > max_jitter * (1.0 + 1e-9)) break;
        ladder.push_back(d);
    }
    return ladder;
}

CholeskyFactor chol_psd(const Eigen::MatrixXd& m, double max_jitter) {
    if (m.rows() != m.cols()) throw DimensionError("chol_psd needs a square matrix");
    const std::vector<double> ladder = jitter_ladder(max_jitter);
    for (const double delta : ladder) {
        Eigen::MatrixXd shifted = m;
        shifted.diagonal().array() += delta;
        Eigen::LLT<Eigen::MatrixXd> llt(shifted);
        if (llt.info() == Eigen::Success) return {llt.matrixL(), delta};
    }
    throw NotPositiveDefiniteError("matrix is not positive definite for any jitter up to " + std::to_string(max_jitter),
                                   ladder);
}

PsdCheck check_psd(const Kernel& k, const Grid& g, double max_jitter) {
    try {
        return {true, chol_psd(gram(k, g), max_jitter).jitter};
    } catch (const NotPositiveDefiniteError&) {
        return {false, 0.0};
    }
}

} // namespace gpimage
