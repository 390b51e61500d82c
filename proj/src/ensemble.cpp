#include "gpimage/ensemble.hpp"

#include <cmath>
#include <span>
#include <string>

#include "gpimage/apply.hpp"
#include "gpimage/errors.hpp"
#include "gpimage/grid_stencil.hpp"
#include "gpimage/linalg.hpp"
#include "gpimage/random.hpp"
#include "parallel.hpp"

namespace gpimage {

SampleEnsemble::SampleEnsemble(Grid grid, PathMatrix paths, std::uint64_t seed, Smoothness smoothness)
    : grid_(std::move(grid)), paths_(std::move(paths)), seed_(seed), smoothness_(smoothness) {
    if (paths_.rows() < 2) throw ParameterError("an ensemble needs at least two paths");
    if (static_cast<std::size_t>(paths_.cols()) != grid_.size())
        throw DimensionError("ensemble has " + std::to_string(paths_.cols()) + " columns for a grid of " +
                             std::to_string(grid_.size()) + " points");
    if (!paths_.allFinite()) throw ParameterError("ensemble contains non-finite entries");
}

namespace {

Eigen::VectorXd tabulate_mean(const MeanFunction& m, const Grid& g) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(g.size()));
    for (std::size_t i = 0; i < g.size(); ++i) v[static_cast<Eigen::Index>(i)] = m(g[i]);
    return v;
}

void require_ensemble_domain(const LinearOperator& t, const SampleEnsemble& e) {
    if (!e.smoothness().admits(t.order()))
        throw DomainError("operator '" + t.label() + "' of order " + std::to_string(t.order()) +
                              " exceeds the path smoothness " + e.smoothness().to_string() + " of the ensemble",
                          t.order(), e.smoothness().value());
}

} // namespace

SampleEnsemble sample_paths(const GaussianProcessPrior& p, const Grid& g, std::size_t n, std::uint64_t seed,
                            double max_jitter) {
    if (n < 2) throw ParameterError("sample_paths needs N >= 2");
    const CholeskyFactor chol = chol_psd(gpimage::gram(p.kernel, g), max_jitter);
    const Eigen::VectorXd mean = tabulate_mean(p.mean, g);
    const auto dim = static_cast<Eigen::Index>(g.size());
    PathMatrix paths(static_cast<Eigen::Index>(n), dim);
    const Eigen::MatrixXd& lower = chol.lower;

    detail::parallel_for(static_cast<std::int64_t>(n), [&](std::int64_t path) {
        RandomStream rng(seed, StreamPurpose::paths, static_cast<std::uint64_t>(path));
        Eigen::VectorXd z(dim);
        for (Eigen::Index i = 0; i < dim; ++i) z[i] = rng.normal();
        paths.row(path) = (mean + lower.triangularView<Eigen::Lower>() * z).transpose();
    });
    return SampleEnsemble(g, std::move(paths), seed, p.kernel.sample_smoothness());
}

SampleEnsemble apply_operator_pathwise(const LinearOperator& t, const SampleEnsemble& e) {
    require_ensemble_domain(t, e);
    const GridStencil stencil(t, e.grid());
    const PathMatrix& in = e.paths();
    PathMatrix out(in.rows(), in.cols());
    const auto cols = static_cast<std::size_t>(in.cols());
    detail::parallel_for(in.rows(), [&](std::int64_t p) {
        stencil.apply(std::span<const double>(in.row(p).data(), cols), std::span<double>(out.row(p).data(), cols));
    });
    return SampleEnsemble(e.grid(), std::move(out), e.seed(), e.smoothness().minus(t.order()));
}

Eigen::VectorXd empirical_mean(const SampleEnsemble& e) {
    const PathMatrix& x = e.paths();
    Eigen::VectorXd mean(x.cols());
    const double n = static_cast<double>(x.rows());
    detail::parallel_for(x.cols(), [&](std::int64_t j) {
        double acc = 0.0;
        for (Eigen::Index p = 0; p < x.rows(); ++p) acc += x(p, j);
        mean[j] = acc / n;
    });
    return mean;
}

namespace {

/// Column j of the paths minus mean[j], contiguous.
Eigen::VectorXd centered_column(const PathMatrix& x, const Eigen::VectorXd& mean, Eigen::Index j) {
    Eigen::VectorXd c(x.rows());
    for (Eigen::Index p = 0; p < x.rows(); ++p) c[p] = x(p, j) - mean[j];
    return c;
}

/// Fixed summation order so that covariance_entry and empirical_cov agree bit for bit.
double centered_dot(const double* a, const double* b, Eigen::Index n) {
    double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    Eigen::Index p = 0;
    for (; p + 4 <= n; p += 4) {
        s0 += a[p] * b[p];
        s1 += a[p + 1] * b[p + 1];
        s2 += a[p + 2] * b[p + 2];
        s3 += a[p + 3] * b[p + 3];
    }
    for (; p < n; ++p) s0 += a[p] * b[p];
    return (s0 + s1) + (s2 + s3);
}

} // namespace

double covariance_entry(const SampleEnsemble& e, const Eigen::VectorXd& mean, std::size_t i, std::size_t j) {
    const PathMatrix& x = e.paths();
    const Eigen::VectorXd a = centered_column(x, mean, static_cast<Eigen::Index>(i));
    const Eigen::VectorXd b = centered_column(x, mean, static_cast<Eigen::Index>(j));
    return centered_dot(a.data(), b.data(), x.rows()) / static_cast<double>(x.rows() - 1);
}

Eigen::MatrixXd empirical_cov(const SampleEnsemble& e) {
    const PathMatrix& x = e.paths();
    const Eigen::VectorXd mean = empirical_mean(e);
    const auto d = static_cast<std::int64_t>(e.grid().size());
    // column-major copy so each grid point's samples are contiguous
    Eigen::MatrixXd centered(x.rows(), d);
    detail::parallel_for(d, [&](std::int64_t j) { centered.col(j) = centered_column(x, mean, j); });
    Eigen::MatrixXd cov(d, d);
    const double denom = static_cast<double>(x.rows() - 1);
    detail::parallel_for(d * d, [&](std::int64_t flat) {
        const std::int64_t i = flat / d;
        const std::int64_t j = flat % d;
        if (j < i) return;
        const double v = centered_dot(centered.col(i).data(), centered.col(j).data(), x.rows()) / denom;
        cov(i, j) = v;
        cov(j, i) = v;
    });
    return cov;
}

namespace reference {

Eigen::MatrixXd gram(const Kernel& k, const Grid& g, double jitter) {
    const auto n = static_cast<Eigen::Index>(g.size());
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = k(g[i], g[j]);
    Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
    sym.diagonal().array() += jitter;
    return sym;
}

SampleEnsemble sample_paths(const GaussianProcessPrior& p, const Grid& g, std::size_t n, std::uint64_t seed,
                            double max_jitter) {
    if (n < 2) throw ParameterError("sample_paths needs N >= 2");
    const CholeskyFactor chol = chol_psd(reference::gram(p.kernel, g), max_jitter);
    const Eigen::VectorXd mean = tabulate_mean(p.mean, g);
    const auto dim = static_cast<Eigen::Index>(g.size());
    Eigen::MatrixXd z(dim, static_cast<Eigen::Index>(n));
    for (Eigen::Index path = 0; path < z.cols(); ++path) {
        RandomStream rng(seed, StreamPurpose::paths, static_cast<std::uint64_t>(path));
        for (Eigen::Index i = 0; i < dim; ++i) z(i, path) = rng.normal();
    }
    const Eigen::MatrixXd x = (chol.lower.triangularView<Eigen::Lower>() * z).colwise() + mean;
    return SampleEnsemble(g, x.transpose(), seed, p.kernel.sample_smoothness());
}

SampleEnsemble apply_operator_pathwise(const LinearOperator& t, const SampleEnsemble& e) {
    require_ensemble_domain(t, e);
    const Eigen::MatrixXd d = GridStencil(t, e.grid()).to_dense();
    PathMatrix out = e.paths() * d.transpose();
    return SampleEnsemble(e.grid(), std::move(out), e.seed(), e.smoothness().minus(t.order()));
}

Eigen::VectorXd empirical_mean(const SampleEnsemble& e) { return e.paths().colwise().mean().transpose(); }

Eigen::MatrixXd empirical_cov(const SampleEnsemble& e) {
    const Eigen::MatrixXd centered = e.paths().rowwise() - e.paths().colwise().mean();
    return centered.transpose() * centered / static_cast<double>(e.count() - 1);
}

} // namespace reference

} // namespace gpimage
