#include "gpimage/verify.hpp"

#include <algorithm>
#include <cmath>

#include "gpimage/ensemble.hpp"
#include "gpimage/errors.hpp"
#include "gpimage/grid_stencil.hpp"
#include "gpimage/linalg.hpp"
#include "gpimage/transform.hpp"

namespace gpimage {

std::vector<std::vector<std::size_t>> cumulant_tuples(std::size_t begin, std::size_t end, int order, int count) {
    if (end <= begin) throw GridError("no interior points available for cumulant tuples");
    const std::size_t span = end - begin;
    std::vector<std::vector<std::size_t>> out;
    // tuple t starts at an evenly spread anchor and strides by t; t = 0 repeats one index
    for (int t = 0; t < count; ++t) {
        const std::size_t anchor = count > 1 ? static_cast<std::size_t>(t) * (span - 1) / (count - 1) : 0;
        std::vector<std::size_t> tuple;
        for (int j = 0; j < order; ++j)
            tuple.push_back(begin + (anchor + static_cast<std::size_t>(j) * static_cast<std::size_t>(t)) % span);
        out.push_back(std::move(tuple));
    }
    return out;
}

VerificationReport verify_theorem(const GaussianProcessPrior& p, const LinearOperator& t, const Grid& g,
                                  std::size_t n, std::uint64_t seed, const VerifyOptions& options) {
    const VerifyTolerances& tol = options.tolerances;
    VerificationReport report;
    report.prior = "GP(" + p.mean.label() + ", " + p.kernel.label() + ")";
    report.operator_label = t.label();
    report.grid_size = g.size();
    report.grid_start = g.front();
    report.grid_stop = g.back();
    report.samples = n;
    report.seed = seed;
    report.tolerances = tol;
    report.expect_rejection = options.expect_rejection;

    std::optional<ImageProcess> image;
    try {
        image = pushforward(p, t);
    } catch (const DomainError& err) {
        report.rejected = true;
        report.rejection_reason = err.what();
        report.passed = options.expect_rejection;
        return report;
    }

    const SampleEnsemble u = sample_paths(p, g, n, seed, tol.psd_jitter);
    const SampleEnsemble v = apply_operator_pathwise(t, u);
    const GridStencil stencil(t, g);
    const Kernel& kv = image->prior.kernel;
    const MeanFunction& mv = image->prior.mean;
    const double count = static_cast<double>(n);

    const Eigen::VectorXd emp_mean = empirical_mean(v);
    const Eigen::MatrixXd emp_cov = empirical_cov(v);
    const Eigen::MatrixXd pred_cov = gram(kv, g);
    const std::size_t dim = g.size();

    // (a) mean
    auto& mean = report.mean;
    bool mean_ok = true;
    for (std::size_t i = 0; i < dim; ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        PointDeviation pd;
        pd.x = g[i];
        pd.interior = stencil.is_interior(i);
        pd.empirical_mean = emp_mean[ii];
        pd.predicted_mean = mv(g[i]);
        pd.mean_bound = tol.mean_z * std::sqrt(std::max(pred_cov(ii, ii), 0.0) / count);
        pd.empirical_var = emp_cov(ii, ii);
        pd.predicted_var = pred_cov(ii, ii);
        pd.var_bound = tol.cov_z * std::sqrt(2.0 * pred_cov(ii, ii) * pred_cov(ii, ii) / count);
        const double dev = std::abs(pd.empirical_mean - pd.predicted_mean);
        if (pd.interior) {
            mean.max_abs_deviation = std::max(mean.max_abs_deviation, dev);
            mean.max_bound = std::max(mean.max_bound, pd.mean_bound);
            const double se = pd.mean_bound / tol.mean_z;
            if (se > 0.0) mean.max_standardized = std::max(mean.max_standardized, dev / se);
            if (dev > pd.mean_bound) mean_ok = false;
        } else {
            mean.boundary_max_abs_deviation = std::max(mean.boundary_max_abs_deviation, dev);
        }
        report.points.push_back(pd);
    }
    mean.passed = mean_ok && mean.max_abs_deviation <= tol.mean_abs;

    // (b) covariance and the order-interchange certificate
    auto& cov = report.covariance;
    bool cov_ok = true;
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            const auto ii = static_cast<Eigen::Index>(i);
            const auto jj = static_cast<Eigen::Index>(j);
            const double dev = std::abs(emp_cov(ii, jj) - pred_cov(ii, jj));
            if (!(stencil.is_interior(i) && stencil.is_interior(j))) {
                cov.boundary_max_abs_deviation = std::max(cov.boundary_max_abs_deviation, dev);
                continue;
            }
            const double k = pred_cov(ii, jj);
            const double se = std::sqrt(std::max(k * k + pred_cov(ii, ii) * pred_cov(jj, jj), 0.0) / count);
            cov.max_abs_deviation = std::max(cov.max_abs_deviation, dev);
            if (se > 0.0) cov.max_standardized = std::max(cov.max_standardized, dev / se);
            if (dev > tol.cov_z * se) cov_ok = false;
        }
    }
    bool commutator_ok = true;
    try {
        cov.commutator_closed = commutator_residual(t, p.kernel, g, {Strategy::closed_form, {}});
        commutator_ok = commutator_ok && *cov.commutator_closed <= tol.commutator_closed;
    } catch (const DomainError&) {
        // no closed form at this order; only the finite-difference certificate applies
    }
    if (t.order() <= kMaxStencilDerivative) {
        cov.commutator_fd = commutator_residual(t, p.kernel, g, {Strategy::finite_difference, {}});
        commutator_ok = commutator_ok && *cov.commutator_fd <= tol.commutator_fd;
    }
    const PsdCheck psd = check_psd(kv, g, tol.psd_jitter);
    cov.psd_ok = psd.ok;
    cov.psd_jitter = psd.jitter;
    cov.passed = cov_ok && commutator_ok && psd.ok && cov.max_abs_deviation <= tol.cov_abs;

    // (c) cumulants of order 3 and 4
    auto& cum = report.cumulants;
    cum.passed = true;
    for (int order : {3, 4}) {
        auto& list = order == 3 ? cum.third : cum.fourth;
        double& worst = order == 3 ? cum.max_standardized_third : cum.max_standardized_fourth;
        for (const auto& tuple :
             cumulant_tuples(stencil.interior_begin(), stencil.interior_end(), order, options.cumulant_tuples)) {
            CumulantEstimate est = empirical_cumulant(v, tuple);
            worst = std::max(worst, std::abs(est.standardized()));
            list.push_back(std::move(est));
        }
        if (worst > tol.cumulant_z) cum.passed = false;
    }

    report.passed = !options.expect_rejection && mean.passed && cov.passed && cum.passed;
    return report;
}

} // namespace gpimage
