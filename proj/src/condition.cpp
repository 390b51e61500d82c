#include "gpimage/condition.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "gpimage/errors.hpp"
#include "gpimage/linalg.hpp"
#include "parallel.hpp"

namespace gpimage {

namespace {

/// Distinct operators among the observations, keyed by label.
struct OperatorTable {
    std::vector<LinearOperator> ops;
    std::vector<std::size_t> index;  // per observation
};

OperatorTable index_operators(std::span<const Observation> obs) {
    OperatorTable table;
    for (const auto& o : obs) {
        std::size_t a = 0;
        while (a < table.ops.size() && table.ops[a].label() != o.op.label()) ++a;
        if (a == table.ops.size()) table.ops.push_back(o.op);
        table.index.push_back(a);
    }
    return table;
}

Eigen::MatrixXd assemble(std::size_t rows, std::size_t cols, const std::function<double(std::size_t, std::size_t)>& f) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    detail::parallel_for(static_cast<std::int64_t>(rows), [&](std::int64_t i) {
        for (std::size_t j = 0; j < cols; ++j) m(i, static_cast<Eigen::Index>(j)) = f(static_cast<std::size_t>(i), j);
    });
    return m;
}

} // namespace

Eigen::MatrixXd observation_gram(const Kernel& k, std::span<const Observation> obs, bool arg2_first,
                                 const ApplyOptions& options) {
    const OperatorTable table = index_operators(obs);
    const std::size_t m = table.ops.size();
    // pair[a][b] represents (S_a)₁ (S_b)₂ k
    std::vector<std::vector<Kernel>> pair;
    pair.reserve(m);
    for (std::size_t a = 0; a < m; ++a) {
        std::vector<Kernel> row;
        row.reserve(m);
        for (std::size_t b = 0; b < m; ++b) {
            if (arg2_first)
                row.push_back(apply_arg(table.ops[a], Slot::arg1, apply_arg(table.ops[b], Slot::arg2, k, options), options));
            else
                row.push_back(apply_arg(table.ops[b], Slot::arg2, apply_arg(table.ops[a], Slot::arg1, k, options), options));
        }
        pair.push_back(std::move(row));
    }
    return assemble(obs.size(), obs.size(), [&](std::size_t i, std::size_t j) {
        return pair[table.index[i]][table.index[j]](obs[i].location, obs[j].location);
    });
}

PosteriorSummary condition(const GaussianProcessPrior& p, std::span<const Observation> obs, const Grid& g,
                           const ConditionOptions& options) {
    const auto [lo, hi] = options.domain.value_or(std::pair{g.front(), g.back()});
    for (std::size_t i = 0; i < obs.size(); ++i) {
        const Observation& o = obs[i];
        if (!(o.location >= lo && o.location <= hi))
            throw ParameterError("observation " + std::to_string(i) + " at " + std::to_string(o.location) +
                                 " lies outside the domain [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
        if (!(o.noise_sd >= 0.0)) throw ParameterError("observation noise_sd must be non-negative");
        if (!std::isfinite(o.value)) throw ParameterError("observation value must be finite");
        require_in_domain(o.op, p.kernel, Slot::arg1);
        require_in_domain(o.op, p.kernel, Slot::arg2);
    }

    const std::size_t ng = g.size();
    Eigen::VectorXd prior_mean(static_cast<Eigen::Index>(ng));
    for (std::size_t i = 0; i < ng; ++i) prior_mean[static_cast<Eigen::Index>(i)] = p.mean(g[i]);
    PosteriorSummary out{g, prior_mean, gram(p.kernel, g), 0.0, 0.0, obs.size()};
    if (obs.empty()) return out;

    const OperatorTable table = index_operators(obs);
    std::vector<Kernel> cross;  // (S_a)₂ k
    std::vector<MeanFunction> obs_means;
    for (const auto& op : table.ops) {
        cross.push_back(apply_arg(op, Slot::arg2, p.kernel, options.apply));
        obs_means.push_back(apply_to_function(op, p.mean, options.apply));
    }

    const std::size_t no = obs.size();
    Eigen::MatrixXd k_oo = observation_gram(p.kernel, obs, true, options.apply);
    k_oo = 0.5 * (k_oo + k_oo.transpose()).eval();
    Eigen::VectorXd residual(static_cast<Eigen::Index>(no));
    for (std::size_t j = 0; j < no; ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        k_oo(jj, jj) += obs[j].noise_sd * obs[j].noise_sd + kObservationNoiseFloor;
        residual[jj] = obs[j].value - obs_means[table.index[j]](obs[j].location);
    }
    const Eigen::MatrixXd k_go = assemble(ng, no, [&](std::size_t i, std::size_t j) {
        return cross[table.index[j]](g[i], obs[j].location);
    });

    const CholeskyFactor chol = chol_psd(k_oo, options.max_jitter);
    const auto lower = chol.lower.triangularView<Eigen::Lower>();
    const Eigen::VectorXd whitened = lower.solve(residual);
    const Eigen::VectorXd alpha = lower.transpose().solve(whitened);
    const Eigen::MatrixXd v = lower.solve(k_go.transpose());

    out.mean = prior_mean + k_go * alpha;
    Eigen::MatrixXd cov = out.cov - v.transpose() * v;
    out.cov = 0.5 * (cov + cov.transpose());
    out.jitter = chol.jitter;
    out.log_marginal = -0.5 * whitened.squaredNorm() - chol.lower.diagonal().array().log().sum() -
                       0.5 * static_cast<double>(no) * std::log(2.0 * std::numbers::pi);
    return out;
}

PosteriorSummary solve_linear_ode(const LinearOperator& l, const std::function<double(double)>& f,
                                  std::span<const Observation> boundary, const Grid& g, const GaussianProcessPrior& p,
                                  const OdeOptions& options) {
    std::vector<double> points;
    if (options.collocation) {
        points = *options.collocation;
    } else {
        for (std::size_t i = 1; i + 1 < g.size(); ++i) points.push_back(g[i]);
    }
    std::vector<Observation> obs;
    obs.reserve(points.size() + boundary.size());
    for (double x : points) obs.push_back({l, x, f(x), options.collocation_noise_sd});
    obs.insert(obs.end(), boundary.begin(), boundary.end());
    return condition(p, obs, g, options.condition);
}

} // namespace gpimage
