#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gpimage/apply.hpp"
#include "gpimage/grid.hpp"
#include "gpimage/prior.hpp"

namespace gpimage {

/// Variance added to every observation on top of noise_sd².
inline constexpr double kObservationNoiseFloor = 1e-8;

/// value = (operator u)(location) + ε, ε ~ N(0, noise_sd²).
struct Observation {
    LinearOperator op;
    double location = 0.0;
    double value = 0.0;
    double noise_sd = 0.0;
};

struct PosteriorSummary {
    Grid grid;
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;
    /// log p(values) under the prior, noise floor included.
    double log_marginal = 0.0;
    /// Jitter the observation Gram needed beyond the noise floor.
    double jitter = 0.0;
    std::size_t observations = 0;
};

struct ConditionOptions {
    ApplyOptions apply{};
    double max_jitter = 1e-6;
    /// Admissible observation locations; defaults to the output grid's span.
    std::optional<std::pair<double, double>> domain;
};

/// Gram of the observation functionals: entry (i, j) is (S_i)₁ (S_j)₂ k at (loc_i, loc_j),
/// or (S_j)₂ (S_i)₁ k when `arg2_first` is false. Noise is not included.
[[nodiscard]] Eigen::MatrixXd observation_gram(const Kernel& k, std::span<const Observation> obs,
                                               bool arg2_first = true, const ApplyOptions& options = {});

/// Gaussian conditioning of u ~ p on the observations, tabulated on g. These are the
/// standard joint-Gaussian formulas; well-posedness for unbounded S_j is assumed.
///
/// Uses cross-covariances (S_j)₂ k(x, loc_j) and the observation Gram above plus
/// noise_sd² + kObservationNoiseFloor on its diagonal. Throws DomainError for an
/// operator outside the prior's domain, ParameterError for a location outside the
/// domain, NotPositiveDefiniteError when the Gram does not factorize.
[[nodiscard]] PosteriorSummary condition(const GaussianProcessPrior& p, std::span<const Observation> obs,
                                         const Grid& g, const ConditionOptions& options = {});

struct OdeOptions {
    ConditionOptions condition{};
    /// Collocation points; defaults to the interior points of the output grid.
    std::optional<std::vector<double>> collocation;
    double collocation_noise_sd = 0.0;
};

/// Posterior for L u = f: observes (L u)(x_c) = f(x_c) at collocation points, adds the
/// boundary observations, and conditions.
[[nodiscard]] PosteriorSummary solve_linear_ode(const LinearOperator& l, const std::function<double(double)>& f,
                                                std::span<const Observation> boundary, const Grid& g,
                                                const GaussianProcessPrior& p, const OdeOptions& options = {});

} // namespace gpimage
