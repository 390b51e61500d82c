#include "gpimage/report.hpp"

#include <cmath>
#include <cstdio>

#include "gpimage/errors.hpp"

namespace gpimage {

using nlohmann::ordered_json;

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

ordered_json number(double v) {
    if (!std::isfinite(v)) return nullptr;
    return v;
}

ordered_json optional_number(const std::optional<double>& v) {
    if (!v) return nullptr;
    return number(*v);
}

ordered_json cumulant_list(const std::vector<CumulantEstimate>& list) {
    ordered_json out = ordered_json::array();
    for (const auto& c : list) {
        out.push_back({{"indices", c.indices},
                       {"points", c.points},
                       {"value", number(c.value)},
                       {"standard_error", number(c.standard_error)},
                       {"standardized", number(c.standardized())}});
    }
    return out;
}

} // namespace

ordered_json to_json(const VerificationReport& r) {
    const auto& t = r.tolerances;
    ordered_json j;
    j["schema"] = kReportSchema;
    j["kind"] = "verify";
    j["prior"] = r.prior;
    j["operator"] = r.operator_label;
    j["grid"] = {{"start", r.grid_start}, {"stop", r.grid_stop}, {"count", r.grid_size}};
    j["samples"] = r.samples;
    j["seed"] = r.seed;
    j["tolerances"] = {{"mean_z", number(t.mean_z)},
                       {"cov_z", number(t.cov_z)},
                       {"cumulant_z", number(t.cumulant_z)},
                       {"mean_abs", number(t.mean_abs)},
                       {"cov_abs", number(t.cov_abs)},
                       {"commutator_closed", number(t.commutator_closed)},
                       {"commutator_fd", number(t.commutator_fd)},
                       {"psd_jitter", number(t.psd_jitter)}};
    j["expected"] = r.expect_rejection ? "rejection" : "pass";
    j["rejected"] = r.rejected;
    j["rejection_reason"] = r.rejected ? ordered_json(r.rejection_reason) : ordered_json(nullptr);
    if (!r.rejected) {
        j["mean"] = {{"max_abs_deviation", number(r.mean.max_abs_deviation)},
                     {"max_standardized", number(r.mean.max_standardized)},
                     {"max_bound", number(r.mean.max_bound)},
                     {"boundary_max_abs_deviation", number(r.mean.boundary_max_abs_deviation)},
                     {"passed", r.mean.passed}};
        const auto& c = r.covariance;
        j["covariance"] = {{"max_abs_deviation", number(c.max_abs_deviation)},
                           {"max_standardized", number(c.max_standardized)},
                           {"boundary_max_abs_deviation", number(c.boundary_max_abs_deviation)},
                           {"commutator_closed", optional_number(c.commutator_closed)},
                           {"commutator_fd", optional_number(c.commutator_fd)},
                           {"psd_ok", c.psd_ok},
                           {"psd_jitter", number(c.psd_jitter)},
                           {"passed", c.passed}};
        const auto& k = r.cumulants;
        j["cumulants"] = {{"max_standardized_third", number(k.max_standardized_third)},
                          {"max_standardized_fourth", number(k.max_standardized_fourth)},
                          {"third", cumulant_list(k.third)},
                          {"fourth", cumulant_list(k.fourth)},
                          {"passed", k.passed}};
    }
    j["passed"] = r.passed;
    return j;
}

ordered_json to_json(const PosteriorSummary& s, const std::optional<Eigen::VectorXd>& reference) {
    const auto n = static_cast<Eigen::Index>(s.grid.size());
    if (reference && reference->size() != n) throw DimensionError("reference length does not match the grid");
    ordered_json j;
    j["schema"] = kReportSchema;
    j["kind"] = "posterior";
    j["grid"] = {{"start", s.grid.front()}, {"stop", s.grid.back()}, {"count", s.grid.size()}};
    j["observations"] = s.observations;
    j["noise_floor"] = kObservationNoiseFloor;
    j["jitter"] = number(s.jitter);
    j["log_marginal"] = number(s.log_marginal);
    double max_var = 0.0;
    double min_var = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) {
        max_var = std::max(max_var, s.cov(i, i));
        min_var = std::min(min_var, s.cov(i, i));
    }
    j["max_variance"] = number(max_var);
    j["min_variance"] = number(min_var);
    if (reference) {
        double err = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) err = std::max(err, std::abs(s.mean[i] - (*reference)[i]));
        j["max_error"] = number(err);
    }
    ordered_json mean = ordered_json::array();
    ordered_json var = ordered_json::array();
    for (Eigen::Index i = 0; i < n; ++i) {
        mean.push_back(number(s.mean[i]));
        var.push_back(number(s.cov(i, i)));
    }
    j["mean"] = std::move(mean);
    j["variance"] = std::move(var);
    return j;
}

void write_deviations_csv(std::ostream& out, const VerificationReport& r) {
    out << "x,interior,empirical_mean,predicted_mean,mean_bound,empirical_var,predicted_var,var_bound\n";
    for (const auto& p : r.points) {
        out << format_double(p.x) << ',' << (p.interior ? 1 : 0) << ',' << format_double(p.empirical_mean) << ','
            << format_double(p.predicted_mean) << ',' << format_double(p.mean_bound) << ','
            << format_double(p.empirical_var) << ',' << format_double(p.predicted_var) << ','
            << format_double(p.var_bound) << '\n';
    }
}

void write_posterior_csv(std::ostream& out, const PosteriorSummary& s, const std::optional<Eigen::VectorXd>& reference) {
    const auto n = static_cast<Eigen::Index>(s.grid.size());
    if (reference && reference->size() != n) throw DimensionError("reference length does not match the grid");
    out << (reference ? "x,mean,variance,reference,error\n" : "x,mean,variance\n");
    for (Eigen::Index i = 0; i < n; ++i) {
        out << format_double(s.grid[static_cast<std::size_t>(i)]) << ',' << format_double(s.mean[i]) << ','
            << format_double(s.cov(i, i));
        if (reference) out << ',' << format_double((*reference)[i]) << ',' << format_double(s.mean[i] - (*reference)[i]);
        out << '\n';
    }
}

void write_ensemble_csv(std::ostream& out, const SampleEnsemble& e) {
    out << "path,x,u\n";
    const PathMatrix& x = e.paths();
    for (Eigen::Index p = 0; p < x.rows(); ++p)
        for (Eigen::Index i = 0; i < x.cols(); ++i)
            out << p << ',' << format_double(e.grid()[static_cast<std::size_t>(i)]) << ',' << format_double(x(p, i))
                << '\n';
}

void write_kernel_table_csv(std::ostream& out, const Kernel& k, const LinearOperator& t, const Grid& g,
                            const ApplyOptions& options) {
    const Kernel t1 = apply_arg(t, Slot::arg1, k, options);
    const Kernel t2 = apply_arg(t, Slot::arg2, k, options);
    const Kernel t12 = apply_both(t, k, options);
    out << "x1,x2,k,T1k,T2k,T1T2k\n";
    for (std::size_t i = 0; i < g.size(); ++i) {
        for (std::size_t j = 0; j < g.size(); ++j) {
            const double a = g[i];
            const double b = g[j];
            out << format_double(a) << ',' << format_double(b) << ',' << format_double(k(a, b)) << ','
                << format_double(t1(a, b)) << ',' << format_double(t2(a, b)) << ',' << format_double(t12(a, b))
                << '\n';
        }
    }
}

} // namespace gpimage
