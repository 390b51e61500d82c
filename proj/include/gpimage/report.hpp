#pragma once

#include <optional>
#include <ostream>
#include <string>

#include <json.hpp>

#include "gpimage/condition.hpp"
#include "gpimage/ensemble.hpp"
#include "gpimage/verify.hpp"

namespace gpimage {

/// Version tag written as "schema" in every report.json; bump on any field change.
inline constexpr const char* kReportSchema = "gpimage.report/1";

/// %.17g; "nan", "inf", "-inf" for non-finite values.
[[nodiscard]] std::string format_double(double v);

/// Key order is fixed; non-finite numbers become null.
[[nodiscard]] nlohmann::ordered_json to_json(const VerificationReport& r);

/// `reference`, when given, adds a max_error field against those grid values.
[[nodiscard]] nlohmann::ordered_json to_json(const PosteriorSummary& s,
                                             const std::optional<Eigen::VectorXd>& reference = std::nullopt);

/// Columns: x, interior, empirical_mean, predicted_mean, mean_bound, empirical_var, predicted_var, var_bound.
void write_deviations_csv(std::ostream& out, const VerificationReport& r);

/// Columns: x, mean, variance[, reference, error].
void write_posterior_csv(std::ostream& out, const PosteriorSummary& s,
                         const std::optional<Eigen::VectorXd>& reference = std::nullopt);

/// Long format, columns: path, x, u.
void write_ensemble_csv(std::ostream& out, const SampleEnsemble& e);

/// Columns: x1, x2, k, T1k, T2k, T1T2k over every grid pair, x1 major.
void write_kernel_table_csv(std::ostream& out, const Kernel& k, const LinearOperator& t, const Grid& g,
                            const ApplyOptions& options = {});

} // namespace gpimage
