#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "gpimage/condition.hpp"
#include "gpimage/expr.hpp"
#include "gpimage/verify.hpp"

namespace gpimage::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitToleranceFail = 2;

struct SolveConfig {
    LinearOperator op;
    Expr rhs = Expr::constant(0.0);
    std::vector<Observation> boundary;
    std::optional<std::vector<double>> collocation;
    double collocation_noise_sd = 0.0;
    double max_jitter = 1e-6;
    std::optional<Expr> reference;
    std::optional<double> max_error;
};

struct RunConfig {
    GaussianProcessPrior prior;
    LinearOperator op;
    std::optional<Grid> grid;
    std::size_t samples = 10000;
    std::uint64_t seed = 0;
    bool expect_rejection = false;
    VerifyOptions verify{};
    ApplyOptions apply{};
    std::filesystem::path output = ".";
    std::optional<SolveConfig> solve;
};

/// Parses a JSON config. Syntax errors carry line and column; schema errors name the key.
/// `origin` prefixes diagnostics.
[[nodiscard]] RunConfig parse_config(std::string_view text, const std::string& origin = "config");

[[nodiscard]] RunConfig load_config(const std::filesystem::path& path);

/// Full command line, argv[0] included. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace gpimage::cli
