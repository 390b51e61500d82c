#include "cli.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include <omp.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "gpimage/catalog.hpp"
#include "gpimage/errors.hpp"
#include "gpimage/report.hpp"

namespace gpimage::cli {

namespace {

using nlohmann::json;

/// Schema problem at a key path such as "solve.boundary[1].location".
class ConfigError : public Error {
public:
    ConfigError(const std::string& origin, const std::string& path, const std::string& what)
        : Error(origin + ": " + (path.empty() ? "" : path + ": ") + what) {}
};

struct Ctx {
    const std::string& origin;

    [[noreturn]] void fail(const std::string& path, const std::string& what) const {
        throw ConfigError(origin, path, what);
    }

    void only_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) const {
        if (!j.is_object()) fail(path, "expected an object");
        const std::set<std::string> keys(allowed.begin(), allowed.end());
        for (const auto& [k, _] : j.items())
            if (!keys.contains(k)) fail(path.empty() ? k : path + "." + k, "unknown key");
    }

    double number(const json& j, const std::string& path) const {
        if (!j.is_number()) fail(path, "expected a number");
        return j.get<double>();
    }

    std::uint64_t count(const json& j, const std::string& path) const {
        if (!j.is_number_integer() || j.get<std::int64_t>() < 0) fail(path, "expected a non-negative integer");
        return j.get<std::uint64_t>();
    }

    std::string string(const json& j, const std::string& path) const {
        if (!j.is_string()) fail(path, "expected a string");
        return j.get<std::string>();
    }

    Expr expr(const json& j, const std::string& path) const {
        if (j.is_number()) return Expr::constant(j.get<double>());
        const std::string text = string(j, path);
        try {
            return Expr::parse(text);
        } catch (const ParseError& e) {
            fail(path, "column " + std::to_string(e.column()) + " of expression: " + e.what());
        }
    }
};

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

/// "x*D^2 - D + 1": terms separated by '+' or '-', each `[coef *] D[^n]` or a bare coefficient.
LinearOperator parse_operator_text(const Ctx& ctx, const std::string& text, const std::string& path) {
    if (text == "identity" || text == "I") return LinearOperator::identity();
    if (text == "d/dx") return LinearOperator::derivative(1);
    if (text == "d2/dx2") return LinearOperator::derivative(2);

    // split on top-level '+' and binary '-'; a '-' after an operator or an exponent 'e' stays in the term
    std::vector<std::pair<bool, std::string>> pieces;  // (negated, text)
    int depth = 0;
    bool negated = false;
    std::string cur;
    auto binary_minus = [&] {
        const std::string t = trim(cur);
        if (t.empty()) return false;
        const char last = t.back();
        if (std::string_view("*/^(+-").find(last) != std::string_view::npos) return false;
        const bool exponent = (last == 'e' || last == 'E') && t.size() >= 2 &&
                              (std::isdigit(static_cast<unsigned char>(t[t.size() - 2])) || t[t.size() - 2] == '.');
        return !exponent;
    };
    for (char c : text) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (depth == 0 && (c == '+' || (c == '-' && binary_minus()))) {
            pieces.emplace_back(negated, cur);
            cur.clear();
            negated = c == '-';
        } else {
            cur += c;
        }
    }
    pieces.emplace_back(negated, cur);

    std::vector<LinearOperator::Term> terms;
    for (const auto& [neg, raw] : pieces) {
        std::string piece = trim(raw);
        if (piece.empty()) ctx.fail(path, "empty term in operator '" + text + "'");
        int order = 0;
        std::string coef = piece;
        const std::size_t d = piece.rfind('D');
        if (d != std::string::npos) {
            std::string tail = trim(std::string_view(piece).substr(d + 1));
            order = 1;
            if (!tail.empty()) {
                if (tail[0] != '^') ctx.fail(path, "expected '^' after D in '" + piece + "'");
                tail = trim(std::string_view(tail).substr(1));
                if (tail.empty() || tail.find_first_not_of("0123456789") != std::string::npos)
                    ctx.fail(path, "expected a derivative order after 'D^' in '" + piece + "'");
                order = std::stoi(tail);
            }
            coef = trim(std::string_view(piece).substr(0, d));
            if (coef.empty() || coef == "-") {
                coef = coef + "1";
            } else {
                if (coef.back() != '*') ctx.fail(path, "expected '*' before D in '" + piece + "'");
                coef = trim(std::string_view(coef).substr(0, coef.size() - 1));
            }
        }
        if (neg) coef = "-(" + coef + ")";
        try {
            terms.push_back({order, Expr::parse(coef)});
        } catch (const ParseError& e) {
            ctx.fail(path, "coefficient '" + coef + "': " + e.what());
        }
    }
    return LinearOperator(std::move(terms));
}

LinearOperator parse_operator(const Ctx& ctx, const json& j, const std::string& path) {
    if (j.is_string()) return parse_operator_text(ctx, j.get<std::string>(), path);
    if (!j.is_array()) ctx.fail(path, "expected an operator string or a list of [order, coefficient] pairs");
    std::vector<LinearOperator::Term> terms;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string p = path + "[" + std::to_string(i) + "]";
        const json& t = j[i];
        if (!t.is_array() || t.size() != 2) ctx.fail(p, "expected [order, coefficient]");
        terms.push_back({static_cast<int>(ctx.count(t[0], p + "[0]")), ctx.expr(t[1], p + "[1]")});
    }
    return LinearOperator(std::move(terms));
}

Kernel parse_kernel(const Ctx& ctx, const json& j) {
    ctx.only_keys(j, "kernel", {"name", "nu", "lengthscale", "variance"});
    if (!j.contains("name")) ctx.fail("kernel.name", "missing");
    const std::string name = ctx.string(j["name"], "kernel.name");
    const double ell = j.contains("lengthscale") ? ctx.number(j["lengthscale"], "kernel.lengthscale") : 1.0;
    const double var = j.contains("variance") ? ctx.number(j["variance"], "kernel.variance") : 1.0;
    try {
        if (name == "se") {
            if (j.contains("nu")) ctx.fail("kernel.nu", "only valid for matern");
            return se_kernel(ell, var);
        }
        if (name == "matern") {
            if (!j.contains("nu")) ctx.fail("kernel.nu", "missing");
            return matern_kernel(matern_order_from_nu(ctx.number(j["nu"], "kernel.nu")), ell, var);
        }
    } catch (const ParameterError& e) {
        ctx.fail("kernel", e.what());
    }
    ctx.fail("kernel.name", "unknown kernel '" + name + "' (expected se or matern)");
}

Grid parse_grid(const Ctx& ctx, const json& j, const std::string& path) {
    if (j.is_array()) {
        std::vector<double> pts;
        for (std::size_t i = 0; i < j.size(); ++i) pts.push_back(ctx.number(j[i], path + "[" + std::to_string(i) + "]"));
        try {
            return Grid(std::move(pts));
        } catch (const Error& e) {
            ctx.fail(path, e.what());
        }
    }
    ctx.only_keys(j, path, {"start", "stop", "count"});
    for (const char* k : {"start", "stop", "count"})
        if (!j.contains(k)) ctx.fail(path + "." + k, "missing");
    try {
        return Grid::uniform(ctx.number(j["start"], path + ".start"), ctx.number(j["stop"], path + ".stop"),
                             static_cast<std::size_t>(ctx.count(j["count"], path + ".count")));
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        ctx.fail(path, e.what());
    }
}

VerifyTolerances parse_tolerances(const Ctx& ctx, const json& j) {
    ctx.only_keys(j, "tolerances",
                  {"mean_z", "cov_z", "cumulant_z", "mean_abs", "cov_abs", "commutator_closed", "commutator_fd",
                   "psd_jitter"});
    VerifyTolerances t;
    auto read = [&](const char* key, double& slot) {
        if (j.contains(key)) slot = ctx.number(j[key], std::string("tolerances.") + key);
    };
    read("mean_z", t.mean_z);
    read("cov_z", t.cov_z);
    read("cumulant_z", t.cumulant_z);
    read("mean_abs", t.mean_abs);
    read("cov_abs", t.cov_abs);
    read("commutator_closed", t.commutator_closed);
    read("commutator_fd", t.commutator_fd);
    read("psd_jitter", t.psd_jitter);
    return t;
}

Strategy parse_strategy(const Ctx& ctx, const json& j) {
    const std::string s = ctx.string(j, "strategy");
    if (s == "automatic") return Strategy::automatic;
    if (s == "closed_form") return Strategy::closed_form;
    if (s == "finite_difference") return Strategy::finite_difference;
    ctx.fail("strategy", "expected automatic, closed_form or finite_difference");
}

Observation parse_observation(const Ctx& ctx, const json& j, const std::string& path) {
    ctx.only_keys(j, path, {"operator", "location", "value", "noise_sd"});
    for (const char* k : {"location", "value"})
        if (!j.contains(k)) ctx.fail(path + "." + k, "missing");
    Observation o;
    o.op = j.contains("operator") ? parse_operator(ctx, j["operator"], path + ".operator") : LinearOperator::identity();
    o.location = ctx.number(j["location"], path + ".location");
    o.value = ctx.number(j["value"], path + ".value");
    if (j.contains("noise_sd")) o.noise_sd = ctx.number(j["noise_sd"], path + ".noise_sd");
    if (o.noise_sd < 0.0) ctx.fail(path + ".noise_sd", "must be non-negative");
    return o;
}

SolveConfig parse_solve(const Ctx& ctx, const json& j, const LinearOperator& fallback) {
    ctx.only_keys(j, "solve",
                  {"operator", "rhs", "boundary", "collocation", "collocation_noise_sd", "max_jitter", "reference",
                   "max_error"});
    SolveConfig s;
    s.op = j.contains("operator") ? parse_operator(ctx, j["operator"], "solve.operator") : fallback;
    if (!j.contains("rhs")) ctx.fail("solve.rhs", "missing");
    s.rhs = ctx.expr(j["rhs"], "solve.rhs");
    if (j.contains("boundary")) {
        if (!j["boundary"].is_array()) ctx.fail("solve.boundary", "expected a list of observations");
        for (std::size_t i = 0; i < j["boundary"].size(); ++i)
            s.boundary.push_back(parse_observation(ctx, j["boundary"][i], "solve.boundary[" + std::to_string(i) + "]"));
    }
    if (j.contains("collocation")) {
        const Grid c = parse_grid(ctx, j["collocation"], "solve.collocation");
        s.collocation = std::vector<double>(c.points().begin(), c.points().end());
    }
    if (j.contains("collocation_noise_sd"))
        s.collocation_noise_sd = ctx.number(j["collocation_noise_sd"], "solve.collocation_noise_sd");
    if (j.contains("max_jitter")) s.max_jitter = ctx.number(j["max_jitter"], "solve.max_jitter");
    if (j.contains("reference")) s.reference = ctx.expr(j["reference"], "solve.reference");
    if (j.contains("max_error")) s.max_error = ctx.number(j["max_error"], "solve.max_error");
    return s;
}

/// 1-based line and column of a byte offset.
std::pair<std::size_t, std::size_t> locate(std::string_view text, std::size_t offset) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

} // namespace

RunConfig parse_config(std::string_view text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        // e.byte counts the offending character itself
        const auto [line, col] = locate(text, e.byte > 0 ? e.byte - 1 : 0);
        throw ParseError(origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + e.what(),
                         static_cast<int>(line), static_cast<int>(col));
    }
    const Ctx ctx{origin};
    ctx.only_keys(j, "",
                  {"kernel", "mean", "operator", "grid", "samples", "seed", "expected", "tolerances",
                   "cumulant_tuples", "strategy", "output", "solve"});

    if (!j.contains("kernel")) ctx.fail("kernel", "missing");
    RunConfig c{.prior = GaussianProcessPrior{MeanFunction(), parse_kernel(ctx, j["kernel"])}};
    if (j.contains("mean")) c.prior.mean = MeanFunction::from_expr(ctx.expr(j["mean"], "mean"));
    if (j.contains("operator")) c.op = parse_operator(ctx, j["operator"], "operator");
    if (j.contains("grid")) c.grid = parse_grid(ctx, j["grid"], "grid");
    if (j.contains("samples")) c.samples = ctx.count(j["samples"], "samples");
    if (c.samples < 2) ctx.fail("samples", "need at least 2 samples");
    if (j.contains("seed")) c.seed = ctx.count(j["seed"], "seed");
    if (j.contains("expected")) {
        const std::string e = ctx.string(j["expected"], "expected");
        if (e != "pass" && e != "rejection") ctx.fail("expected", "expected \"pass\" or \"rejection\"");
        c.expect_rejection = e == "rejection";
    }
    c.verify.expect_rejection = c.expect_rejection;
    if (j.contains("tolerances")) c.verify.tolerances = parse_tolerances(ctx, j["tolerances"]);
    if (j.contains("cumulant_tuples"))
        c.verify.cumulant_tuples = static_cast<int>(ctx.count(j["cumulant_tuples"], "cumulant_tuples"));
    if (j.contains("strategy")) c.apply.strategy = parse_strategy(ctx, j["strategy"]);
    if (j.contains("output")) c.output = ctx.string(j["output"], "output");
    if (j.contains("solve")) c.solve = parse_solve(ctx, j["solve"], c.op);
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open config " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path.string());
}

namespace {

const Grid& require_grid(const RunConfig& c) {
    if (!c.grid) throw Error("config has no grid");
    return *c.grid;
}

void write_text(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw Error("cannot write " + p.string());
    out << text;
    if (!out) throw Error("failed writing " + p.string());
}

template <class Fn>
void write_with(const std::filesystem::path& p, Fn&& fn) {
    std::ostringstream buf;
    fn(buf);
    write_text(p, buf.str());
}

int cmd_verify(const RunConfig& c, std::ostream& out) {
    const VerificationReport r = verify_theorem(c.prior, c.op, require_grid(c), c.samples, c.seed, c.verify);
    write_text(c.output / "report.json", to_json(r).dump(2) + "\n");
    if (!r.rejected) write_with(c.output / "deviations.csv", [&](std::ostream& o) { write_deviations_csv(o, r); });
    if (r.rejected && !c.expect_rejection) {
        out << "error: operator rejected: " << r.rejection_reason << "\n";
        return kExitError;
    }
    out << (r.passed ? "PASS" : "FAIL") << " verify " << r.operator_label << " on " << r.prior
        << (r.rejected ? " (rejected as expected)" : "") << "\n";
    return r.passed ? kExitPass : kExitToleranceFail;
}

int cmd_solve(const RunConfig& c, std::ostream& out) {
    if (!c.solve) throw Error("config has no solve section");
    const SolveConfig& s = *c.solve;
    const Grid& g = require_grid(c);
    OdeOptions opts;
    opts.condition.apply = c.apply;
    opts.condition.max_jitter = s.max_jitter;
    opts.collocation = s.collocation;
    opts.collocation_noise_sd = s.collocation_noise_sd;
    const Expr rhs = s.rhs;
    const PosteriorSummary post = solve_linear_ode(s.op, [&](double x) { return rhs(x); }, s.boundary, g, c.prior, opts);

    std::optional<Eigen::VectorXd> reference;
    if (s.reference) {
        reference = Eigen::VectorXd(static_cast<Eigen::Index>(g.size()));
        for (std::size_t i = 0; i < g.size(); ++i) (*reference)[static_cast<Eigen::Index>(i)] = (*s.reference)(g[i]);
    }
    nlohmann::ordered_json j = to_json(post, reference);
    j["operator"] = s.op.label();
    j["prior"] = "GP(" + c.prior.mean.label() + ", " + c.prior.kernel.label() + ")";
    j["rhs"] = s.rhs.to_string();
    bool passed = true;
    if (s.max_error) {
        j["max_error_bound"] = *s.max_error;
        passed = reference && j["max_error"].is_number() && j["max_error"].get<double>() <= *s.max_error;
    }
    j["passed"] = passed;
    write_text(c.output / "report.json", j.dump(2) + "\n");
    write_with(c.output / "posterior.csv", [&](std::ostream& o) { write_posterior_csv(o, post, reference); });
    out << (passed ? "PASS" : "FAIL") << " solve " << s.op.label() << " u = " << s.rhs.to_string();
    if (reference) out << " max_error=" << format_double(j["max_error"].get<double>());
    out << "\n";
    return passed ? kExitPass : kExitToleranceFail;
}

int cmd_sample(const RunConfig& c, std::ostream& out) {
    const SampleEnsemble u = sample_paths(c.prior, require_grid(c), c.samples, c.seed, c.verify.tolerances.psd_jitter);
    write_with(c.output / "samples.csv", [&](std::ostream& o) { write_ensemble_csv(o, u); });
    if (!c.op.is_identity()) {
        const SampleEnsemble v = apply_operator_pathwise(c.op, u);
        write_with(c.output / "image_samples.csv", [&](std::ostream& o) { write_ensemble_csv(o, v); });
    }
    out << "wrote " << u.count() << " paths\n";
    return kExitPass;
}

int cmd_kernel_table(const RunConfig& c, std::ostream& out) {
    write_with(c.output / "kernel_table.csv",
               [&](std::ostream& o) { write_kernel_table_csv(o, c.prior.kernel, c.op, require_grid(c), c.apply); });
    out << "wrote kernel table for " << c.op.label() << "\n";
    return kExitPass;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Gaussian processes through linear operators: verification and solves", "gpimage"};
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir;
    int threads = 0;
    app.add_option("--config", config_path, "JSON run configuration")->required();
    app.add_option("--seed", seed, "override the config seed");
    app.add_option("--out", out_dir, "override the output directory");
    app.add_option("--threads", threads, "OpenMP threads (0 keeps the runtime default)")->check(CLI::NonNegativeNumber);
    app.require_subcommand(1, 1);
    app.fallthrough();
    auto* verify = app.add_subcommand("verify", "Monte-Carlo check of the image process; writes report.json, deviations.csv");
    auto* solve = app.add_subcommand("solve", "collocation solve of a linear ODE; writes report.json, posterior.csv");
    auto* sample = app.add_subcommand("sample", "dump prior sample paths; writes samples.csv");
    auto* table = app.add_subcommand("kernel-table", "tabulate k, T1k, T2k, T1T2k; writes kernel_table.csv");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitPass : kExitError;
    }

    try {
        RunConfig c = load_config(config_path);
        if (seed) c.seed = *seed;
        if (!out_dir.empty()) c.output = out_dir;
        if (threads > 0) omp_set_num_threads(threads);
        std::filesystem::create_directories(c.output);
        if (verify->parsed()) return cmd_verify(c, out);
        if (solve->parsed()) return cmd_solve(c, out);
        if (sample->parsed()) return cmd_sample(c, out);
        if (table->parsed()) return cmd_kernel_table(c, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}

} // namespace gpimage::cli
