#include <cmath>
#include <numbers>
#include <vector>

#include <doctest.h>

#include "gpimage/apply.hpp"
#include "gpimage/catalog.hpp"
#include "gpimage/errors.hpp"
#include "gpimage/expr.hpp"
#include "gpimage/finite_difference.hpp"
#include "gpimage/grid.hpp"
#include "oracles.hpp"

using namespace gpimage;

namespace {

MeanFunction fn(const char* text) { return MeanFunction::from_expr(Expr::parse(text)); }

LinearOperator op(const char* coef, int order) { return LinearOperator::term(order, Expr::parse(coef)); }

const ApplyOptions kClosed{Strategy::closed_form, {}};
const ApplyOptions kFd{Strategy::finite_difference, {}};

/// Operators of order ≤ 2 with smooth coefficients.
std::vector<LinearOperator> operator_catalog() {
    return {LinearOperator::identity(),
            LinearOperator::derivative(1),
            LinearOperator::derivative(2),
            add(op("x", 1), LinearOperator::identity()),
            add(op("sin(x)", 1), op("x^2", 0)),
            add(op("exp(x)", 2), op("cos(x)", 1))};
}

} // namespace

TEST_CASE("expression parsing and evaluation") {
    CHECK(Expr::parse("x^2")(3) == 9.0);
    CHECK(Expr::parse("2*x + -1")(2) == 3.0);
    CHECK(Expr::parse("exp(x)*sin(x)")(0.5) == doctest::Approx(std::exp(0.5) * std::sin(0.5)));
    CHECK(Expr::parse(" 1.5e1 ")(0) == 15.0);
    CHECK(Expr::parse("-(x+1)")(1) == -2.0);
    CHECK(Expr::parse("x - 1 - 2*x")(3) == -4.0);
    CHECK(Expr::parse("sin(x - 1)")(1) == 0.0);
    CHECK(Expr::parse("x*x*x").derivative(2)(1) == 6.0);
    CHECK(Expr::parse("sin(x)").derivative(3)(0) == doctest::Approx(-1.0));
    CHECK(Expr::parse("x + 0*sin(x)").to_string() == "x");
    CHECK(Expr::parse("3").constant_value() == 3.0);
    CHECK(Expr::parse("x").derivative(2).is_zero());
}

TEST_CASE("expression parse errors carry a position") {
    try {
        (void)Expr::parse("x + * 2");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 1);
        CHECK(e.column() == 5);
    }
    CHECK_THROWS_AS((void)Expr::parse("tan(x)"), ParseError);
    CHECK_THROWS_AS((void)Expr::parse("x - "), ParseError);
    CHECK_THROWS_AS((void)Expr::parse("(x"), ParseError);
    CHECK_THROWS_AS((void)Expr::parse(""), ParseError);
}

TEST_CASE("operator construction") {
    const LinearOperator id = LinearOperator::identity();
    CHECK(id.order() == 0);
    CHECK(id.is_identity());
    CHECK(id.terms().size() == 1);
    CHECK(LinearOperator::derivative(2).order() == 2);
    // zero coefficients drop out of the order
    const LinearOperator t({{3, Expr::constant(0.0)}, {1, Expr::variable()}});
    CHECK(t.order() == 1);
    // equal orders merge
    const LinearOperator m({{1, Expr::variable()}, {1, Expr::constant(2.0)}});
    REQUIRE(m.terms().size() == 1);
    CHECK(m.terms()[0].coefficient(1) == 3.0);
    CHECK_THROWS_AS(LinearOperator({{-1, Expr::constant(1.0)}}), ParameterError);
}

TEST_CASE("stencil weights") {
    const std::vector<double> nodes{-2, -1, 0, 1, 2};
    const auto w = stencil_weights(0, nodes, 1);
    const double expected[] = {1.0 / 12, -2.0 / 3, 0, 2.0 / 3, -1.0 / 12};
    for (int i = 0; i < 5; ++i) CHECK(w[i] == doctest::Approx(expected[i]).epsilon(1e-14));
    const auto w2 = stencil_weights(0, nodes, 2);
    const double expected2[] = {-1.0 / 12, 4.0 / 3, -5.0 / 2, 4.0 / 3, -1.0 / 12};
    for (int i = 0; i < 5; ++i) CHECK(w2[i] == doctest::Approx(expected2[i]).epsilon(1e-14));
    CHECK(central_width(1) == 5);
    CHECK(central_width(2) == 5);
    CHECK(central_width(3) == 7);
    CHECK(central_width(4) == 7);
}

TEST_CASE("fd_derivative examples") {
    CHECK(std::abs(fd_derivative([](double x) { return x * x; }, 2, 1) - 4.0) <= 1e-8);
    CHECK(std::abs(fd_derivative([](double x) { return std::sin(x); }, 0, 2)) <= 1e-6);
    CHECK(std::abs(fd_derivative([](double x) { return std::exp(x); }, 1, 1) - std::numbers::e) <= 1e-8);
    CHECK(std::abs(fd_derivative([](double x) { return std::exp(x); }, 1, 1, {1.0, true}) - std::numbers::e) <= 1e-8);
    CHECK(fd_derivative([](double x) { return x; }, 5, 0) == 5.0);
    CHECK_THROWS_AS((void)fd_derivative([](double x) { return x; }, 0, 5), ParameterError);
    CHECK_THROWS_AS((void)fd_derivative([](double x) { return std::sqrt(x); }, 0, 1), EvaluationError);
}

TEST_CASE("apply_to_function examples") {
    CHECK(apply_to_function(LinearOperator::derivative(1), fn("x^2"))(3) == 6.0);
    const MeanFunction s = fn("sin(x)");
    const MeanFunction same = apply_to_function(LinearOperator::identity(), s);
    for (double x : {-1.0, 0.0, 0.3, 2.0}) CHECK(same(x) == s(x));

    const LinearOperator t = add(op("x", 1), LinearOperator::identity());
    const MeanFunction ts = apply_to_function(t, s);
    CHECK(ts(0) == 0.0);
    for (double x : {-1.0, 0.0, 0.7, 2.5}) {
        const double fd = x * oracle::d1([](double y) { return std::sin(y); }, x) + std::sin(x);
        CHECK(ts(x) == doctest::Approx(fd).epsilon(1e-10));
        CHECK(ts(x) == doctest::Approx(x * std::cos(x) + std::sin(x)).epsilon(1e-14));
    }
}

TEST_CASE("apply_to_function on value-only functions uses finite differences") {
    const MeanFunction v([](double x) { return std::exp(x); }, "exp");
    const MeanFunction dv = apply_to_function(LinearOperator::derivative(1), v);
    CHECK(dv(1) == doctest::Approx(std::numbers::e).epsilon(1e-8));
    CHECK_THROWS_AS((void)apply_to_function(LinearOperator::derivative(1), v, kClosed), DomainError);
}

TEST_CASE("apply_arg examples") {
    const Kernel k = se_kernel(1, 1);
    const Kernel t2 = apply_arg(LinearOperator::derivative(1), Slot::arg2, k);
    CHECK(t2(0, 0) == 0.0);
    const double fd = oracle::d1([](double b) { return oracle::se(0, b, 1, 1); }, 1.0);
    CHECK(t2(0, 1) == doctest::Approx(fd).epsilon(1e-9));
    // ∂k/∂x₂ = (x₁ − x₂)/ℓ² · k, so the value at (0, 1) is −e^{−1/2}; the magnitude is 0.60653
    CHECK(t2(0, 1) == doctest::Approx(-0.60653).epsilon(1e-5));
    CHECK(t2.smoothness(Slot::arg2).is_infinite());
    CHECK(apply_arg(LinearOperator::derivative(1), Slot::arg1, k)(0, 1) == doctest::Approx(0.60653).epsilon(1e-5));

    const Kernel half = matern_kernel(MaternOrder::half, 1, 1);
    for (Slot s : {Slot::arg1, Slot::arg2})
        for (const ApplyOptions& o : {ApplyOptions{}, kClosed, kFd})
            CHECK_THROWS_AS((void)apply_arg(LinearOperator::derivative(1), s, half, o), DomainError);
}

TEST_CASE("applied slots lose smoothness") {
    const Kernel m = matern_kernel(MaternOrder::five_halves, 1, 1);
    const Kernel t1 = apply_arg(LinearOperator::derivative(1), Slot::arg1, m);
    CHECK(t1.smoothness(Slot::arg1) == Smoothness(1));
    CHECK(t1.smoothness(Slot::arg2) == Smoothness(2));
    CHECK_THROWS_AS((void)apply_arg(LinearOperator::derivative(2), Slot::arg1, t1), DomainError);
    CHECK_NOTHROW((void)apply_arg(LinearOperator::derivative(2), Slot::arg2, t1));
}

TEST_CASE("apply_both examples") {
    const Kernel k = se_kernel(1, 1);
    const Kernel same = apply_both(LinearOperator::identity(), k);
    oracle::Gen gen(5);
    for (int i = 0; i < 50; ++i) {
        const double a = gen.uniform(-2, 2);
        const double b = gen.uniform(-2, 2);
        CHECK(same(a, b) == k(a, b));
    }
    const double nested = oracle::d1([](double a) { return oracle::d1([&](double b) { return oracle::se(a, b, 1, 1); }, 0.0); }, 0.0);
    CHECK(apply_both(LinearOperator::derivative(1), k)(0, 0) == doctest::Approx(nested).epsilon(1e-8));
    CHECK(apply_both(LinearOperator::derivative(1), k)(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(apply_both(LinearOperator::derivative(1), se_kernel(2, 1))(0, 0) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(apply_both(LinearOperator::derivative(1), k, kFd)(0, 0) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("commutator residuals") {
    const Grid g = Grid::uniform(0, 1, 33);
    const Kernel k = se_kernel(1, 1);
    CHECK(commutator_residual(LinearOperator::identity(), k, g) == 0.0);
    CHECK(commutator_residual(LinearOperator::identity(), k, g, kFd) == 0.0);
    CHECK(commutator_residual(LinearOperator::derivative(1), k, g, kClosed) <= 1e-12);
    const LinearOperator xd = op("x", 1);
    CHECK(commutator_residual(xd, k, g, kClosed) <= 1e-12);
    CHECK(commutator_residual(xd, k, g, kFd) <= 1e-4);
}

TEST_CASE("compose, add, scale") {
    const LinearOperator d = LinearOperator::derivative(1);
    const LinearOperator dd = compose(d, d);
    CHECK(dd.order() == 2);
    CHECK(apply_to_function(dd, fn("x^3"))(1) == 6.0);
    CHECK(apply_to_function(add(d, LinearOperator::identity()), fn("exp(x)"))(0) == 2.0);

    const LinearOperator xdd = compose(op("x", 1), d);
    CHECK(xdd.order() == 2);
    REQUIRE(xdd.terms().size() == 1);
    CHECK(apply_to_function(xdd, fn("x^2"))(1) == 2.0);
    const double nested = 1.0 * oracle::d2([](double y) { return y * y; }, 1.0);
    CHECK(apply_to_function(xdd, fn("x^2"))(1) == doctest::Approx(nested).epsilon(1e-8));

    // D ∘ (x D) = x D² + D: Leibniz produces the extra first-order term
    const LinearOperator dxd = compose(d, op("x", 1));
    CHECK(dxd.terms().size() == 2);
    CHECK(apply_to_function(dxd, fn("x^3"))(2) == doctest::Approx(9 * 4.0).epsilon(1e-14));

    const LinearOperator three = scale(3.0, d);
    CHECK(apply_to_function(three, fn("x^2"))(1) == 6.0);
    CHECK(scale(0.0, d).order() == 0);
}

TEST_CASE("property: operator application is linear") {
    oracle::Gen gen(7);
    const auto ops = operator_catalog();
    const std::vector<Kernel> kernels{se_kernel(0.8, 1.2), matern_kernel(MaternOrder::five_halves, 1.1, 0.9),
                                      matern_kernel(MaternOrder::seven_halves, 0.7, 1.0)};
    for (int trial = 0; trial < 60; ++trial) {
        const LinearOperator& s = ops[gen.integer(0, static_cast<int>(ops.size()) - 1)];
        const LinearOperator& t = ops[gen.integer(0, static_cast<int>(ops.size()) - 1)];
        const Kernel& k = kernels[gen.integer(0, 2)];
        const double c = gen.uniform(-2, 2);
        const Slot slot = gen.integer(0, 1) == 0 ? Slot::arg1 : Slot::arg2;
        const double a = gen.uniform(-1, 1);
        double b = gen.uniform(-1, 1);
        if (std::abs(a - b) < 0.2) b = a + 0.2;
        for (const auto& [opts, tol] : {std::pair{kClosed, 1e-10}, std::pair{kFd, 1e-4}}) {
            const double sum = apply_arg(add(s, t), slot, k, opts)(a, b);
            const double parts = apply_arg(s, slot, k, opts)(a, b) + apply_arg(t, slot, k, opts)(a, b);
            CHECK(std::abs(sum - parts) <= tol * std::max(1.0, std::abs(parts)));
            const double scaled = apply_arg(scale(c, t), slot, k, opts)(a, b);
            const double times = c * apply_arg(t, slot, k, opts)(a, b);
            CHECK(std::abs(scaled - times) <= tol * std::max(1.0, std::abs(times)));
        }
        const MeanFunction f = fn("sin(x)*exp(x)");
        const double lhs = apply_to_function(add(s, t), f)(a);
        const double rhs = apply_to_function(s, f)(a) + apply_to_function(t, f)(a);
        CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(rhs)));
    }
}

TEST_CASE("property: slot order does not matter and T1T2k is symmetric") {
    oracle::Gen gen(8);
    const auto ops = operator_catalog();
    const std::vector<Kernel> kernels{se_kernel(1.0, 1.0), matern_kernel(MaternOrder::five_halves, 1.0, 1.0)};
    for (int trial = 0; trial < 60; ++trial) {
        const LinearOperator& t = ops[gen.integer(0, static_cast<int>(ops.size()) - 1)];
        const Kernel& k = kernels[gen.integer(0, 1)];
        const double a = gen.uniform(-1, 1);
        double b = gen.uniform(-1, 1);
        if (std::abs(a - b) < 0.2) b = a + 0.2;
        for (const auto& [opts, tol] : {std::pair{kClosed, 1e-12}, std::pair{kFd, 1e-4}}) {
            const Kernel both = apply_both(t, k, opts);
            const Kernel reversed = apply_both_reversed(t, k, opts);
            const double scale_ref = std::max(1.0, std::abs(both(a, b)));
            CHECK(std::abs(both(a, b) - reversed(a, b)) <= tol * scale_ref);
            CHECK(std::abs(both(a, b) - both(b, a)) <= tol * scale_ref);
        }
    }
}

TEST_CASE("property: the domain guard rejects every strategy past the smoothness") {
    const std::vector<std::pair<MaternOrder, int>> cases{{MaternOrder::half, 1}, {MaternOrder::three_halves, 2},
                                                          {MaternOrder::five_halves, 3}, {MaternOrder::seven_halves, 4}};
    for (const auto& [nu, order] : cases) {
        const Kernel k = matern_kernel(nu, 1, 1);
        const LinearOperator t = add(op("x", order), LinearOperator::identity());
        for (const ApplyOptions& o : {ApplyOptions{}, kClosed, kFd}) {
            CHECK_THROWS_AS((void)apply_arg(t, Slot::arg1, k, o), DomainError);
            CHECK_THROWS_AS((void)apply_arg(t, Slot::arg2, k, o), DomainError);
            CHECK_THROWS_AS((void)apply_both(t, k, o), DomainError);
            CHECK_THROWS_AS((void)apply_both_reversed(t, k, o), DomainError);
            CHECK_THROWS_AS((void)commutator_residual(t, k, Grid::uniform(0, 1, 9), o), DomainError);
        }
        const LinearOperator ok = LinearOperator::derivative(order - 1);
        CHECK_NOTHROW((void)apply_both(ok, k));
        CHECK_NOTHROW((void)apply_both(ok, k, kFd));
    }
}

TEST_CASE("domain errors report the deficit") {
    try {
        (void)apply_both(LinearOperator::derivative(2), matern_kernel(MaternOrder::three_halves, 1, 1));
        FAIL("expected a domain error");
    } catch (const DomainError& e) {
        CHECK(e.required() == 2);
        CHECK(e.available() == 1);
        CHECK(e.deficit() == 1);
    }
}
