#include <cmath>
#include <vector>

#include <doctest.h>

#include "gpimage/catalog.hpp"
#include "gpimage/errors.hpp"
#include "gpimage/grid_stencil.hpp"
#include "gpimage/linalg.hpp"
#include "gpimage/transform.hpp"
#include "oracles.hpp"

using namespace gpimage;

namespace {

GaussianProcessPrior prior(const char* mean, Kernel k) {
    return {MeanFunction::from_expr(Expr::parse(mean)), std::move(k)};
}

LinearOperator op(const char* coef, int order) { return LinearOperator::term(order, Expr::parse(coef)); }

} // namespace

TEST_CASE("pushforward by the identity reproduces the prior") {
    const GaussianProcessPrior p = prior("sin(x)", se_kernel(1, 1));
    const ImageProcess img = pushforward(p, LinearOperator::identity());
    oracle::Gen gen(1);
    for (int i = 0; i < 50; ++i) {
        const double a = gen.uniform(-2, 2);
        const double b = gen.uniform(-2, 2);
        CHECK(img.prior.mean(a) == p.mean(a));
        CHECK(img.prior.kernel(a, b) == p.kernel(a, b));
    }
    CHECK(img.operator_label == "I");
}

TEST_CASE("pushforward by d/dx") {
    const ImageProcess zero = pushforward(prior("0", se_kernel(1, 1)), LinearOperator::derivative(1));
    CHECK(zero.prior.mean(0.3) == 0.0);
    const double nested = oracle::d1([](double a) { return oracle::d1([&](double b) { return oracle::se(a, b, 1, 1); }, 0.0); }, 0.0);
    CHECK(zero.prior.kernel(0, 0) == doctest::Approx(nested).epsilon(1e-8));
    CHECK(zero.prior.kernel(0, 0) == doctest::Approx(1.0).epsilon(1e-14));

    const ImageProcess s = pushforward(prior("sin(x)", se_kernel(1, 1)), LinearOperator::derivative(1));
    CHECK(s.prior.mean(0) == 1.0);
    CHECK(s.prior.kernel.sample_smoothness().is_infinite());
}

TEST_CASE("pushforward rejects operators past the path smoothness") {
    CHECK_THROWS_AS((void)pushforward(prior("0", matern_kernel(MaternOrder::half, 1, 1)), LinearOperator::derivative(1)),
                    DomainError);
    CHECK_THROWS_AS(
        (void)pushforward(prior("0", matern_kernel(MaternOrder::three_halves, 1, 1)), LinearOperator::derivative(2)),
        DomainError);
    CHECK_NOTHROW(
        (void)pushforward(prior("0", matern_kernel(MaternOrder::three_halves, 1, 1)), LinearOperator::derivative(1)));
}

TEST_CASE("finite-dimensional pushforward examples") {
    const Eigen::Vector3d m3(1, -2, 0.5);
    const Eigen::Matrix3d c3 = (Eigen::Matrix3d() << 2, 0.3, 0, 0.3, 1, 0.1, 0, 0.1, 3).finished();
    const GaussianVector same = finite_dim_pushforward(m3, c3, Eigen::Matrix3d::Identity());
    CHECK(same.mean == m3);
    CHECK(same.cov == c3);

    const GaussianVector sum = finite_dim_pushforward(Eigen::Vector2d(1, 2), Eigen::Matrix2d::Identity(),
                                                      (Eigen::MatrixXd(1, 2) << 1, 1).finished());
    CHECK(sum.mean(0) == 3.0);
    CHECK(sum.cov(0, 0) == 2.0);

    const Eigen::MatrixXd diff = (Eigen::MatrixXd(2, 3) << -1, 1, 0, 0, -1, 1).finished();
    const GaussianVector d = finite_dim_pushforward(Eigen::Vector3d::Zero(), Eigen::Matrix3d::Identity(), diff);
    // direct products, written out
    Eigen::Matrix2d expected;
    expected << 2, -1, -1, 2;
    CHECK(d.cov == expected);
    CHECK(d.mean.isZero(0));

    CHECK_THROWS_AS((void)finite_dim_pushforward(Eigen::Vector2d::Zero(), Eigen::Matrix3d::Identity(), diff), DimensionError);
    CHECK_THROWS_AS((void)finite_dim_pushforward(Eigen::Vector2d::Zero(), Eigen::Matrix2d::Identity(), diff), DimensionError);
}

TEST_CASE("joint blocks") {
    SUBCASE("identity operator") {
        const Grid g = Grid::uniform(0, 1, 9);
        const GaussianProcessPrior p = prior("0", matern_kernel(MaternOrder::five_halves, 0.4, 1));
        const JointBlocks b = joint_blocks(p, LinearOperator::identity(), g, g);
        const Eigen::MatrixXd k = gram(p.kernel, g);
        CHECK(b.uu == k);
        CHECK(b.uv == k);
        CHECK(b.vu == k);
        CHECK(b.vv == k);
    }
    SUBCASE("derivative operator on 17 points") {
        const Grid g = Grid::uniform(0, 1, 17);
        const JointBlocks b = joint_blocks(prior("0", se_kernel(1, 1)), LinearOperator::derivative(1), g, g);
        const Eigen::MatrixXd s = b.stacked();
        CHECK(s.rows() == 34);
        CHECK(s.cols() == 34);
        const CholeskyFactor f = chol_psd(s, 1e-8);
        CHECK(f.jitter <= 1e-8);
        CHECK(b.uv(0, 0) == 0.0);
        CHECK(oracle::max_abs(b.uv - b.vu.transpose()) <= 1e-12);
    }
    SUBCASE("distinct grids") {
        const Grid gx = Grid::uniform(0, 1, 5);
        const Grid gy({0.1, 0.35, 0.9});
        const JointBlocks b = joint_blocks(prior("0", se_kernel(0.5, 2)), op("x", 1), gx, gy);
        CHECK(b.uv.rows() == 5);
        CHECK(b.uv.cols() == 3);
        CHECK(b.vu.rows() == 3);
        CHECK(b.vv.rows() == 3);
        // cross-covariance Cov(u(x), v(y)) = y ∂k/∂x₂(x, y)
        for (int i = 0; i < 5; ++i) {
            for (int j = 0; j < 3; ++j) {
                const double y = gy[j];
                const double fd = y * oracle::d1([&](double s) { return oracle::se(gx[i], s, 0.5, 2); }, y);
                CHECK(b.uv(i, j) == doctest::Approx(fd).epsilon(1e-8));
            }
        }
    }
}

TEST_CASE("property: pushforward composes") {
    oracle::Gen gen(4);
    const std::vector<LinearOperator> ops{LinearOperator::derivative(1), op("x", 1),
                                          add(op("cos(x)", 1), LinearOperator::identity()), op("exp(x)", 0)};
    const std::vector<GaussianProcessPrior> priors{prior("sin(x)", se_kernel(1, 1)),
                                                   prior("x^2", matern_kernel(MaternOrder::seven_halves, 1.2, 1))};
    for (const auto& p : priors) {
        for (const auto& s : ops) {
            for (const auto& t : ops) {
                const ImageProcess twice = pushforward(pushforward(p, t).prior, s);
                const ImageProcess once = pushforward(p, compose(s, t));
                for (int i = 0; i < 10; ++i) {
                    const double a = gen.uniform(-1, 1);
                    double b = gen.uniform(-1, 1);
                    if (std::abs(a - b) < 0.1) b = a + 0.1;
                    CHECK(std::abs(twice.prior.kernel(a, b) - once.prior.kernel(a, b)) <= 1e-8);
                    CHECK(std::abs(twice.prior.mean(a) - once.prior.mean(a)) <= 1e-8);
                }
            }
        }
    }
}

TEST_CASE("property: pushforward kernel of a sum expands bilinearly") {
    oracle::Gen gen(5);
    const Kernel k = se_kernel(0.9, 1.1);
    const LinearOperator s = op("sin(x)", 1);
    const LinearOperator t = add(op("x", 2), LinearOperator::identity());
    const Kernel sum = pushforward({MeanFunction(), k}, add(s, t)).prior.kernel;
    const Kernel ss = apply_arg(s, Slot::arg1, apply_arg(s, Slot::arg2, k));
    const Kernel st = apply_arg(s, Slot::arg1, apply_arg(t, Slot::arg2, k));
    const Kernel ts = apply_arg(t, Slot::arg1, apply_arg(s, Slot::arg2, k));
    const Kernel tt = apply_arg(t, Slot::arg1, apply_arg(t, Slot::arg2, k));
    for (int i = 0; i < 100; ++i) {
        const double a = gen.uniform(-2, 2);
        const double b = gen.uniform(-2, 2);
        const double expansion = ss(a, b) + st(a, b) + ts(a, b) + tt(a, b);
        CHECK(std::abs(sum(a, b) - expansion) <= 1e-10 * std::max(1.0, std::abs(expansion)));
    }
}

TEST_CASE("property: image kernels pass the runtime PSD check") {
    // Closed-form image kernels are PSD to rounding. FD-applied ones carry stencil
    // truncation error, so their defect is measured and bounded at that scale.
    const Grid g = Grid::uniform(-1, 1, 25);
    const std::vector<LinearOperator> ops{LinearOperator::derivative(1), LinearOperator::derivative(2), op("x", 1),
                                          add(op("exp(x)", 2), op("cos(x)", 0))};
    for (const auto& t : ops) {
        const ImageProcess closed = pushforward(prior("0", se_kernel(1, 1)), t);
        CHECK_MESSAGE(check_psd(closed.prior.kernel, g, 1e-8).ok, t.label());
        const ImageProcess fd = pushforward(prior("0", se_kernel(1, 1)), t, {Strategy::finite_difference, {}});
        const PsdCheck c = check_psd(fd.prior.kernel, g, 1e-5);
        CHECK_MESSAGE(c.ok, t.label() << " needs more than 1e-5 jitter");
        MESSAGE("fd image kernel " << t.label() << " PSD with jitter " << c.jitter);
    }
}

TEST_CASE("discrete pushforward converges to the image kernel at fourth order") {
    // Interior-point error of T_mat C T_matᵀ against gram(T₁T₂k) for doubling grids.
    const Kernel k = se_kernel(1, 1);
    const LinearOperator d = LinearOperator::derivative(1);
    const Kernel kv = apply_both(d, k);
    std::vector<double> errors;
    for (std::size_t n : {17, 33, 65, 129}) {
        const Grid g = Grid::uniform(0, 1, n);
        const GridStencil st(d, g);
        const GaussianVector v = finite_dim_pushforward(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n)), gram(k, g),
                                                        st.to_dense());
        const Eigen::MatrixXd target = gram(kv, g);
        double err = 0.0;
        for (std::size_t i = st.interior_begin(); i < st.interior_end(); ++i)
            for (std::size_t j = st.interior_begin(); j < st.interior_end(); ++j)
                err = std::max(err, std::abs(v.cov(i, j) - target(i, j)));
        errors.push_back(err);
    }
    for (std::size_t i = 1; i < errors.size(); ++i) {
        const double rate = std::log2(errors[i - 1] / errors[i]);
        CHECK_MESSAGE(rate >= 3.5, "rate " << rate << " between sizes " << i - 1 << " and " << i);
    }
}

TEST_CASE("grid stencils") {
    const Grid g = Grid::uniform(0, 1, 11);
    const GridStencil st(LinearOperator::derivative(1), g);
    CHECK(st.size() == 11);
    CHECK(st.interior_begin() == 2);
    CHECK(st.interior_end() == 9);
    std::vector<double> in(11), out(11);
    for (std::size_t i = 0; i < 11; ++i) in[i] = g[i] * g[i] * g[i];
    st.apply(in, out);
    // fourth-order stencils are exact on cubics, one-sided ones included
    for (std::size_t i = 0; i < 11; ++i) CHECK(out[i] == doctest::Approx(3 * g[i] * g[i]).epsilon(1e-10).scale(1));

    CHECK_THROWS_AS(GridStencil(LinearOperator::derivative(1), Grid({0.0, 0.1, 0.3, 0.4, 0.5, 0.6})), GridError);
    CHECK_THROWS_AS(GridStencil(LinearOperator::derivative(4), Grid::uniform(0, 1, 6)), GridError);
    CHECK_THROWS_AS(GridStencil(LinearOperator::derivative(5), Grid::uniform(0, 1, 40)), GridError);
}
