#include "gpimage/finite_difference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gpimage/errors.hpp"

namespace gpimage {

std::vector<double> stencil_weights(double z, std::span<const double> nodes, int order) {
    const int n = static_cast<int>(nodes.size());
    if (order < 0 || order >= n) throw ParameterError("stencil needs more nodes than the derivative order");
    // c[j][k]: weight of node j for the k-th derivative
    std::vector<std::vector<double>> c(n, std::vector<double>(order + 1, 0.0));
    double c1 = 1.0;
    double c4 = nodes[0] - z;
    c[0][0] = 1.0;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, order);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = nodes[i] - z;
        for (int j = 0; j < i; ++j) {
            const double c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(n);
    for (int j = 0; j < n; ++j) w[j] = c[j][order];
    return w;
}

int central_width(int order) { return 2 * ((order + 1) / 2) - 1 + kStencilAccuracy; }

namespace {

struct CentralStencil {
    std::vector<double> offsets;
    std::vector<double> weights;
};

const CentralStencil& central_stencil(int order) {
    static const auto table = [] {
        std::vector<CentralStencil> t(kMaxStencilDerivative + 1);
        for (int d = 1; d <= kMaxStencilDerivative; ++d) {
            const int half = (central_width(d) - 1) / 2;
            for (int o = -half; o <= half; ++o) t[d].offsets.push_back(o);
            t[d].weights = stencil_weights(0.0, t[d].offsets, d);
        }
        return t;
    }();
    return table[order];
}

double apply_central(const std::function<double(double)>& f, double x, int order, double h) {
    const CentralStencil& s = central_stencil(order);
    double acc = 0.0;
    for (std::size_t j = 0; j < s.offsets.size(); ++j) {
        if (s.weights[j] == 0.0) continue;
        const double fx = f(x + s.offsets[j] * h);
        if (!std::isfinite(fx))
            throw EvaluationError("non-finite function value on stencil at x = " + std::to_string(x + s.offsets[j] * h));
        acc += s.weights[j] * fx;
    }
    return acc / std::pow(h, order);
}

void check_order(int order, const FdScheme& scheme) {
    if (order < 0 || order > kMaxStencilDerivative)
        throw ParameterError("finite-difference order must be in [0, 4], got " + std::to_string(order));
    if (!(scheme.base_step > 0.0)) throw ParameterError("finite-difference base step must be positive");
}

double step(const FdScheme& scheme, double x, int total_order) {
    const double eps = std::numeric_limits<double>::epsilon();
    return scheme.base_step * std::max(1.0, std::abs(x)) * std::pow(eps, 1.0 / (total_order + kStencilAccuracy));
}

const CentralStencil& stencil_or_identity(int order) {
    static const CentralStencil identity{{0.0}, {1.0}};
    return order == 0 ? identity : central_stencil(order);
}

double apply_mixed(const std::function<double(double, double)>& f, double x1, double x2, int d1, int d2, double h1,
                   double h2, bool arg2_inner) {
    const CentralStencil& s1 = stencil_or_identity(d1);
    const CentralStencil& s2 = stencil_or_identity(d2);
    const CentralStencil& outer = arg2_inner ? s1 : s2;
    const CentralStencil& inner = arg2_inner ? s2 : s1;
    double acc = 0.0;
    for (std::size_t p = 0; p < outer.offsets.size(); ++p) {
        if (outer.weights[p] == 0.0) continue;
        double row = 0.0;
        for (std::size_t q = 0; q < inner.offsets.size(); ++q) {
            if (inner.weights[q] == 0.0) continue;
            const double a = x1 + (arg2_inner ? outer.offsets[p] : inner.offsets[q]) * h1;
            const double b = x2 + (arg2_inner ? inner.offsets[q] : outer.offsets[p]) * h2;
            const double v = f(a, b);
            if (!std::isfinite(v))
                throw EvaluationError("non-finite kernel value on stencil at (" + std::to_string(a) + ", " +
                                      std::to_string(b) + ")");
            row += inner.weights[q] * v;
        }
        acc += outer.weights[p] * row;
    }
    return acc / (std::pow(h1, d1) * std::pow(h2, d2));
}

} // namespace

double fd_mixed_partial(const std::function<double(double, double)>& f, double x1, double x2, int d1, int d2,
                        const FdScheme& scheme, bool arg2_inner) {
    check_order(d1, scheme);
    check_order(d2, scheme);
    const double h1 = step(scheme, x1, d1 + d2);
    const double h2 = step(scheme, x2, d1 + d2);
    const double coarse = apply_mixed(f, x1, x2, d1, d2, h1, h2, arg2_inner);
    if (!scheme.richardson || d1 + d2 == 0) return coarse;
    const double fine = apply_mixed(f, x1, x2, d1, d2, 0.5 * h1, 0.5 * h2, arg2_inner);
    return (16.0 * fine - coarse) / 15.0;
}

double fd_derivative(const std::function<double(double)>& f, double x, int order, const FdScheme& scheme) {
    check_order(order, scheme);
    if (order == 0) {
        const double v = f(x);
        if (!std::isfinite(v)) throw EvaluationError("non-finite function value at x = " + std::to_string(x));
        return v;
    }
    const double h = step(scheme, x, order);
    const double coarse = apply_central(f, x, order, h);
    if (!scheme.richardson) return coarse;
    const double fine = apply_central(f, x, order, 0.5 * h);
    return (16.0 * fine - coarse) / 15.0;
}

} // namespace gpimage
