#include "gpimage/catalog.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "gpimage/errors.hpp"

namespace gpimage {

double hermite_he(int n, double t) {
    if (n == 0) return 1.0;
    double prev = 1.0;
    double cur = t;
    for (int k = 1; k < n; ++k) {
        const double next = t * cur - k * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

namespace {

std::string format_param(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// k(x1, x2) = φ(x1 − x2); ∂^{d1}_{x1} ∂^{d2}_{x2} k = (−1)^{d2} φ^{(d1 + d2)}(x1 − x2).
class StationaryKernel final : public KernelNode {
public:
    using Profile = std::function<double(int, double)>;

    StationaryKernel(Profile profile, int closed_budget, Smoothness smoothness, std::string label)
        : profile_(std::move(profile)),
          closed_budget_(closed_budget),
          smoothness_(smoothness),
          label_(std::move(label)) {}

    double value(double x1, double x2) const override { return profile_(0, x1 - x2); }

    bool has_closed_form(int d1, int d2) const override {
        return d1 >= 0 && d2 >= 0 && d1 + d2 <= closed_budget_;
    }

    double closed_partial(int d1, int d2, double x1, double x2) const override {
        const double v = profile_(d1 + d2, x1 - x2);
        return (d2 % 2 == 0) ? v : -v;
    }

    Smoothness smoothness(Slot) const override { return smoothness_; }
    bool symmetric() const override { return true; }
    std::string label() const override { return label_; }

private:
    Profile profile_;
    int closed_budget_;
    Smoothness smoothness_;
    std::string label_;
};

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
        throw ParameterError(std::string(name) + " must be positive and finite, got " + format_param(v));
}

} // namespace

Kernel se_kernel(double lengthscale, double variance) {
    require_positive(lengthscale, "lengthscale");
    require_positive(variance, "variance");
    // φ^{(n)}(r) = σ² (−1)^n ℓ^{−n} He_n(r/ℓ) exp(−r²/(2ℓ²))
    auto profile = [lengthscale, variance](int n, double r) {
        const double t = r / lengthscale;
        const double scale = variance * std::pow(lengthscale, -n) * ((n % 2 == 0) ? 1.0 : -1.0);
        return scale * hermite_he(n, t) * std::exp(-0.5 * t * t);
    };
    return Kernel(std::make_shared<StationaryKernel>(
        profile, kSquaredExponentialBudget, Smoothness::infinite(),
        "se(lengthscale=" + format_param(lengthscale) + ", variance=" + format_param(variance) + ")"));
}

MaternOrder matern_order_from_nu(double nu) {
    if (nu == 0.5) return MaternOrder::half;
    if (nu == 1.5) return MaternOrder::three_halves;
    if (nu == 2.5) return MaternOrder::five_halves;
    if (nu == 3.5) return MaternOrder::seven_halves;
    throw ParameterError("unsupported Matern nu " + format_param(nu) + " (expected 0.5, 1.5, 2.5 or 3.5)");
}

Kernel matern_kernel(MaternOrder nu, double lengthscale, double variance) {
    const int p = static_cast<int>(nu);
    if (p < 0 || p > 3) throw ParameterError("unsupported Matern order");
    require_positive(lengthscale, "lengthscale");
    require_positive(variance, "variance");

    // k = σ² Q_0(t) e^{−t}, t = √(2ν)|r|/ℓ, with
    // Q_0(t) = p!/(2p)! Σ_i (p+i)!/(i!(p−i)!) (2t)^{p−i}.
    // In t, d/dt [Q e^{−t}] = (Q' − Q) e^{−t}, so Q_{n+1} = Q_n' − Q_n.
    const int budget = 2 * p;
    auto factorial = [](int n) {
        double f = 1.0;
        for (int i = 2; i <= n; ++i) f *= i;
        return f;
    };
    std::vector<std::vector<double>> q(budget + 1);
    q[0].assign(p + 1, 0.0);
    for (int i = 0; i <= p; ++i) {
        const int power = p - i;
        q[0][power] = factorial(p) / factorial(2 * p) * factorial(p + i) / (factorial(i) * factorial(p - i)) *
                      std::pow(2.0, power);
    }
    for (int n = 1; n <= budget; ++n) {
        const auto& prev = q[n - 1];
        std::vector<double> next(prev.size(), 0.0);
        for (std::size_t j = 0; j < prev.size(); ++j) {
            next[j] -= prev[j];
            if (j > 0) next[j - 1] += static_cast<double>(j) * prev[j];
        }
        q[n] = std::move(next);
    }
    const double rate = std::sqrt(2.0 * p + 1.0) / lengthscale;

    auto profile = [q = std::move(q), rate, variance](int n, double r) {
        const double s = std::abs(r);
        if (r == 0.0 && n % 2 == 1) return 0.0;
        const double t = rate * s;
        const auto& c = q[n];
        double poly = 0.0;
        for (std::size_t j = c.size(); j-- > 0;) poly = poly * t + c[j];
        double v = variance * std::pow(rate, n) * poly * std::exp(-t);
        if (n % 2 == 1 && r < 0.0) v = -v;
        return v;
    };
    static constexpr const char* nu_names[] = {"1/2", "3/2", "5/2", "7/2"};
    return Kernel(std::make_shared<StationaryKernel>(
        profile, budget, Smoothness(p),
        std::string("matern(nu=") + nu_names[p] + ", lengthscale=" + format_param(lengthscale) +
            ", variance=" + format_param(variance) + ")"));
}

} // namespace gpimage
