#pragma once

// Independent reference computations used by the test suites. Nothing here calls
// into the library's derivative machinery.

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

/// Small deterministic generator for property tests (SplitMix64).
class Gen {
public:
    explicit Gen(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double uniform(double lo, double hi) { return lo + (hi - lo) * static_cast<double>(next() >> 11) * 0x1.0p-53; }
    int integer(int lo, int hi) { return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1)); }

private:
    std::uint64_t state_;
};

/// First derivative by a 4-point central difference, Richardson-extrapolated twice.
inline double d1(const std::function<double(double)>& f, double x, double h = 1e-2) {
    auto central = [&](double s) {
        return (f(x - 2 * s) - 8 * f(x - s) + 8 * f(x + s) - f(x + 2 * s)) / (12 * s);
    };
    const double a = central(h);
    const double b = central(h / 2);
    return (16 * b - a) / 15;
}

/// Second derivative by a 5-point central difference, Richardson-extrapolated once.
inline double d2(const std::function<double(double)>& f, double x, double h = 1e-2) {
    auto central = [&](double s) {
        return (-f(x - 2 * s) + 16 * f(x - s) - 30 * f(x) + 16 * f(x + s) - f(x + 2 * s)) / (12 * s * s);
    };
    const double a = central(h);
    const double b = central(h / 2);
    return (16 * b - a) / 15;
}

inline double se(double x1, double x2, double ell, double var) {
    const double r = x1 - x2;
    return var * std::exp(-r * r / (2 * ell * ell));
}

/// Textbook half-integer Matérn forms.
inline double matern(double nu, double x1, double x2, double ell, double var) {
    const double r = std::abs(x1 - x2);
    if (nu == 0.5) return var * std::exp(-r / ell);
    if (nu == 1.5) {
        const double s = std::sqrt(3.0) * r / ell;
        return var * (1 + s) * std::exp(-s);
    }
    if (nu == 2.5) {
        const double s = std::sqrt(5.0) * r / ell;
        return var * (1 + s + s * s / 3) * std::exp(-s);
    }
    const double s = std::sqrt(7.0) * r / ell;
    return var * (1 + s + 2 * s * s / 5 + s * s * s / 15) * std::exp(-s);
}

/// Bell numbers by brute-force counting of block-assignment vectors in canonical form.
inline std::uint64_t brute_force_partitions(int n) {
    std::uint64_t count = 0;
    std::vector<int> a(n, 0);
    while (true) {
        // canonical: label of each element ≤ 1 + max label before it
        bool canonical = a.empty() || a[0] == 0;
        int max_label = 0;
        for (int i = 1; i < n && canonical; ++i) {
            if (a[i] > max_label + 1) canonical = false;
            max_label = std::max(max_label, a[i]);
        }
        if (canonical) ++count;
        int i = n - 1;
        while (i >= 0 && a[i] == n - 1) a[i--] = 0;
        if (i < 0) break;
        ++a[i];
    }
    return count;
}

/// Posterior of u ~ GP(0, SE(ell, var)) given noisy observations of u′ at xs and of u at xb,
/// worked in long double with the SE partials written out by hand. Returns mean and
/// variance at `at`. The diagonal carries noise² + 1e-8, matching the library's floor.
struct SeFirstOrderPosterior {
    long double ell, var;

    using LMat = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
    using LVec = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

    long double k(long double a, long double b) const {
        const long double r = a - b;
        return var * std::exp(-r * r / (2 * ell * ell));
    }
    // ∂/∂b k(a, b)
    long double k_b(long double a, long double b) const { return (a - b) / (ell * ell) * k(a, b); }
    // ∂²/∂a∂b k(a, b)
    long double k_ab(long double a, long double b) const {
        const long double r = a - b;
        return (1 / (ell * ell) - r * r / (ell * ell * ell * ell)) * k(a, b);
    }

    std::pair<LVec, LVec> posterior(const std::vector<double>& xs, const std::vector<double>& ys, double sd,
                                    const std::vector<double>& xb, const std::vector<double>& yb, double sd_b,
                                    std::span<const double> at) const {
        const std::size_t nd = xs.size(), n = nd + xb.size();
        auto loc = [&](std::size_t i) -> long double { return i < nd ? xs[i] : xb[i - nd]; };
        auto deriv = [&](std::size_t i) { return i < nd; };
        LMat koo(n, n);
        LVec y(n);
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = i < nd ? ys[i] : yb[i - nd];
            for (std::size_t j = 0; j < n; ++j) {
                const long double a = loc(i), b = loc(j);
                long double v;
                if (deriv(i) && deriv(j)) v = k_ab(a, b);
                else if (deriv(j)) v = k_b(a, b);
                else if (deriv(i)) v = k_b(b, a);
                else v = k(a, b);
                koo(i, j) = v;
            }
            const long double s = deriv(i) ? sd : sd_b;
            koo(i, i) += s * s + 1e-8L;
        }
        LMat kgo(at.size(), n);
        for (std::size_t r = 0; r < at.size(); ++r)
            for (std::size_t j = 0; j < n; ++j) kgo(r, j) = deriv(j) ? k_b(at[r], loc(j)) : k(at[r], loc(j));
        const Eigen::LDLT<LMat> f(koo);
        const LVec mean = kgo * f.solve(y);
        LVec variance(at.size());
        const LMat w = f.solve(kgo.transpose());
        for (std::size_t r = 0; r < at.size(); ++r) variance[r] = k(at[r], at[r]) - kgo.row(r).dot(w.col(r));
        return {mean, variance};
    }
};

inline double max_abs(const Eigen::MatrixXd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

} // namespace oracle
