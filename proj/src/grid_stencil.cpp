#include "gpimage/grid_stencil.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gpimage/errors.hpp"
#include "gpimage/finite_difference.hpp"

namespace gpimage {

GridStencil::GridStencil(const LinearOperator& t, const Grid& g) {
    if (!g.is_uniform()) throw GridError("grid stencils need a uniform grid");
    if (t.order() > kMaxStencilDerivative)
        throw GridError("grid stencils support operator order <= 4, got " + std::to_string(t.order()));
    const std::size_t n = g.size();
    const double h = g.spacing();

    std::size_t half_max = 0;
    for (const auto& term : t.terms()) {
        if (term.order == 0) continue;
        const auto width = static_cast<std::size_t>(std::max(central_width(term.order), term.order + kStencilAccuracy));
        if (n < width)
            throw GridError("grid of " + std::to_string(n) + " points is too small for a derivative of order " +
                            std::to_string(term.order) + " (needs " + std::to_string(width) + ")");
        half_max = std::max(half_max, static_cast<std::size_t>((central_width(term.order) - 1) / 2));
    }
    interior_begin_ = std::min(half_max, n);
    interior_end_ = n > half_max ? n - half_max : interior_begin_;

    rows_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        // dense accumulation over the row's support, trimmed afterwards
        std::vector<double> dense(n, 0.0);
        const double x = g[i];
        const auto& terms = t.terms();
        for (std::size_t k = 0; k < terms.size(); ++k) {
            const double c = t.coefficient_derivative(k, 0, x);
            if (c == 0.0) continue;
            const int d = terms[k].order;
            if (d == 0) {
                dense[i] += c;
                continue;
            }
            const auto half = static_cast<std::ptrdiff_t>((central_width(d) - 1) / 2);
            const auto ii = static_cast<std::ptrdiff_t>(i);
            const auto nn = static_cast<std::ptrdiff_t>(n);
            std::ptrdiff_t first;
            std::ptrdiff_t width;
            if (ii - half >= 0 && ii + half <= nn - 1) {
                first = ii - half;
                width = 2 * half + 1;
            } else {
                width = d + kStencilAccuracy;
                first = std::clamp<std::ptrdiff_t>(ii - width / 2, 0, nn - width);
            }
            std::vector<double> offsets(static_cast<std::size_t>(width));
            for (std::ptrdiff_t j = 0; j < width; ++j) offsets[j] = static_cast<double>(first + j - ii);
            const std::vector<double> w = stencil_weights(0.0, offsets, d);
            const double scale = c / std::pow(h, d);
            for (std::ptrdiff_t j = 0; j < width; ++j) dense[first + j] += scale * w[j];
        }
        std::size_t lo = 0;
        while (lo < n && dense[lo] == 0.0) ++lo;
        std::size_t hi = n;
        while (hi > lo && dense[hi - 1] == 0.0) --hi;
        rows_[i].first = lo;
        rows_[i].weights.assign(dense.begin() + static_cast<std::ptrdiff_t>(lo),
                                dense.begin() + static_cast<std::ptrdiff_t>(hi));
    }
}

void GridStencil::apply(std::span<const double> in, std::span<double> out) const {
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        const Row& r = rows_[i];
        double acc = 0.0;
        for (std::size_t k = 0; k < r.weights.size(); ++k) acc += r.weights[k] * in[r.first + k];
        out[i] = acc;
    }
}

Eigen::MatrixXd GridStencil::to_dense() const {
    const auto n = static_cast<Eigen::Index>(rows_.size());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Row& r = rows_[static_cast<std::size_t>(i)];
        for (std::size_t k = 0; k < r.weights.size(); ++k) m(i, static_cast<Eigen::Index>(r.first + k)) = r.weights[k];
    }
    return m;
}

} // namespace gpimage
