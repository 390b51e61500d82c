#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "gpimage/grid.hpp"
#include "gpimage/operator.hpp"

namespace gpimage {

/// Banded matrix realizing a linear operator on a uniform grid with accuracy-4 stencils.
///
/// Rows whose centered stencil fits inside the grid use it; the remaining rows
/// use shifted one-sided stencils of width order + 4, which keep accuracy 4.
class GridStencil {
public:
    GridStencil(const LinearOperator& t, const Grid& g);

    [[nodiscard]] std::size_t size() const noexcept { return rows_.size(); }

    /// out[i] = Σ_k w_ik in[first_i + k]. `out` must not alias `in`.
    void apply(std::span<const double> in, std::span<double> out) const;

    [[nodiscard]] Eigen::MatrixXd to_dense() const;

    /// Rows in [interior_begin, interior_end) use centered stencils for every term.
    [[nodiscard]] std::size_t interior_begin() const noexcept { return interior_begin_; }
    [[nodiscard]] std::size_t interior_end() const noexcept { return interior_end_; }
    [[nodiscard]] bool is_interior(std::size_t i) const noexcept {
        return i >= interior_begin_ && i < interior_end_;
    }

private:
    struct Row {
        std::size_t first = 0;
        std::vector<double> weights;
    };
    std::vector<Row> rows_;
    std::size_t interior_begin_ = 0;
    std::size_t interior_end_ = 0;
};

} // namespace gpimage
