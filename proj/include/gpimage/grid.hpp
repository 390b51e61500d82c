#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace gpimage {

/// Strictly increasing set of at least two finite points on the real line.
class Grid {
public:
    explicit Grid(std::vector<double> points);

    /// `count` equispaced points from `start` to `stop` inclusive.
    static Grid uniform(double start, double stop, std::size_t count);

    [[nodiscard]] std::size_t size() const noexcept { return points_.size(); }
    [[nodiscard]] double operator[](std::size_t i) const { return points_[i]; }
    [[nodiscard]] std::span<const double> points() const noexcept { return points_; }
    [[nodiscard]] double front() const { return points_.front(); }
    [[nodiscard]] double back() const { return points_.back(); }

    [[nodiscard]] bool is_uniform() const noexcept { return uniform_; }
    /// First spacing; the common spacing when uniform.
    [[nodiscard]] double spacing() const noexcept { return points_[1] - points_[0]; }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    std::vector<double> points_;
    bool uniform_ = false;
};

} // namespace gpimage
