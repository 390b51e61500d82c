#include "gpimage/grid.hpp"

#include <cmath>
#include <string>

#include "gpimage/errors.hpp"

namespace gpimage {

Grid::Grid(std::vector<double> points) : points_(std::move(points)) {
    if (points_.size() < 2) throw GridError("grid needs at least two points");
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (!std::isfinite(points_[i])) throw GridError("grid point " + std::to_string(i) + " is not finite");
        if (i > 0 && !(points_[i] > points_[i - 1]))
            throw GridError("grid points must be strictly increasing (index " + std::to_string(i) + ")");
    }
    const double h0 = points_[1] - points_[0];
    uniform_ = true;
    for (std::size_t i = 1; i + 1 < points_.size(); ++i) {
        if (std::abs((points_[i + 1] - points_[i]) - h0) > 1e-12 * h0) {
            uniform_ = false;
            break;
        }
    }
}

Grid Grid::uniform(double start, double stop, std::size_t count) {
    if (count < 2) throw GridError("uniform grid needs count >= 2");
    if (!(stop > start)) throw GridError("uniform grid needs stop > start");
    std::vector<double> pts(count);
    const double h = (stop - start) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) pts[i] = start + h * static_cast<double>(i);
    pts.back() = stop;
    return Grid(std::move(pts));
}

} // namespace gpimage
