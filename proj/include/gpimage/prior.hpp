#pragma once

#include "gpimage/kernel.hpp"
#include "gpimage/mean_function.hpp"

namespace gpimage {

/// u ~ GP(mean, kernel).
struct GaussianProcessPrior {
    MeanFunction mean;
    Kernel kernel;
};

} // namespace gpimage
