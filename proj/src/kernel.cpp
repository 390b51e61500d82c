#include "gpimage/kernel.hpp"

#include <string>

#include "gpimage/errors.hpp"

namespace gpimage {

Kernel::Kernel(std::shared_ptr<const KernelNode> node) : node_(std::move(node)) {}

double Kernel::partial(int d1, int d2, double x1, double x2) const {
    if (d1 < 0 || d2 < 0) throw ParameterError("negative derivative order");
    if (!node_->has_closed_form(d1, d2))
        throw DomainError("kernel '" + label() + "' has no closed-form partial of order (" + std::to_string(d1) +
                              ", " + std::to_string(d2) + ")",
                          d1 + d2, 0);
    return node_->closed_partial(d1, d2, x1, x2);
}

} // namespace gpimage
