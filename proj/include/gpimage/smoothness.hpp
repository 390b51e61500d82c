#pragma once

#include <compare>
#include <limits>
#include <string>

namespace gpimage {

/// Differentiability order in N ∪ {∞}.
class Smoothness {
public:
    constexpr Smoothness() = default;
    constexpr explicit Smoothness(int order) : order_(order < 0 ? 0 : order) {}

    static constexpr Smoothness infinite() { return Smoothness(kInfinite); }

    [[nodiscard]] constexpr bool is_infinite() const { return order_ == kInfinite; }
    [[nodiscard]] constexpr int value() const { return order_; }

    [[nodiscard]] constexpr bool admits(int order) const { return is_infinite() || order <= order_; }

    /// Saturating subtraction; ∞ − n = ∞.
    [[nodiscard]] constexpr Smoothness minus(int order) const {
        if (is_infinite()) return *this;
        return Smoothness(order_ - order);
    }

    friend constexpr auto operator<=>(Smoothness, Smoothness) = default;

    [[nodiscard]] std::string to_string() const {
        return is_infinite() ? std::string("inf") : std::to_string(order_);
    }

private:
    static constexpr int kInfinite = std::numeric_limits<int>::max();
    int order_ = 0;
};

constexpr Smoothness min(Smoothness a, Smoothness b) { return a < b ? a : b; }

} // namespace gpimage
