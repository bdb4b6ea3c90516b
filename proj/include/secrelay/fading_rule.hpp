#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace secrelay {

struct FadingNode {
    double abscissa = 0.0;  ///< fading power gain h >= 0
    double weight = 0.0;
};

/// Fixed quadrature for expectations over a unit-mean exponential fading gain.
///
/// Nodes are the trapezoidal rule in u = ln h over [-34, 3.6] with weight
/// exp(u - e^u) du, renormalized to total mass 1. Integrands of the form
/// exp(-c h^{-2/alpha}) become smooth, rapidly decaying bumps in u, where the
/// trapezoidal rule converges geometrically (order 64 is accurate to ~1e-7).
class FadingWeightRule {
public:
    static constexpr double kLogLower = -34.0;
    static constexpr double kLogUpper = 3.6;

    /// Throws std::invalid_argument for order < 2.
    explicit FadingWeightRule(std::size_t order = 64);

    [[nodiscard]] std::span<const FadingNode> nodes() const { return nodes_; }
    [[nodiscard]] std::size_t order() const { return nodes_.size(); }

    template <class F>
    [[nodiscard]] double expectation(F&& f) const {
        double sum = 0.0;
        for (const auto& node : nodes_) sum += node.weight * f(node.abscissa);
        return sum;
    }

private:
    std::vector<FadingNode> nodes_;
};

}  // namespace secrelay
