#include "secrelay/fading_rule.hpp"

#include <cmath>
#include <stdexcept>

#include "secrelay/integrate.hpp"

namespace secrelay {

FadingWeightRule::FadingWeightRule(std::size_t order) {
    if (order < 2) throw std::invalid_argument("fading rule order must be >= 2");
    nodes_.resize(order);
    const double step = (kLogUpper - kLogLower) / static_cast<double>(order - 1);
    std::vector<double> weights(order);
    for (std::size_t i = 0; i < order; ++i) {
        const double u = kLogLower + step * static_cast<double>(i);
        const double h = std::exp(u);
        double w = step * std::exp(u - h);
        if (i == 0 || i + 1 == order) w *= 0.5;
        nodes_[i] = {h, w};
        weights[i] = w;
    }
    const double mass = detail::neumaier_sum(weights);
    for (auto& node : nodes_) node.weight /= mass;
}

}  // namespace secrelay
