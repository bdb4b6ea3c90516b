#include "secrelay/analytic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace secrelay::analytic {

namespace {

constexpr double pi = std::numbers::pi;

double coefficient(const SystemParams& params) {
    params.validate();
    return coefficient_a(params.lambda_e, params.alpha);
}

// lambda_r pi / (delta (2A + lambda_r pi)); the selected-relay bound meets
// delta at some d_sd > 0 only when this exceeds 1.
double relay_prefactor_ratio(double a, double lambda_r, double delta) {
    const double lr_pi = lambda_r * pi;
    return lr_pi / (delta * (2.0 * a + lr_pi));
}

}  // namespace

double coefficient_a(double lambda_e, double alpha) {
    if (!(alpha > 2.0) || !std::isfinite(alpha)) {
        throw std::invalid_argument("coefficient A requires path-loss exponent alpha > 2");
    }
    if (!(lambda_e >= 0.0) || !std::isfinite(lambda_e)) {
        throw std::invalid_argument("eavesdropper density must be >= 0");
    }
    const double b = 2.0 / alpha;
    return 2.0 * pi * lambda_e / alpha * std::tgamma(b) * std::tgamma(1.0 - b);
}

double noncolluding_scale(double alpha) {
    if (!(alpha > 2.0)) throw std::invalid_argument("path-loss exponent alpha must exceed 2");
    return pi * std::tgamma(1.0 + 2.0 / alpha);
}

double p_direct_colluding(const SystemParams& params) {
    const double a = coefficient(params);
    return std::exp(-a * params.d_sd * params.d_sd);
}

double p_relay_colluding_lower(const PolarPoint& relay, const SystemParams& params) {
    const double a = coefficient(params);
    const double r = relay.r();
    return std::exp(-0.5 * a * params.d_sd * params.d_sd - 2.0 * a * r * r);
}

double p_relay_colluding_lower_hops(const PolarPoint& relay, const SystemParams& params) {
    const double a = coefficient(params);
    const auto hops = hop_distances(relay, params.d_sd);
    return std::exp(-a * (hops.d_sr * hops.d_sr + hops.d_rd * hops.d_rd));
}

double p_selected_relay_colluding_lower(const SystemParams& params) {
    const double a = coefficient(params);
    if (params.lambda_r == 0.0) return 0.0;
    const double lr_pi = params.lambda_r * pi;
    return lr_pi / (2.0 * a + lr_pi) * std::exp(-0.5 * a * params.d_sd * params.d_sd);
}

double p_direct_noncolluding_lower(const SystemParams& params) { return p_direct_colluding(params); }

double p_relay_noncolluding_lower_jensen(const PolarPoint& relay, const SystemParams& params) {
    return p_relay_colluding_lower(relay, params);
}

std::optional<double> d_max_direct(const SecrecyTarget& delta, const SystemParams& params) {
    const double a = coefficient(params);
    if (a == 0.0) return std::nullopt;
    return std::sqrt(std::log(1.0 / delta.value()) / a);
}

std::optional<double> d_max_relay(const SecrecyTarget& delta, const SystemParams& params) {
    const double a = coefficient(params);
    if (params.lambda_r == 0.0) return 0.0;
    if (a == 0.0) return std::nullopt;
    const double ratio = relay_prefactor_ratio(a, params.lambda_r, delta.value());
    if (ratio <= 1.0) return 0.0;
    return std::sqrt(2.0 / a * std::log(ratio));
}

double secure_gain(const SecrecyTarget& delta, const SystemParams& params) {
    const double a = coefficient(params);
    if (params.lambda_e <= 0.0 || params.lambda_r <= 0.0) {
        throw std::invalid_argument("secure gain requires lambda_e > 0 and lambda_r > 0");
    }
    const double ratio = relay_prefactor_ratio(a, params.lambda_r, delta.value());
    if (ratio <= 1.0) return 0.0;
    return std::sqrt(2.0 * std::log(ratio) / std::log(1.0 / delta.value()));
}

double relay_density_threshold(const SecrecyTarget& delta, const SystemParams& params) {
    const double a = coefficient(params);
    const double d = delta.value();
    return 2.0 * a * (d + std::sqrt(d)) / (pi * (1.0 - d));
}

}  // namespace secrelay::analytic
