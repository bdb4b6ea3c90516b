#pragma once

// Closed-form secure connection probabilities and the relay-or-not thresholds.
//
// Every expression is driven by the colluding coefficient
//   A = (2 pi lambda_e / alpha) Gamma(2/alpha) Gamma(1 - 2/alpha),
// for which the colluding direct-link probability is exp(-A d_sd^2).

#include <optional>

#include "secrelay/geometry.hpp"
#include "secrelay/params.hpp"

namespace secrelay::analytic {

/// Throws std::invalid_argument for alpha <= 2 (pole of Gamma(1 - 2/alpha)) or lambda_e < 0.
[[nodiscard]] double coefficient_a(double lambda_e, double alpha);

/// pi Gamma(1 + 2/alpha): per-unit-density, per-unit-area scale of the
/// non-colluding single-hop exponent before fading.
[[nodiscard]] double noncolluding_scale(double alpha);

[[nodiscard]] double p_direct_colluding(const SystemParams& params);

/// exp(-A (d_sr^2 + d_rd^2)), evaluated as exp(-A d_sd^2/2 - 2 A r^2).
[[nodiscard]] double p_relay_colluding_lower(const PolarPoint& relay, const SystemParams& params);

/// Same bound in hop-distance form; agrees with p_relay_colluding_lower to rounding.
[[nodiscard]] double p_relay_colluding_lower_hops(const PolarPoint& relay, const SystemParams& params);

/// Midpoint-nearest relay: lambda_r pi / (2A + lambda_r pi) exp(-A d_sd^2 / 2); 0 without relays.
[[nodiscard]] double p_selected_relay_colluding_lower(const SystemParams& params);

/// Jensen bound on the non-colluding direct probability. Same value as p_direct_colluding.
[[nodiscard]] double p_direct_noncolluding_lower(const SystemParams& params);

/// Jensen bound on the non-colluding relay probability. Same value as p_relay_colluding_lower.
[[nodiscard]] double p_relay_noncolluding_lower_jensen(const PolarPoint& relay, const SystemParams& params);

/// Largest d_sd meeting the target by direct transmission. std::nullopt means
/// unbounded (no eavesdroppers). lambda_r and d_sd in params are ignored.
[[nodiscard]] std::optional<double> d_max_direct(const SecrecyTarget& delta, const SystemParams& params);

/// Largest d_sd meeting the target with the selected relay; 0 when the relay
/// prefactor alone already falls below the target. std::nullopt means unbounded.
[[nodiscard]] std::optional<double> d_max_relay(const SecrecyTarget& delta, const SystemParams& params);

/// d_max_relay / d_max_direct; 0 when relaying cannot meet the target at any
/// distance. Requires lambda_e > 0 and lambda_r > 0.
[[nodiscard]] double secure_gain(const SecrecyTarget& delta, const SystemParams& params);

/// 2A (delta + sqrt(delta)) / (pi (1 - delta)): secure_gain exceeds 1 iff lambda_r is above it.
[[nodiscard]] double relay_density_threshold(const SecrecyTarget& delta, const SystemParams& params);

}  // namespace secrelay::analytic
