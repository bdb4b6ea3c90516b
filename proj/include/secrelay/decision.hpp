#pragma once

// Relay-or-not decision from the colluding closed-form thresholds.

#include <optional>
#include <string>
#include <string_view>

#include "secrelay/params.hpp"

namespace secrelay {

enum class DecisionOutcome { DirectSufficient, UseRelay, Infeasible };

[[nodiscard]] std::string_view to_string(DecisionOutcome outcome);

struct DecisionReport {
    DecisionOutcome outcome = DecisionOutcome::Infeasible;
    double d_sd = 0.0;
    double lambda_r = 0.0;
    double delta = 0.0;
    EavesdropperModel model = EavesdropperModel::Colluding;
    std::optional<double> d_max_direct;  ///< nullopt: unbounded
    std::optional<double> d_max_relay;   ///< nullopt: unbounded
    std::optional<double> secure_gain;   ///< nullopt when lambda_e or lambda_r is 0
    double relay_density_threshold = 0.0;
    std::string model_note;

    /// Outcome implied by the recorded thresholds alone.
    [[nodiscard]] DecisionOutcome rederive() const;
    [[nodiscard]] bool consistent() const { return rederive() == outcome; }
};

/// Thresholds are closed: d_sd equal to a limit satisfies it. Throws
/// std::invalid_argument on invalid params. For non-colluding eavesdroppers
/// the same rule is applied as a sufficient condition and the note says so.
[[nodiscard]] DecisionReport decide(const SystemParams& params, const SecrecyTarget& delta,
                                    EavesdropperModel model = EavesdropperModel::Colluding);

}  // namespace secrelay
