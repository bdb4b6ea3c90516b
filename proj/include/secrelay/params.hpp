#pragma once

#include <string_view>

namespace secrelay {

/// Network configuration.
///
/// epsilon (transmit SNR) is validated but never used: every secrecy event in
/// the model compares a legitimate SNR against an eavesdropper SNR with the
/// same transmit power, so epsilon cancels from all probabilities.
struct SystemParams {
    double alpha = 4.0;      ///< path-loss exponent, > 2
    double lambda_e = 1e-5;  ///< eavesdropper density [1/m^2]
    double lambda_r = 1e-3;  ///< relay density [1/m^2]
    double d_sd = 20.0;      ///< source-destination distance [m]
    double epsilon = 1.0;    ///< transmit SNR

    /// Throws std::invalid_argument naming the violated constraint.
    void validate() const;
};

/// Target secure connection probability, strictly inside (0, 1).
class SecrecyTarget {
public:
    explicit SecrecyTarget(double delta);
    [[nodiscard]] double value() const { return delta_; }

private:
    double delta_;
};

enum class EavesdropperModel { Colluding, NonColluding };

[[nodiscard]] std::string_view to_string(EavesdropperModel model);
/// Accepts "colluding" / "noncolluding" (also "non-colluding").
[[nodiscard]] EavesdropperModel parse_eavesdropper_model(std::string_view name);

}  // namespace secrelay
