#include "secrelay/params.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace secrelay {

namespace {

void require(bool ok, const std::string& message) {
    if (!ok) throw std::invalid_argument(message);
}

}  // namespace

void SystemParams::validate() const {
    require(std::isfinite(alpha) && alpha > 2.0,
            "path-loss exponent alpha must satisfy alpha > 2 (got " + std::to_string(alpha) + ")");
    require(std::isfinite(lambda_e) && lambda_e >= 0.0, "eavesdropper density lambda_e must be >= 0");
    require(std::isfinite(lambda_r) && lambda_r >= 0.0, "relay density lambda_r must be >= 0");
    require(std::isfinite(d_sd) && d_sd > 0.0, "source-destination distance d_sd must be > 0");
    require(std::isfinite(epsilon) && epsilon > 0.0, "transmit SNR epsilon must be > 0");
}

SecrecyTarget::SecrecyTarget(double delta) : delta_(delta) {
    require(delta > 0.0 && delta < 1.0, "target probability delta must lie in (0, 1)");
}

std::string_view to_string(EavesdropperModel model) {
    return model == EavesdropperModel::Colluding ? "colluding" : "noncolluding";
}

EavesdropperModel parse_eavesdropper_model(std::string_view name) {
    if (name == "colluding") return EavesdropperModel::Colluding;
    if (name == "noncolluding" || name == "non-colluding") return EavesdropperModel::NonColluding;
    throw std::invalid_argument("unknown eavesdropper model '" + std::string(name) +
                                "' (expected colluding or noncolluding)");
}

}  // namespace secrelay
