#include "secrelay/decision.hpp"

#include <stdexcept>

#include "secrelay/analytic.hpp"

namespace secrelay {

namespace {

bool within(double d, const std::optional<double>& limit) { return !limit || d <= *limit; }

std::string note_for(EavesdropperModel model) {
    if (model == EavesdropperModel::Colluding) {
        return "colluding eavesdroppers: thresholds are exact for the closed-form lower bounds";
    }
    return "non-colluding eavesdroppers: colluding thresholds applied as a sufficient condition";
}

}  // namespace

std::string_view to_string(DecisionOutcome outcome) {
    switch (outcome) {
        case DecisionOutcome::DirectSufficient: return "direct-sufficient";
        case DecisionOutcome::UseRelay: return "use-relay";
        case DecisionOutcome::Infeasible: return "infeasible";
    }
    throw std::logic_error("unknown decision outcome");
}

DecisionOutcome DecisionReport::rederive() const {
    if (within(d_sd, d_max_direct)) return DecisionOutcome::DirectSufficient;
    if (lambda_r > relay_density_threshold && within(d_sd, d_max_relay)) return DecisionOutcome::UseRelay;
    return DecisionOutcome::Infeasible;
}

DecisionReport decide(const SystemParams& params, const SecrecyTarget& delta, EavesdropperModel model) {
    params.validate();
    DecisionReport report;
    report.d_sd = params.d_sd;
    report.lambda_r = params.lambda_r;
    report.delta = delta.value();
    report.model = model;
    report.model_note = note_for(model);
    report.relay_density_threshold = analytic::relay_density_threshold(delta, params);

    if (params.lambda_e == 0.0) {
        report.outcome = DecisionOutcome::DirectSufficient;
        report.model_note += "; no eavesdroppers, every distance is reachable directly";
        return report;
    }
    report.d_max_direct = analytic::d_max_direct(delta, params);
    report.d_max_relay = analytic::d_max_relay(delta, params);
    if (params.lambda_r > 0.0) report.secure_gain = analytic::secure_gain(delta, params);
    report.outcome = report.rederive();
    return report;
}

}  // namespace secrelay
