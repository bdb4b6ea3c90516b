#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "secrelay/analytic.hpp"
#include "secrelay/decision.hpp"

using namespace secrelay;
namespace an = secrelay::analytic;

namespace {

SystemParams make(double lambda_e, double d_sd, double lambda_r, double alpha = 4.0) {
    SystemParams p;
    p.alpha = alpha;
    p.lambda_e = lambda_e;
    p.d_sd = d_sd;
    p.lambda_r = lambda_r;
    return p;
}

}  // namespace

TEST_CASE("worked examples") {
    const SecrecyTarget delta(0.7);
    auto r = decide(make(1e-5, 80, 1e-3), delta);
    CHECK(r.outcome == DecisionOutcome::DirectSufficient);
    CHECK(*r.d_max_direct == doctest::Approx(85.0).epsilon(1.0 / 85));
    CHECK(to_string(r.outcome) == "direct-sufficient");

    r = decide(make(1e-5, 100, 1e-3), delta);
    CHECK(r.outcome == DecisionOutcome::UseRelay);
    CHECK(*r.d_max_relay == doctest::Approx(115.0).epsilon(1.0 / 115));
    CHECK(*r.secure_gain > 1.0);
    CHECK(to_string(r.outcome) == "use-relay");

    r = decide(make(1e-5, 100, 1e-4), delta);
    CHECK(r.outcome == DecisionOutcome::Infeasible);
    CHECK(r.relay_density_threshold > 1e-4);
    CHECK(*r.secure_gain < 1.0);
    CHECK(to_string(r.outcome) == "infeasible");

    for (const auto& report : {decide(make(1e-5, 80, 1e-3), delta), decide(make(1e-5, 100, 1e-3), delta),
                               decide(make(1e-5, 100, 1e-4), delta)}) {
        CHECK(report.consistent());
        CHECK(report.delta == 0.7);
    }
}

TEST_CASE("no eavesdroppers") {
    const auto r = decide(make(0.0, 1e6, 0.0), SecrecyTarget(0.99));
    CHECK(r.outcome == DecisionOutcome::DirectSufficient);
    CHECK_FALSE(r.d_max_direct.has_value());
    CHECK_FALSE(r.d_max_relay.has_value());
    CHECK_FALSE(r.secure_gain.has_value());
    CHECK(r.relay_density_threshold == 0.0);
    CHECK(r.consistent());
}

TEST_CASE("no relays") {
    const auto r = decide(make(1e-5, 100, 0.0), SecrecyTarget(0.7));
    CHECK(r.outcome == DecisionOutcome::Infeasible);
    CHECK_FALSE(r.secure_gain.has_value());
    CHECK(r.consistent());
}

TEST_CASE("boundaries are closed") {
    const SecrecyTarget delta(0.7);
    const auto base = make(1e-5, 1, 1e-3);
    const double direct = *an::d_max_direct(delta, base);
    const double relay = *an::d_max_relay(delta, base);
    CHECK(decide(make(1e-5, direct, 1e-3), delta).outcome == DecisionOutcome::DirectSufficient);
    CHECK(decide(make(1e-5, direct * (1 - 1e-9), 1e-3), delta).outcome == DecisionOutcome::DirectSufficient);
    CHECK(decide(make(1e-5, direct * (1 + 1e-9), 1e-3), delta).outcome == DecisionOutcome::UseRelay);
    CHECK(decide(make(1e-5, relay, 1e-3), delta).outcome == DecisionOutcome::UseRelay);
    CHECK(decide(make(1e-5, relay * (1 - 1e-9), 1e-3), delta).outcome == DecisionOutcome::UseRelay);
    CHECK(decide(make(1e-5, relay * (1 + 1e-9), 1e-3), delta).outcome == DecisionOutcome::Infeasible);
}

TEST_CASE("reports agree with their own thresholds and the bounds") {
    std::mt19937_64 gen(99);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 2000; ++i) {
        const auto p = make(std::pow(10.0, -7 + 4 * u(gen)), 1 + 300 * u(gen), std::pow(10.0, -6 + 5 * u(gen)),
                            2.2 + 4 * u(gen));
        const SecrecyTarget delta(0.05 + 0.9 * u(gen));
        const auto r = decide(p, delta);
        CHECK(r.consistent());
        switch (r.outcome) {
            case DecisionOutcome::DirectSufficient:
                CHECK(an::p_direct_colluding(p) >= delta.value() * (1 - 1e-12));
                break;
            case DecisionOutcome::UseRelay:
                CHECK(an::p_direct_colluding(p) < delta.value());
                CHECK(an::p_selected_relay_colluding_lower(p) >= delta.value() * (1 - 1e-12));
                break;
            case DecisionOutcome::Infeasible:
                CHECK(an::p_direct_colluding(p) < delta.value());
                CHECK(an::p_selected_relay_colluding_lower(p) < delta.value() * (1 + 1e-12));
                break;
        }
    }
}

TEST_CASE("outcome moves one way with distance") {
    const SecrecyTarget delta(0.7);
    int prev = 0;
    for (double d = 1; d < 400; d += 3) {
        const int rank = static_cast<int>(decide(make(1e-5, d, 1e-3), delta).outcome);
        CHECK(rank >= prev);
        prev = rank;
    }
    CHECK(prev == static_cast<int>(DecisionOutcome::Infeasible));
}

TEST_CASE("model note and validation") {
    const SecrecyTarget delta(0.7);
    const auto col = decide(make(1e-5, 100, 1e-3), delta);
    const auto non = decide(make(1e-5, 100, 1e-3), delta, EavesdropperModel::NonColluding);
    CHECK(non.outcome == col.outcome);
    CHECK(non.model == EavesdropperModel::NonColluding);
    CHECK(non.model_note.find("sufficient") != std::string::npos);
    CHECK(col.model_note != non.model_note);
    CHECK_THROWS_AS((void)decide(make(1e-5, 100, 1e-3, 2.0), delta), std::invalid_argument);
    CHECK_THROWS_AS((void)decide(make(1e-5, -1, 1e-3), delta), std::invalid_argument);
    CHECK_THROWS_AS((void)decide(make(1e-5, 100, -1e-3), delta), std::invalid_argument);
}
