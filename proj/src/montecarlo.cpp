#include "secrelay/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>

namespace secrelay::montecarlo {

namespace {

enum ScenarioTag : std::uint64_t { kDirectTag = 1, kFixedRelayTag = 2, kSelectedRelayTag = 3 };

// |x|^-alpha from a squared distance, fast path for alpha = 4.
struct PathGain {
    double alpha;
    double operator()(double d2) const {
        if (alpha == 4.0) return 1.0 / (d2 * d2);
        return std::pow(d2, -0.5 * alpha);
    }
};

// One transmitter whose secrecy is being tested.
struct Hop {
    PlanarPoint tx;
    double signal_gain = 0.0;  // d^-alpha of the legitimate link; +inf for a zero-length hop
    double tail = 0.0;         // expected colluding aggregate beyond the window
    double aggregate = 0.0;

    [[nodiscard]] bool surely_secure() const { return std::isinf(signal_gain); }
};

// Everything a trial needs that does not depend on the trial index.
struct TrialSetup {
    double alpha;
    double lambda_e;
    double lambda_r;
    EavesdropperModel model;
    Scenario scenario;
    SimulationWindow window;
    std::uint64_t seed;
    bool tail_compensation;
    double d_sd;
    PathGain gain;
};

double legit_gain(const PlanarPoint& a, const PlanarPoint& b, const PathGain& gain) {
    const double d2 = distance_squared(a, b);
    if (d2 == 0.0) return std::numeric_limits<double>::infinity();
    return gain(d2);
}

TrialSetup make_setup(const SystemParams& params, const TrialConfig& cfg) {
    params.validate();
    if (cfg.trials < 1) throw std::invalid_argument("trial count must be >= 1");
    const auto window = resolve_window(params, cfg);
    return {params.alpha, params.lambda_e, params.lambda_r, cfg.model, cfg.scenario, window, cfg.seed,
            cfg.tail_compensation, params.d_sd, PathGain{params.alpha}};
}

// Updates the hop's aggregate with one eavesdropper; false once the hop is broken.
bool absorb(Hop& hop, double fading, double d2, const TrialSetup& s) {
    if (hop.surely_secure()) return true;
    const double snr = fading * s.gain(d2);
    if (s.model == EavesdropperModel::Colluding) {
        hop.aggregate += snr;
        return hop.aggregate + hop.tail < hop.signal_gain;
    }
    hop.aggregate = std::max(hop.aggregate, snr);
    return snr < hop.signal_gain;
}

bool hop_secure(const Hop& hop, const TrialSetup& s) {
    if (hop.surely_secure()) return true;
    const double total = s.model == EavesdropperModel::Colluding ? hop.aggregate + hop.tail : hop.aggregate;
    return hop.signal_gain > total;
}

// Eavesdroppers are generated outward from the window center: the enclosed
// areas are partial sums of Exp(1)/lambda_e and the angles are uniform, which
// is the Poisson field in distribution. A larger window only appends points,
// so runs that differ in radius alone share the inner field trial by trial.
class RadialField {
public:
    RadialField(const TrialSetup& s, TrialRng& rng) : s_(s), rng_(rng) {}

    // Next eavesdropper inside the window, or false once past the rim.
    bool next(PlanarPoint& out, std::span<const PlanarPoint> avoid) {
        area_ += rng_.exponential() / s_.lambda_e;
        const double rho = std::sqrt(area_ / std::numbers::pi);
        if (rho > s_.window.radius) return false;
        for (;;) {
            const double phi = 2.0 * std::numbers::pi * rng_.uniform();
            out = {s_.window.center.x + rho * std::cos(phi), s_.window.center.y + rho * std::sin(phi)};
            bool coincident = false;
            for (const auto& a : avoid) coincident = coincident || (out == a);
            if (!coincident) return true;
        }
    }

private:
    const TrialSetup& s_;
    TrialRng& rng_;
    double area_ = 0.0;
};

bool direct_trial(const TrialSetup& s, std::uint64_t index) {
    TrialRng rng(s.seed, kDirectTag, index);
    const auto ends = Endpoints::for_distance(s.d_sd);
    Hop hop{ends.source, s.gain(s.d_sd * s.d_sd), 0.0, 0.0};
    hop.signal_gain *= rng.exponential();
    if (s.tail_compensation && s.model == EavesdropperModel::Colluding) {
        hop.tail = exterior_mean_aggregate(hop.tx, s.window, s.lambda_e, s.alpha);
    }
    if (s.lambda_e > 0.0) {
        const PlanarPoint avoid[1] = {hop.tx};
        RadialField field(s, rng);
        PlanarPoint p;
        while (field.next(p, avoid)) {
            const double h = rng.exponential();
            if (!absorb(hop, h, distance_squared(p, hop.tx), s)) return false;
        }
    }
    return hop_secure(hop, s);
}

bool two_hop_trial(const TrialSetup& s, TrialRng& rng, const PlanarPoint& relay, double tail_at_relay) {
    const auto ends = Endpoints::for_distance(s.d_sd);
    Hop first{ends.source, legit_gain(ends.source, relay, s.gain), 0.0, 0.0};
    Hop second{relay, legit_gain(relay, ends.destination, s.gain), 0.0, 0.0};
    const double h_sr = rng.exponential();
    const double h_rd = rng.exponential();
    if (!first.surely_secure()) first.signal_gain *= h_sr;
    if (!second.surely_secure()) second.signal_gain *= h_rd;
    if (s.tail_compensation && s.model == EavesdropperModel::Colluding) {
        first.tail = exterior_mean_aggregate(first.tx, s.window, s.lambda_e, s.alpha);
        second.tail = tail_at_relay;
    }
    if (s.lambda_e > 0.0) {
        const PlanarPoint avoid[2] = {first.tx, second.tx};
        RadialField field(s, rng);
        PlanarPoint p;
        while (field.next(p, avoid)) {
            // Independent fading towards each transmitter.
            const double h_s = rng.exponential();
            const double h_r = rng.exponential();
            if (!absorb(first, h_s, distance_squared(p, first.tx), s)) return false;
            if (!absorb(second, h_r, distance_squared(p, second.tx), s)) return false;
        }
    }
    return hop_secure(first, s) && hop_secure(second, s);
}

class FixedRelayKernel {
public:
    explicit FixedRelayKernel(const TrialSetup& s, const PolarPoint& relay) : s_(s), relay_(relay.to_planar()) {
        if (s.tail_compensation && s.model == EavesdropperModel::Colluding) {
            tail_ = exterior_mean_aggregate(relay_, s.window, s.lambda_e, s.alpha);
        }
    }
    bool operator()(std::uint64_t index) const {
        TrialRng rng(s_.seed, kFixedRelayTag, index);
        return two_hop_trial(s_, rng, relay_, tail_);
    }

private:
    const TrialSetup& s_;
    PlanarPoint relay_;
    double tail_ = 0.0;
};

bool selected_relay_trial(const TrialSetup& s, std::uint64_t index) {
    TrialRng rng(s.seed, kSelectedRelayTag, index);
    const auto relay = sample_nearest_to_origin(s.lambda_r, s.window, rng);
    if (!relay) return false;
    double tail = 0.0;
    if (s.tail_compensation && s.model == EavesdropperModel::Colluding) {
        tail = exterior_mean_aggregate(*relay, s.window, s.lambda_e, s.alpha);
    }
    return two_hop_trial(s, rng, *relay, tail);
}

template <class Trial>
std::uint64_t count_successes(const Trial& trial, std::uint64_t trials, ExecutionMode mode) {
    std::uint64_t successes = 0;
    if (mode == ExecutionMode::Parallel) {
        const auto n = static_cast<std::int64_t>(trials);
#pragma omp parallel for reduction(+ : successes) schedule(static)
        for (std::int64_t i = 0; i < n; ++i) {
            if (trial(static_cast<std::uint64_t>(i))) ++successes;
        }
    } else {
        for (std::uint64_t i = 0; i < trials; ++i) {
            if (trial(i)) ++successes;
        }
    }
    return successes;
}

std::uint64_t run_trials(const TrialSetup& s, std::uint64_t trials, ExecutionMode mode) {
    return std::visit(
        [&](const auto& scenario) -> std::uint64_t {
            using T = std::decay_t<decltype(scenario)>;
            if constexpr (std::is_same_v<T, Direct>) {
                return count_successes([&](std::uint64_t i) { return direct_trial(s, i); }, trials, mode);
            } else if constexpr (std::is_same_v<T, FixedRelay>) {
                const FixedRelayKernel kernel(s, scenario.relay);
                return count_successes(kernel, trials, mode);
            } else {
                return count_successes([&](std::uint64_t i) { return selected_relay_trial(s, i); }, trials,
                                       mode);
            }
        },
        s.scenario);
}

}  // namespace

std::string scenario_name(const Scenario& scenario) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Direct>) return "direct";
            else if constexpr (std::is_same_v<T, FixedRelay>) return "fixed-relay";
            else return "selected-relay";
        },
        scenario);
}

double ProbabilityEstimate::standard_error() const {
    if (trials == 0) return 0.0;
    return std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(trials));
}

ProbabilityEstimate wilson_estimate(std::uint64_t successes, std::uint64_t trials, double ci_level) {
    if (trials == 0) throw std::invalid_argument("Wilson interval needs at least one trial");
    if (successes > trials) throw std::invalid_argument("successes exceed trials");
    if (!(ci_level > 0.0 && ci_level < 1.0)) throw std::invalid_argument("confidence level must be in (0, 1)");
    const boost::math::normal_distribution<double> normal;
    const double z = boost::math::quantile(normal, 0.5 + 0.5 * ci_level);
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    ProbabilityEstimate e;
    e.successes = successes;
    e.trials = trials;
    e.p_hat = p;
    e.ci_level = ci_level;
    e.ci_low = std::clamp(center - half, 0.0, p);
    e.ci_high = std::clamp(center + half, p, 1.0);
    return e;
}

double aggregate_eaves_snr(const PlanarPoint& tx, std::span<const PlanarPoint> eaves,
                           std::span<const double> fading, double alpha, EavesdropperModel model) {
    if (eaves.size() != fading.size()) throw std::invalid_argument("one fading gain per eavesdropper required");
    if (!(alpha > 2.0)) throw std::invalid_argument("path-loss exponent alpha must exceed 2");
    const PathGain gain{alpha};
    double total = 0.0;
    for (std::size_t j = 0; j < eaves.size(); ++j) {
        const double d2 = distance_squared(eaves[j], tx);
        if (d2 == 0.0) throw std::invalid_argument("eavesdropper coincides with the transmitter");
        const double snr = fading[j] * gain(d2);
        total = model == EavesdropperModel::Colluding ? total + snr : std::max(total, snr);
    }
    return total;
}

SimulationWindow resolve_window(const SystemParams& params, const TrialConfig& cfg) {
    params.validate();
    SimulationWindow window = cfg.window.value_or(default_window(params.d_sd, params.lambda_e));
    if (!(window.radius > 0.0)) throw std::invalid_argument("window radius must be > 0");
    const auto ends = Endpoints::for_distance(params.d_sd);
    std::optional<PlanarPoint> relay;
    if (const auto* fixed = std::get_if<FixedRelay>(&cfg.scenario)) relay = fixed->relay.to_planar();
    if (!cfg.window && relay) {
        window.radius = std::max(window.radius, 2.0 * (relay->norm() + params.d_sd));
    }
    auto inside = [&](const PlanarPoint& p) { return distance(p, window.center) < window.radius; };
    if (!inside(ends.source) || !inside(ends.destination) || (relay && !inside(*relay))) {
        throw std::invalid_argument("simulation window must enclose source, destination and relay");
    }
    return window;
}

bool trial_outcome(const SystemParams& params, const TrialConfig& cfg, std::uint64_t index) {
    const auto s = make_setup(params, cfg);
    return std::visit(
        [&](const auto& scenario) -> bool {
            using T = std::decay_t<decltype(scenario)>;
            if constexpr (std::is_same_v<T, Direct>) return direct_trial(s, index);
            else if constexpr (std::is_same_v<T, FixedRelay>) return FixedRelayKernel(s, scenario.relay)(index);
            else return selected_relay_trial(s, index);
        },
        s.scenario);
}

ProbabilityEstimate estimate(const SystemParams& params, const TrialConfig& cfg) {
    const auto setup = make_setup(params, cfg);
    const auto successes = run_trials(setup, cfg.trials, cfg.execution);
    return wilson_estimate(successes, cfg.trials, cfg.ci_level);
}

ProbabilityEstimate run_direct(const SystemParams& params, TrialConfig cfg) {
    cfg.scenario = Direct{};
    return estimate(params, cfg);
}

ProbabilityEstimate run_fixed_relay(const SystemParams& params, const PolarPoint& relay, TrialConfig cfg) {
    cfg.scenario = FixedRelay{relay};
    return estimate(params, cfg);
}

ProbabilityEstimate run_selected_relay(const SystemParams& params, TrialConfig cfg) {
    cfg.scenario = SelectedRelay{};
    return estimate(params, cfg);
}

std::uint64_t sweep_point_seed(std::uint64_t master_seed, std::uint64_t index) {
    return derive_key(master_seed, kSweepTag, index);
}

std::vector<SweepPoint> sweep(std::span<const SystemParams> grid, const TrialConfig& cfg) {
    if (grid.empty()) throw std::invalid_argument("sweep grid must not be empty");
    std::vector<SweepPoint> out;
    out.reserve(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        SweepPoint point{grid[k], sweep_point_seed(cfg.seed, k), std::nullopt, {}};
        TrialConfig local = cfg;
        local.seed = point.seed;
        try {
            point.estimate = estimate(grid[k], local);
        } catch (const std::exception& e) {
            point.error = e.what();
        }
        out.push_back(std::move(point));
    }
    return out;
}

}  // namespace secrelay::montecarlo
