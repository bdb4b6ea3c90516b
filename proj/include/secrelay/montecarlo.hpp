#pragma once

// Ground-truth simulation of the secrecy events.
//
// A trial samples the eavesdropper field on the simulation window plus all
// Rayleigh fading gains and tests the secrecy condition directly: a hop of
// length d from transmitter T is secure iff h d^-alpha exceeds the colluding
// sum (or non-colluding max) of h_j |x_j - T|^-alpha over eavesdroppers.
// The transmit SNR cancels and never enters.
//
// Trial i draws from TrialRng(seed, scenario tag, i). Results therefore do not
// depend on the number of OpenMP threads, and any trial can be replayed alone.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "secrelay/execution.hpp"
#include "secrelay/geometry.hpp"
#include "secrelay/params.hpp"

namespace secrelay::montecarlo {

struct Direct {};
struct FixedRelay {
    PolarPoint relay;
};
struct SelectedRelay {};
using Scenario = std::variant<Direct, FixedRelay, SelectedRelay>;

[[nodiscard]] std::string scenario_name(const Scenario& scenario);

struct TrialConfig {
    std::uint64_t trials = 100'000;
    std::uint64_t seed = 1;
    /// Unset: default_window(d_sd, lambda_e), widened to enclose a fixed relay.
    std::optional<SimulationWindow> window;
    EavesdropperModel model = EavesdropperModel::Colluding;
    Scenario scenario = Direct{};
    double ci_level = 0.95;
    /// Add the expected colluding aggregate of eavesdroppers beyond the window
    /// to every colluding sum. The residual bias is second order in the tail.
    bool tail_compensation = true;
    ExecutionMode execution = ExecutionMode::Parallel;
};

struct ProbabilityEstimate {
    std::uint64_t successes = 0;
    std::uint64_t trials = 0;
    double p_hat = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double ci_level = 0.95;

    [[nodiscard]] double standard_error() const;
    [[nodiscard]] bool contains(double p) const { return ci_low <= p && p <= ci_high; }
};

/// Wilson score interval. Throws std::invalid_argument on trials == 0,
/// successes > trials, or a level outside (0, 1).
[[nodiscard]] ProbabilityEstimate wilson_estimate(std::uint64_t successes, std::uint64_t trials,
                                                  double ci_level = 0.95);

/// Colluding: sum_j h_j d_j^-alpha. Non-colluding: max_j h_j d_j^-alpha. 0 when empty.
/// Throws std::invalid_argument on size mismatch or an eavesdropper at tx.
[[nodiscard]] double aggregate_eaves_snr(const PlanarPoint& tx, std::span<const PlanarPoint> eaves,
                                         std::span<const double> fading, double alpha,
                                         EavesdropperModel model);

/// Window a run will use for these inputs.
[[nodiscard]] SimulationWindow resolve_window(const SystemParams& params, const TrialConfig& cfg);

/// Outcome of trial `index` alone; the kernels below count exactly these.
[[nodiscard]] bool trial_outcome(const SystemParams& params, const TrialConfig& cfg, std::uint64_t index);

/// Dispatches on cfg.scenario.
[[nodiscard]] ProbabilityEstimate estimate(const SystemParams& params, const TrialConfig& cfg);

[[nodiscard]] ProbabilityEstimate run_direct(const SystemParams& params, TrialConfig cfg);
[[nodiscard]] ProbabilityEstimate run_fixed_relay(const SystemParams& params, const PolarPoint& relay,
                                                  TrialConfig cfg);
/// Relay nearest the midpoint; a trial without any relay in the window fails.
[[nodiscard]] ProbabilityEstimate run_selected_relay(const SystemParams& params, TrialConfig cfg);

struct SweepPoint {
    SystemParams params;
    std::uint64_t seed = 0;
    std::optional<ProbabilityEstimate> estimate;
    std::string error;  ///< set when this point failed; the sweep continues
};

/// Point k runs with seed derive_key(cfg.seed, kSweepTag, k), so any subset
/// of the grid reruns identically.
inline constexpr std::uint64_t kSweepTag = 0x5357454550ULL;
[[nodiscard]] std::uint64_t sweep_point_seed(std::uint64_t master_seed, std::uint64_t index);
[[nodiscard]] std::vector<SweepPoint> sweep(std::span<const SystemParams> grid, const TrialConfig& cfg);

}  // namespace secrelay::montecarlo
