#pragma once

// Experiment plumbing behind the command-line tool: named quantities, sweep
// plans, figure presets, CSV tables and run manifests.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "secrelay/geometry.hpp"
#include "secrelay/montecarlo.hpp"
#include "secrelay/params.hpp"
#include "secrelay/quadrature.hpp"

namespace secrelay::experiment {

inline constexpr std::string_view kToolName = "secrelay-cli";
inline constexpr std::string_view kToolVersion = "1.0.0";
/// Environment variable that replaces the default master seed.
inline constexpr std::string_view kSeedEnv = "SECRELAY_SEED";

enum class QuantityKind { Analytic, Quadrature, MonteCarlo };

struct QuantityInfo {
    std::string_view name;
    QuantityKind kind;
    bool uses_relay;
    bool uses_delta;
    std::string_view summary;
};

/// Every quantity accepted by evaluate(), in help order.
[[nodiscard]] std::span<const QuantityInfo> quantities();
/// Throws std::invalid_argument for unknown names.
[[nodiscard]] const QuantityInfo& quantity_info(std::string_view name);

struct EvalRequest {
    SystemParams params;
    double delta = 0.7;
    PolarPoint relay;  ///< fixed relay for relay-* quantities
    EavesdropperModel model = EavesdropperModel::Colluding;  ///< Monte Carlo quantities only
    std::uint64_t trials = 100'000;
    std::uint64_t seed = 1;
    std::optional<double> window_radius;
    quadrature::QuadratureConfig quad;
};

struct EvalOutcome {
    std::optional<double> value;  ///< nullopt: unbounded distance
    std::optional<montecarlo::ProbabilityEstimate> estimate;
    std::optional<quadrature::Evaluation> numeric;
};

/// Throws std::invalid_argument on bad input and NonConvergence from the
/// numerical kernels.
[[nodiscard]] EvalOutcome evaluate(std::string_view quantity, const EvalRequest& request);

/// Sweepable names: alpha, lambda-e, lambda-r, d-sd, delta, relay-r, relay-theta.
void set_parameter(EvalRequest& request, std::string_view name, double value);

struct SweepAxis {
    std::string parameter;
    double start = 0.0;
    double stop = 0.0;
    std::size_t points = 1;
    bool log = false;

    [[nodiscard]] std::vector<double> values() const;
    [[nodiscard]] std::string spec() const;  ///< inverse of parse_sweep_axis
};

/// Parses `<param>=<start>:<stop>:<points>[:log]`.
[[nodiscard]] SweepAxis parse_sweep_axis(std::string_view text);

struct ColumnSpec {
    std::string label;
    std::string quantity;
    EvalRequest request;
};

/// Rows are the Cartesian product of the axes (first axis outermost). Row k
/// runs its Monte Carlo columns with seed sweep_point_seed(column seed, k).
struct Plan {
    std::string name;
    std::vector<SweepAxis> axes;
    std::vector<ColumnSpec> columns;
    std::vector<std::string> notes;
};

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::optional<double>>> rows;
    struct Diagnostic {
        std::size_t row;
        std::string column;
        std::string message;
    };
    std::vector<Diagnostic> diagnostics;

    [[nodiscard]] std::size_t column_index(std::string_view name) const;
    [[nodiscard]] std::vector<std::optional<double>> column(std::string_view name) const;
};

[[nodiscard]] Table run_plan(const Plan& plan);

/// One column per quantity, labelled by the quantity name.
[[nodiscard]] Plan sweep_plan(const EvalRequest& base, std::vector<SweepAxis> axes,
                              std::span<const std::string> quantity_names);

inline constexpr std::string_view kFigureNames[] = {"fig2", "fig3", "fig4", "fig5", "fig6"};

struct FigureOptions {
    std::uint64_t trials = 100'000;
    std::uint64_t seed = 1;
    std::optional<double> window_radius;
    quadrature::QuadratureConfig quad;
    std::size_t lambda_e_points = 9;
};

/// Throws std::invalid_argument for unknown names.
[[nodiscard]] Plan figure_plan(std::string_view name, const FigureOptions& options);

/// Shortest decimal that parses back to the same double.
[[nodiscard]] std::string format_double(double value);
[[nodiscard]] std::string to_csv(const Table& table);
[[nodiscard]] std::string diagnostics_csv(const Table& table);

/// Writes through a temporary file in the same directory, then renames.
void write_atomic(const std::filesystem::path& path, std::string_view content);

[[nodiscard]] std::string checksum(std::string_view content);

struct RunRecord {
    std::string command;  ///< "sweep" or "figure"
    std::optional<std::string> figure;
    std::vector<SweepAxis> axes;
    std::vector<std::string> quantity_names;
    EvalRequest base;
    std::size_t figure_points = 9;  ///< lambda_e grid size of figure runs
    std::vector<std::string> notes;
};

/// Canonical manifest: sorted keys, output name -> checksum.
[[nodiscard]] nlohmann::json make_manifest(const RunRecord& record,
                                           std::span<const std::pair<std::string, std::string>> outputs,
                                           std::string_view timestamp);
[[nodiscard]] RunRecord record_from_manifest(const nlohmann::json& manifest);
[[nodiscard]] Plan plan_for(const RunRecord& record);

[[nodiscard]] nlohmann::json params_json(const EvalRequest& request);
[[nodiscard]] nlohmann::json quadrature_json(const quadrature::QuadratureConfig& cfg);
[[nodiscard]] std::string utc_timestamp();

}  // namespace secrelay::experiment
