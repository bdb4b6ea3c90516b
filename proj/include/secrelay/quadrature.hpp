#pragma once

// Numerical evaluation of the secure connection probabilities that have no
// closed form: the exact colluding relay probability, the non-colluding
// direct and relay probabilities, and the selected-relay non-colluding bound.
//
// Conventions: beta = 2/alpha, Gamma' = Gamma(1 + beta). A single hop of
// length d against non-colluding eavesdroppers is secure with probability
// E_h exp(-lambda_e pi Gamma' d^2 h^-beta), h ~ Exp(1).

#include <cstddef>

#include "secrelay/execution.hpp"
#include "secrelay/fading_rule.hpp"
#include "secrelay/geometry.hpp"
#include "secrelay/integrate.hpp"
#include "secrelay/params.hpp"

namespace secrelay::quadrature {

struct QuadratureConfig {
    double rel_tol = 1e-6;             ///< 1-D and 2-D spatial integrals
    double composite_rel_tol = 1e-3;   ///< inner plane integral of the 4-D composite
    std::size_t max_subdivisions = 4000;
    std::size_t series_max_terms = 1'000'000;  ///< per fading pair; terms needed grow like sqrt(x)
    double series_term_tol = 1e-12;
    std::size_t fading_order = 64;     ///< nodes per fading dimension
    std::size_t node_budget = 50'000'000;  ///< composite integrand evaluations before a cost warning
    ExecutionMode execution = ExecutionMode::Parallel;

    void validate() const;
};

struct Evaluation {
    double value = 0.0;
    double error = 0.0;            ///< estimated absolute error
    std::size_t evaluations = 0;   ///< integrand evaluations
    bool degenerate = false;       ///< a zero-length hop was treated as surely secure
    bool cost_warning = false;     ///< composite work exceeded node_budget
};

/// f = int_{R^2} [(1 + |x - S|^a / scale_s^a)(1 + |x - R|^a / scale_r^a)]^-1 dx
/// for two points a distance `separation` apart. Zero when either scale is 0.
[[nodiscard]] IntegrationResult correlation_integral_colluding(double separation, double scale_s,
                                                               double scale_r, double alpha,
                                                               double rel_tol,
                                                               std::size_t max_subdivisions = 4000);

/// g = int_{R^2} exp(-rate_s |x - S|^a - rate_r |x - R|^a) dx. Zero when either rate is infinite.
[[nodiscard]] IntegrationResult correlation_integral_noncolluding(double separation, double rate_s,
                                                                  double rate_r, double alpha,
                                                                  double rel_tol,
                                                                  std::size_t max_subdivisions = 4000);

/// Spatial dependence term of the exact colluding relay probability, with the
/// relay located explicitly. Throws std::invalid_argument when (d_sr, d_rd)
/// disagree with the relay position; NonConvergence on budget exhaustion.
[[nodiscard]] Evaluation spatial_correlation_integral_colluding(double d_sr, double d_rd,
                                                                const PolarPoint& relay, double d_sd,
                                                                double alpha, const QuadratureConfig& cfg);

/// E_h exp(-k h^-beta) for h ~ Exp(1), by adaptive quadrature over u = ln h.
[[nodiscard]] IntegrationResult fading_expectation(double k, double alpha, double rel_tol = 1e-12);

/// exp(-(A d_sr^2 + A d_rd^2 - lambda_e f)).
[[nodiscard]] Evaluation p_relay_colluding_exact(const PolarPoint& relay, const SystemParams& params,
                                                 const QuadratureConfig& cfg = {});

/// E_h exp(-lambda_e pi Gamma' d_sd^2 h^-beta).
[[nodiscard]] Evaluation p_direct_noncolluding(const SystemParams& params, const QuadratureConfig& cfg = {});

/// Product of the two single-hop non-colluding factors.
[[nodiscard]] Evaluation p_relay_noncolluding_lower(const PolarPoint& relay, const SystemParams& params,
                                                    const QuadratureConfig& cfg = {});

/// E over (h_sr, h_rd) of exp(-K_s h_sr^-beta - K_r h_rd^-beta + lambda_e g(h_sr, h_rd)),
/// split as lower bound + E[base * expm1(lambda_e g)] with the second term on
/// the tensor fading rule. The split keeps exact >= lower structurally.
[[nodiscard]] Evaluation p_relay_noncolluding_exact(const PolarPoint& relay, const SystemParams& params,
                                                    const QuadratureConfig& cfg = {});

struct SeriesValue {
    double value = 0.0;
    std::size_t terms = 0;
};

/// Inner sum of the selected-relay non-colluding bound for one fading pair:
///   sum_n pi lambda_r b^{2n} exp(-C d^2/4) / (n! 4^n s^{n+1}),
/// C = c_s + c_r, b = (c_r - c_s) d, s = C + lambda_r pi, where c_* are the
/// per-area eavesdropper rates lambda_e pi Gamma' h_*^-beta. Terms are summed
/// in log space outward from the largest one.
[[nodiscard]] SeriesValue selected_relay_series(double c_s, double c_r, double lambda_r, double d_sd,
                                                const QuadratureConfig& cfg);

/// Fading expectation of selected_relay_series on the tensor fading rule.
[[nodiscard]] Evaluation p_selected_relay_noncolluding_lower(const SystemParams& params,
                                                             const QuadratureConfig& cfg = {});

}  // namespace secrelay::quadrature
