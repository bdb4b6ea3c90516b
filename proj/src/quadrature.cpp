#include "secrelay/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "secrelay/analytic.hpp"

namespace secrelay::quadrature {

namespace {

constexpr double pi = std::numbers::pi;

// x^(alpha/2) for a squared distance x, with a fast path for alpha = 4.
struct HalfPower {
    double alpha;
    double operator()(double x) const {
        if (alpha == 4.0) return x * x;
        return std::pow(x, 0.5 * alpha);
    }
};

// Integral over the plane of F(|x - S|^2, |x - R|^2) for points S, R a
// distance `separation` apart. Polar coordinates about the S-R midpoint with
// the angle measured from the axis towards R; the integrand is even in the
// angle, so [0, pi] is integrated and doubled. `radii` are the length scales
// of the two factors; the radial axis is split at s, the radii and their
// offsets from s, and the remainder [2 * outer, inf) is mapped to [0, 1).
template <class F>
IntegrationResult two_point_plane_integral(F&& integrand, double separation, std::array<double, 2> radii,
                                           double bound, double rel_tol, std::size_t max_subdivisions) {
    const double s = 0.5 * separation;
    std::vector<double> breaks{0.0};
    auto add = [&](double v) {
        if (v > 0.0 && std::isfinite(v)) breaks.push_back(v);
    };
    double outer = s;
    add(s);
    for (double r : radii) {
        add(r);
        add(s + r);
        if (r < s) add(s - r);
        if (std::isfinite(r)) outer = std::max(outer, s + r);
    }
    const double tail_start = 2.0 * outer;
    add(tail_start);
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end(),
                             [&](double a, double b) { return b - a <= 1e-12 * tail_start; }),
                 breaks.end());
    breaks.back() = tail_start;

    const IntegrationOptions inner{0.1 * rel_tol, 1e-4 * rel_tol * bound / (tail_start * tail_start),
                                   max_subdivisions};
    const IntegrationOptions outer_opts{rel_tol, 1e-3 * rel_tol * bound, max_subdivisions};
    constexpr std::array<double, 3> angle_breaks{0.0, 0.5 * pi, pi};

    std::size_t evaluations = 0;
    auto radial = [&](double rho) -> double {
        if (rho == 0.0) return 0.0;
        const double base = rho * rho + s * s;
        const double cross = 2.0 * rho * s;
        auto angular = [&](double phi) {
            const double c = cross * std::cos(phi);
            return integrand(std::max(0.0, base + c), std::max(0.0, base - c));
        };
        const auto r = integrate(angular, std::span<const double>(angle_breaks), inner);
        evaluations += r.evaluations;
        return 2.0 * rho * r.value;
    };

    auto result = integrate(radial, std::span<const double>(breaks), outer_opts);
    result += integrate_to_infinity(radial, tail_start, tail_start, outer_opts);
    result.evaluations = evaluations;
    return result;
}

IntegrationOptions fading_options(double rel_tol) { return {rel_tol, 1e-16, 2000}; }

struct HopFactors {
    double k_s = 0.0;  // lambda_e pi Gamma' d_sr^2
    double k_r = 0.0;
};

HopFactors hop_factors(const HopDistances& hops, const SystemParams& params) {
    const double scale = params.lambda_e * analytic::noncolluding_scale(params.alpha);
    return {scale * hops.d_sr * hops.d_sr, scale * hops.d_rd * hops.d_rd};
}

template <class RowFn>
std::vector<double> evaluate_rows(std::size_t rows, ExecutionMode mode, RowFn&& row) {
    std::vector<double> out(rows, 0.0);
    if (mode == ExecutionMode::Parallel) {
        // Exceptions must not escape the parallel region.
        std::vector<std::string> failures(rows);
#pragma omp parallel for schedule(dynamic, 1)
        for (std::size_t i = 0; i < rows; ++i) {
            try {
                out[i] = row(i);
            } catch (const std::exception& e) {
                failures[i] = e.what();
                if (failures[i].empty()) failures[i] = "unknown failure";
            }
        }
        for (const auto& f : failures) {
            if (!f.empty()) throw NonConvergence(f);
        }
    } else {
        for (std::size_t i = 0; i < rows; ++i) out[i] = row(i);
    }
    return out;
}

double ordered_sum(const std::vector<double>& values) { return detail::neumaier_sum(values); }

}  // namespace

void QuadratureConfig::validate() const {
    if (!(rel_tol > 0.0) || !(composite_rel_tol > 0.0) || !(series_term_tol > 0.0)) {
        throw std::invalid_argument("quadrature tolerances must be positive");
    }
    if (max_subdivisions < 1 || series_max_terms < 1 || fading_order < 2) {
        throw std::invalid_argument("quadrature budgets must be positive (fading order >= 2)");
    }
}

IntegrationResult correlation_integral_colluding(double separation, double scale_s, double scale_r,
                                                 double alpha, double rel_tol, std::size_t max_subdivisions) {
    if (!(alpha > 2.0)) throw std::invalid_argument("path-loss exponent alpha must exceed 2");
    if (!(separation >= 0.0) || !(scale_s >= 0.0) || !(scale_r >= 0.0)) {
        throw std::invalid_argument("distances must be non-negative");
    }
    if (scale_s == 0.0 || scale_r == 0.0) return {};
    const HalfPower half_power{alpha};
    const double q_s = std::pow(scale_s, -alpha);
    const double q_r = std::pow(scale_r, -alpha);
    auto integrand = [&](double ds2, double dr2) {
        return 1.0 / ((1.0 + q_s * half_power(ds2)) * (1.0 + q_r * half_power(dr2)));
    };
    // Dropping either factor bounds f by the single-point integral scale^2 * A(1, alpha).
    const double unit = analytic::coefficient_a(1.0, alpha);
    const double bound = unit * std::min(scale_s * scale_s, scale_r * scale_r);
    return two_point_plane_integral(integrand, separation, {scale_s, scale_r}, bound, rel_tol,
                                    max_subdivisions);
}

IntegrationResult correlation_integral_noncolluding(double separation, double rate_s, double rate_r,
                                                    double alpha, double rel_tol,
                                                    std::size_t max_subdivisions) {
    if (!(alpha > 2.0)) throw std::invalid_argument("path-loss exponent alpha must exceed 2");
    if (!(separation >= 0.0) || !(rate_s >= 0.0) || !(rate_r >= 0.0)) {
        throw std::invalid_argument("rates and distances must be non-negative");
    }
    if (!std::isfinite(rate_s) || !std::isfinite(rate_r)) return {};
    if (rate_s == 0.0 || rate_r == 0.0) {
        return {std::numeric_limits<double>::infinity(), 0.0, 0};
    }
    const HalfPower half_power{alpha};
    auto integrand = [&](double ds2, double dr2) {
        return std::exp(-rate_s * half_power(ds2) - rate_r * half_power(dr2));
    };
    const double beta = 2.0 / alpha;
    const double unit = analytic::noncolluding_scale(alpha);
    const double bound = unit * std::min(std::pow(rate_s, -beta), std::pow(rate_r, -beta));
    return two_point_plane_integral(integrand, separation,
                                    {std::pow(rate_s, -1.0 / alpha), std::pow(rate_r, -1.0 / alpha)}, bound,
                                    rel_tol, max_subdivisions);
}

Evaluation spatial_correlation_integral_colluding(double d_sr, double d_rd, const PolarPoint& relay,
                                                  double d_sd, double alpha, const QuadratureConfig& cfg) {
    cfg.validate();
    const auto hops = hop_distances(relay, d_sd);
    const double tol = 1e-9 * d_sd;
    if (std::fabs(hops.d_sr - d_sr) > tol || std::fabs(hops.d_rd - d_rd) > tol) {
        throw std::invalid_argument("hop distances are inconsistent with the relay position");
    }
    const bool degenerate = hops.d_sr == 0.0 || hops.d_rd == 0.0;
    const auto f = correlation_integral_colluding(hops.d_sr, hops.d_sr, hops.d_rd, alpha, cfg.rel_tol,
                                                  cfg.max_subdivisions);
    return {f.value, f.error, f.evaluations, degenerate, false};
}

IntegrationResult fading_expectation(double k, double alpha, double rel_tol) {
    if (!(alpha > 2.0)) throw std::invalid_argument("path-loss exponent alpha must exceed 2");
    if (!(k >= 0.0)) throw std::invalid_argument("fading exponent scale must be >= 0");
    if (k == 0.0) return {1.0, 0.0, 0};
    const double beta = 2.0 / alpha;
    // h = e^u: integrand exp(u - e^u - k e^{-beta u}).
    auto integrand = [&](double u) { return std::exp(u - std::exp(u) - k * std::exp(-beta * u)); };
    std::vector<double> breaks{-40.0, -30.0, -20.0, -12.0, -6.0, -3.0, -1.0, 0.0, 1.0, 2.0, 3.0,
                               std::log(40.0)};
    const double knee = std::log(k) / beta;  // k e^{-beta u} = 1
    if (knee > breaks.front() && knee < breaks.back()) breaks.push_back(knee);
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    return integrate(integrand, std::span<const double>(breaks), fading_options(rel_tol));
}

Evaluation p_relay_colluding_exact(const PolarPoint& relay, const SystemParams& params,
                                   const QuadratureConfig& cfg) {
    params.validate();
    cfg.validate();
    const double a = analytic::coefficient_a(params.lambda_e, params.alpha);
    const auto hops = hop_distances(relay, params.d_sd);
    const double lower_exponent = a * (hops.d_sr * hops.d_sr + hops.d_rd * hops.d_rd);
    if (params.lambda_e == 0.0) return {1.0, 0.0, 0, false, false};
    if (hops.d_sr == 0.0 || hops.d_rd == 0.0) {
        return {std::exp(-lower_exponent), 0.0, 0, true, false};
    }
    const auto f = correlation_integral_colluding(hops.d_sr, hops.d_sr, hops.d_rd, params.alpha, cfg.rel_tol,
                                                  cfg.max_subdivisions);
    const double value = std::exp(-lower_exponent + params.lambda_e * f.value);
    return {value, value * params.lambda_e * f.error, f.evaluations, false, false};
}

Evaluation p_direct_noncolluding(const SystemParams& params, const QuadratureConfig& cfg) {
    params.validate();
    cfg.validate();
    const double k = params.lambda_e * analytic::noncolluding_scale(params.alpha) * params.d_sd * params.d_sd;
    const auto r = fading_expectation(k, params.alpha, std::min(cfg.rel_tol, 1e-12));
    return {r.value, r.error, r.evaluations, false, false};
}

Evaluation p_relay_noncolluding_lower(const PolarPoint& relay, const SystemParams& params,
                                      const QuadratureConfig& cfg) {
    params.validate();
    cfg.validate();
    const auto hops = hop_distances(relay, params.d_sd);
    const auto k = hop_factors(hops, params);
    const double tol = std::min(cfg.rel_tol, 1e-12);
    const auto first = fading_expectation(k.k_s, params.alpha, tol);
    const auto second = fading_expectation(k.k_r, params.alpha, tol);
    const bool degenerate = hops.d_sr == 0.0 || hops.d_rd == 0.0;
    return {first.value * second.value, first.error * second.value + second.error * first.value,
            first.evaluations + second.evaluations, degenerate, false};
}

Evaluation p_relay_noncolluding_exact(const PolarPoint& relay, const SystemParams& params,
                                      const QuadratureConfig& cfg) {
    auto lower = p_relay_noncolluding_lower(relay, params, cfg);
    const auto hops = hop_distances(relay, params.d_sd);
    if (params.lambda_e == 0.0 || lower.degenerate) return lower;

    const double alpha = params.alpha;
    const double beta = 2.0 / alpha;
    const auto k = hop_factors(hops, params);
    const double qs = std::pow(hops.d_sr, -alpha);
    const double qr = std::pow(hops.d_rd, -alpha);
    const FadingWeightRule rule(cfg.fading_order);
    const auto nodes = rule.nodes();

    // lambda_e g <= min(e_s, e_r), so a pair adds at most w exp(-max(e_s, e_r)).
    constexpr double negligible = 1e-18;
    std::vector<std::size_t> row_evaluations(nodes.size(), 0);
    auto row = [&](std::size_t i) {
        const double h_s = nodes[i].abscissa;
        const double e_s = k.k_s * std::pow(h_s, -beta);
        double sum = 0.0;
        for (std::size_t j = 0; j < nodes.size(); ++j) {
            const double h_r = nodes[j].abscissa;
            const double e_r = k.k_r * std::pow(h_r, -beta);
            const double weight = nodes[i].weight * nodes[j].weight;
            if (weight * std::exp(-std::max(e_s, e_r)) < negligible) continue;
            const auto g = correlation_integral_noncolluding(hops.d_sr, h_s * qs, h_r * qr, alpha,
                                                             cfg.composite_rel_tol, cfg.max_subdivisions);
            row_evaluations[i] += g.evaluations;
            // Exponents combined first: exp(-e_s - e_r) alone can underflow.
            const double lg = std::min(params.lambda_e * g.value, std::min(e_s, e_r));
            sum += weight * (std::exp(lg - e_s - e_r) - std::exp(-e_s - e_r));
        }
        return sum;
    };
    const auto rows = evaluate_rows(nodes.size(), cfg.execution, row);
    const double correction = ordered_sum(rows);

    std::size_t evaluations = lower.evaluations;
    for (auto e : row_evaluations) evaluations += e;
    Evaluation out;
    out.value = std::min(1.0, lower.value + correction);
    out.error = lower.error + cfg.composite_rel_tol * correction;
    out.evaluations = evaluations;
    out.cost_warning = evaluations > cfg.node_budget;
    return out;
}

SeriesValue selected_relay_series(double c_s, double c_r, double lambda_r, double d_sd,
                                  const QuadratureConfig& cfg) {
    if (!(lambda_r > 0.0)) throw std::invalid_argument("selected-relay series requires lambda_r > 0");
    if (!(c_s >= 0.0) || !(c_r >= 0.0)) throw std::invalid_argument("eavesdropper rates must be >= 0");
    const double total = c_s + c_r;
    const double s = total + lambda_r * pi;
    const double b = (c_r - c_s) * d_sd;
    const double x = b * b / (4.0 * s);  // ratio of consecutive terms is x / (n + 1)
    const double log_lead = std::log(pi * lambda_r / s) - 0.25 * total * d_sd * d_sd;
    if (x == 0.0) return {std::exp(log_lead), 1};

    const double log_x = std::log(x);
    auto log_term = [&](double n) { return log_lead + n * log_x - std::lgamma(n + 1.0); };
    const double peak = std::floor(x);
    const double log_peak = log_term(peak);

    // Sum scaled by the largest term, then walk down on both sides.
    std::size_t terms = 1;
    double sum = 1.0;
    auto exhausted = [&] {
        throw NonConvergence("selected-relay series exceeded " + std::to_string(cfg.series_max_terms) +
                             " terms (x = " + std::to_string(x) + ")");
    };
    double scaled = 1.0;
    for (double n = peak + 1.0;; n += 1.0) {
        scaled *= x / n;
        sum += scaled;
        if (++terms > cfg.series_max_terms) exhausted();
        if (scaled < cfg.series_term_tol * sum) break;
    }
    scaled = 1.0;
    for (double n = peak; n > 0.0; n -= 1.0) {
        scaled *= n / x;
        sum += scaled;
        if (++terms > cfg.series_max_terms) exhausted();
        if (scaled < cfg.series_term_tol * sum) break;
    }
    return {std::exp(log_peak) * sum, terms};
}

Evaluation p_selected_relay_noncolluding_lower(const SystemParams& params, const QuadratureConfig& cfg) {
    params.validate();
    cfg.validate();
    if (!(params.lambda_r > 0.0)) {
        throw std::invalid_argument("selected-relay bound requires lambda_r > 0");
    }
    if (params.lambda_e == 0.0) return {1.0, 0.0, 0, false, false};
    const double beta = 2.0 / params.alpha;
    const double scale = params.lambda_e * analytic::noncolluding_scale(params.alpha);
    const double lr_pi = params.lambda_r * pi;
    const FadingWeightRule rule(cfg.fading_order);
    const auto nodes = rule.nodes();
    std::vector<double> rates(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) rates[i] = scale * std::pow(nodes[i].abscissa, -beta);

    // Each node's value is at most pi lambda_r / s; skip pairs that cannot matter.
    constexpr double negligible = 1e-18;
    std::vector<std::size_t> row_terms(nodes.size(), 0);
    auto row = [&](std::size_t i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < nodes.size(); ++j) {
            const double weight = nodes[i].weight * nodes[j].weight;
            if (weight * lr_pi / (rates[i] + rates[j] + lr_pi) < negligible) continue;
            const auto term = selected_relay_series(rates[i], rates[j], params.lambda_r, params.d_sd, cfg);
            row_terms[i] += term.terms;
            sum += weight * term.value;
        }
        return sum;
    };
    const auto rows = evaluate_rows(nodes.size(), cfg.execution, row);
    Evaluation out;
    out.value = ordered_sum(rows);
    for (auto t : row_terms) out.evaluations += t;
    out.error = 1e-6 * out.value;  // fading-rule truncation, see FadingWeightRule
    return out;
}

}  // namespace secrelay::quadrature
