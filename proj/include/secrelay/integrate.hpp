#pragma once

// Globally adaptive 21-point Gauss-Kronrod integration (QUADPACK QAG scheme).
// The interval with the largest error estimate is bisected until the summed
// error meets max(abs_tol, rel_tol * |I|). Evaluation order is fixed, so
// results are bitwise reproducible.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace secrelay {

class NonConvergence : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct IntegrationOptions {
    double rel_tol = 1e-10;
    double abs_tol = 0.0;
    std::size_t max_subdivisions = 2000;
};

struct IntegrationResult {
    double value = 0.0;
    double error = 0.0;
    std::size_t evaluations = 0;

    IntegrationResult& operator+=(const IntegrationResult& other) {
        value += other.value;
        error += other.error;
        evaluations += other.evaluations;
        return *this;
    }
};

namespace detail {

struct KronrodSegment {
    double a;
    double b;
    double value;
    double error;
};

inline constexpr double kronrod_nodes[11] = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};

inline constexpr double kronrod_weights[11] = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208064523437, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

// 10-point Gauss weights for kronrod_nodes[1], [3], ..., [9].
inline constexpr double gauss_weights[5] = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

template <class F>
KronrodSegment gauss_kronrod21(F& f, double a, double b) {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    constexpr double tiny = std::numeric_limits<double>::min();
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double abs_half = std::fabs(half);

    double fv1[10];
    double fv2[10];
    const double fc = f(center);
    double res_gauss = 0.0;
    double res_kronrod = kronrod_weights[10] * fc;
    double res_abs = std::fabs(res_kronrod);
    for (int j = 0; j < 5; ++j) {
        const int k = 2 * j + 1;
        const double dx = half * kronrod_nodes[k];
        const double f1 = f(center - dx);
        const double f2 = f(center + dx);
        fv1[k] = f1;
        fv2[k] = f2;
        res_gauss += gauss_weights[j] * (f1 + f2);
        res_kronrod += kronrod_weights[k] * (f1 + f2);
        res_abs += kronrod_weights[k] * (std::fabs(f1) + std::fabs(f2));
    }
    for (int j = 0; j < 5; ++j) {
        const int k = 2 * j;
        const double dx = half * kronrod_nodes[k];
        const double f1 = f(center - dx);
        const double f2 = f(center + dx);
        fv1[k] = f1;
        fv2[k] = f2;
        res_kronrod += kronrod_weights[k] * (f1 + f2);
        res_abs += kronrod_weights[k] * (std::fabs(f1) + std::fabs(f2));
    }
    const double mean = 0.5 * res_kronrod;
    double res_asc = kronrod_weights[10] * std::fabs(fc - mean);
    for (int k = 0; k < 10; ++k) {
        res_asc += kronrod_weights[k] * (std::fabs(fv1[k] - mean) + std::fabs(fv2[k] - mean));
    }
    res_abs *= abs_half;
    res_asc *= abs_half;
    double error = std::fabs((res_kronrod - res_gauss) * half);
    if (res_asc != 0.0 && error != 0.0) {
        error = res_asc * std::min(1.0, std::pow(200.0 * error / res_asc, 1.5));
    }
    if (res_abs > tiny / (50.0 * eps)) error = std::max(50.0 * eps * res_abs, error);
    return {a, b, res_kronrod * half, error};
}

struct LargerError {
    bool operator()(const KronrodSegment& x, const KronrodSegment& y) const { return x.error < y.error; }
};

inline double neumaier_sum(std::span<const double> values) {
    double sum = 0.0;
    double carry = 0.0;
    for (double v : values) {
        const double t = sum + v;
        if (std::fabs(sum) >= std::fabs(v)) {
            carry += (sum - t) + v;
        } else {
            carry += (v - t) + sum;
        }
        sum = t;
    }
    return sum + carry;
}

}  // namespace detail

/// Integrates f over consecutive panels [p0,p1], [p1,p2], ... with one shared
/// global error budget. Throws NonConvergence when max_subdivisions is spent.
template <class F>
IntegrationResult integrate(F&& f, std::span<const double> breakpoints, const IntegrationOptions& opts) {
    using detail::KronrodSegment;
    if (breakpoints.size() < 2) throw std::invalid_argument("integrate needs at least two breakpoints");
    constexpr double eps = std::numeric_limits<double>::epsilon();

    std::priority_queue<KronrodSegment, std::vector<KronrodSegment>, detail::LargerError> active;
    std::vector<KronrodSegment> settled;  // too narrow to bisect further
    double total = 0.0;
    double total_error = 0.0;
    std::size_t evaluations = 0;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        if (breakpoints[i] == breakpoints[i + 1]) continue;
        auto seg = detail::gauss_kronrod21(f, breakpoints[i], breakpoints[i + 1]);
        evaluations += 21;
        total += seg.value;
        total_error += seg.error;
        active.push(seg);
    }

    std::size_t subdivisions = 0;
    auto tolerance = [&] { return std::max(opts.abs_tol, opts.rel_tol * std::fabs(total)); };
    while (!active.empty() && total_error > tolerance()) {
        if (subdivisions >= opts.max_subdivisions) {
            throw NonConvergence("adaptive quadrature exhausted " + std::to_string(opts.max_subdivisions) +
                                 " subdivisions (estimate " + std::to_string(total) + ", error " +
                                 std::to_string(total_error) + ")");
        }
        const KronrodSegment worst = active.top();
        active.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (std::fabs(worst.b - worst.a) <= 100.0 * eps * std::max(std::fabs(worst.a), std::fabs(worst.b)) ||
            mid == worst.a || mid == worst.b) {
            settled.push_back(worst);
            continue;
        }
        const auto left = detail::gauss_kronrod21(f, worst.a, mid);
        const auto right = detail::gauss_kronrod21(f, mid, worst.b);
        evaluations += 42;
        ++subdivisions;
        total += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        active.push(left);
        active.push(right);
    }

    // Final sum in a fixed order, independent of heap layout.
    std::vector<KronrodSegment> all = std::move(settled);
    while (!active.empty()) {
        all.push_back(active.top());
        active.pop();
    }
    std::sort(all.begin(), all.end(), [](const auto& x, const auto& y) { return x.a < y.a; });
    std::vector<double> values;
    values.reserve(all.size());
    double err = 0.0;
    for (const auto& seg : all) {
        values.push_back(seg.value);
        err += seg.error;
    }
    IntegrationResult result{detail::neumaier_sum(values), err, evaluations};
    if (!(result.error <= std::max(opts.abs_tol, opts.rel_tol * std::fabs(result.value))) &&
        !(result.error <= 1e3 * eps * std::fabs(result.value))) {
        throw NonConvergence("adaptive quadrature stalled at roundoff level (estimate " +
                             std::to_string(result.value) + ", error " + std::to_string(result.error) + ")");
    }
    return result;
}

template <class F>
IntegrationResult integrate(F&& f, double a, double b, const IntegrationOptions& opts) {
    const double points[2] = {a, b};
    return integrate(f, std::span<const double>(points), opts);
}

/// Integral over [a, inf) through x = a + scale * t / (1 - t), t in [0, 1).
template <class F>
IntegrationResult integrate_to_infinity(F&& f, double a, double scale, const IntegrationOptions& opts) {
    auto mapped = [&](double t) {
        if (t >= 1.0) return 0.0;
        const double one_minus = 1.0 - t;
        const double x = a + scale * t / one_minus;
        const double jac = scale / (one_minus * one_minus);
        const double v = f(x);
        return v == 0.0 ? 0.0 : v * jac;
    };
    return integrate(mapped, 0.0, 1.0, opts);
}

}  // namespace secrelay
