#include "secrelay/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace secrelay {

namespace {

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + " must be finite");
}

}  // namespace

double PlanarPoint::norm() const { return std::hypot(x, y); }

double distance(const PlanarPoint& a, const PlanarPoint& b) { return std::hypot(a.x - b.x, a.y - b.y); }

double distance_squared(const PlanarPoint& a, const PlanarPoint& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy;
}

PolarPoint::PolarPoint(double r, double theta) {
    require_finite(r, "relay radius");
    require_finite(theta, "relay angle");
    if (r < 0.0) throw std::invalid_argument("relay radius must be >= 0");
    constexpr double two_pi = 2.0 * std::numbers::pi;
    theta = std::fmod(theta, two_pi);
    if (theta < 0.0) theta += two_pi;
    if (theta >= two_pi) theta = 0.0;
    r_ = r;
    theta_ = theta;
}

PlanarPoint PolarPoint::to_planar() const { return {r_ * std::cos(theta_), r_ * std::sin(theta_)}; }

PolarPoint PolarPoint::from_planar(const PlanarPoint& p) { return {p.norm(), std::atan2(p.y, p.x)}; }

Endpoints Endpoints::for_distance(double d_sd) {
    require_finite(d_sd, "d_sd");
    if (d_sd <= 0.0) throw std::invalid_argument("d_sd must be > 0");
    return {{0.5 * d_sd, 0.0}, {-0.5 * d_sd, 0.0}, d_sd};
}

HopDistances hop_distances(const PolarPoint& relay, double d_sd) {
    require_finite(d_sd, "d_sd");
    if (d_sd <= 0.0) throw std::invalid_argument("d_sd must be > 0");
    const double r = relay.r();
    const double base = r * r + 0.25 * d_sd * d_sd;
    const double cross = r * d_sd * std::cos(relay.theta());
    // Rounding can push a zero-length hop slightly negative.
    return {std::sqrt(std::max(0.0, base - cross)), std::sqrt(std::max(0.0, base + cross))};
}

double SimulationWindow::area() const { return std::numbers::pi * radius * radius; }

bool SimulationWindow::contains(const PlanarPoint& p) const {
    return distance_squared(p, center) <= radius * radius;
}

SimulationWindow default_window(double d_sd, double lambda_e) {
    require_finite(d_sd, "d_sd");
    if (d_sd <= 0.0) throw std::invalid_argument("d_sd must be > 0");
    double radius = 5.0 * d_sd;
    if (lambda_e > 0.0) radius = std::max(radius, 4.0 / std::sqrt(lambda_e));
    return {{0.0, 0.0}, radius};
}

double exterior_mean_aggregate(const PlanarPoint& tx, const SimulationWindow& window, double density,
                               double alpha) {
    if (density <= 0.0) return 0.0;
    if (!(alpha > 2.0)) throw std::invalid_argument("path-loss exponent must exceed 2");
    const double a = distance(tx, window.center);
    const double radius = window.radius;
    if (a >= radius) throw std::invalid_argument("transmitter must lie inside the simulation window");

    // 2 pi sum_k [(alpha/2)_k / k!]^2 a^{2k} R^{2-alpha-2k} / (alpha - 2 + 2k),
    // from the circle average of |x - a|^-alpha via 2F1(alpha/2, alpha/2; 1; a^2/r^2).
    const double s = 0.5 * alpha;
    const double q = (a / radius) * (a / radius);
    double coeff = 1.0;  // [(s)_k / k!]^2 * q^k
    double sum = 0.0;
    for (int k = 0; k < 100000; ++k) {
        const double term = coeff / (alpha - 2.0 + 2.0 * k);
        sum += term;
        if (term < 1e-17 * sum) break;
        const double ratio = (s + k) / (k + 1.0);
        coeff *= ratio * ratio * q;
    }
    return density * 2.0 * std::numbers::pi * std::pow(radius, 2.0 - alpha) * sum;
}

PlanarPoint uniform_in_disc(TrialRng& rng, const SimulationWindow& window) {
    for (;;) {
        const double u = 2.0 * rng.uniform() - 1.0;
        const double v = 2.0 * rng.uniform() - 1.0;
        if (u * u + v * v <= 1.0) {
            return {window.center.x + window.radius * u, window.center.y + window.radius * v};
        }
    }
}

std::vector<PlanarPoint> sample_ppp(double density, const SimulationWindow& window, TrialRng& rng) {
    if (!(density >= 0.0) || !std::isfinite(density)) throw std::invalid_argument("density must be >= 0");
    if (!(window.radius > 0.0)) throw std::invalid_argument("window radius must be > 0");
    std::vector<PlanarPoint> points;
    if (density == 0.0) return points;
    std::poisson_distribution<std::uint64_t> count_dist(density * window.area());
    const auto count = count_dist(rng);
    points.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) points.push_back(uniform_in_disc(rng, window));
    return points;
}

std::optional<PlanarPoint> nearest_to_origin(std::span<const PlanarPoint> points) {
    if (points.empty()) return std::nullopt;
    std::size_t best = 0;
    double best_norm = points[0].norm_squared();
    double best_angle = PolarPoint::from_planar(points[0]).theta();
    for (std::size_t i = 1; i < points.size(); ++i) {
        const double n = points[i].norm_squared();
        if (n > best_norm) continue;
        const double angle = PolarPoint::from_planar(points[i]).theta();
        if (n < best_norm || angle < best_angle) {
            best = i;
            best_norm = n;
            best_angle = angle;
        }
    }
    return points[best];
}

std::optional<PlanarPoint> sample_nearest_to_origin(double density, const SimulationWindow& window,
                                                    TrialRng& rng) {
    if (!(density >= 0.0) || !std::isfinite(density)) throw std::invalid_argument("density must be >= 0");
    if (density == 0.0) return std::nullopt;
    if (window.center.x != 0.0 || window.center.y != 0.0) {
        const auto field = sample_ppp(density, window, rng);
        return nearest_to_origin(field);
    }
    // P(nearest > r) = exp(-density pi r^2); the bearing is uniform.
    const double r = std::sqrt(rng.exponential() / (density * std::numbers::pi));
    if (r > window.radius) return std::nullopt;
    const double theta = 2.0 * std::numbers::pi * rng.uniform();
    return PolarPoint(r, theta).to_planar();
}

}  // namespace secrelay
